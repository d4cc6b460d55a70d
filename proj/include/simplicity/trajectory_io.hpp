/*
 Copyright 2026 The Simplicity Mechanics Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#pragma once

// CSV dumps with 17 significant digits, so values round-trip exactly.

#include <iosfwd>
#include <string>
#include <vector>

#include "simplicity/geodesic.hpp"
#include "simplicity/potential.hpp"
#include "simplicity/relativity.hpp"
#include "simplicity/trajectory.hpp"

namespace simplicity {

/// Shortest-exact formatting used by every CSV writer.
std::string format_real(double x);

/// `t,particle,x[,y,z],vx[,vy,vz],E`, one row per (step, particle). E is the
/// system energy at the step; row 0 repeats step 1, where the first discrete
/// velocity is defined.
void write_trajectory_csv(std::ostream& out, const DiscreteTrajectory& traj, const PotentialSpec& V);

/// Parses a trajectory dump. Masses are not part of the dump and times must be
/// uniformly spaced. Throws DecodeError on malformed input.
DiscreteTrajectory read_trajectory_csv(std::istream& in, const Eigen::VectorXd& masses);

/// `k,t,E,relative_deviation` for k = 1..J against E_1.
void write_energy_csv(std::ostream& out, const DiscreteTrajectory& traj, const PotentialSpec& V);

/// `t,x,y,z,u0,u1,u2,u3,ds`. Row k carries the four-velocity of segment k
/// (the last row repeats the final segment) and ds of the segment ending at
/// event k (0 for the first event).
void write_worldline_csv(std::ostream& out, const Worldline& w, const StaticMetric& sm);

/// `i,t,q0..q{n-1},kinetic_budget`, times from path_times.
void write_path_csv(std::ostream& out, const ConfigPath& p, const JacobiMetric& jm);

}  // namespace simplicity
