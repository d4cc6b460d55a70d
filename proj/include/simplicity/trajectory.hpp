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

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace simplicity {

/// Positions of N particles in D dimensions, one row per particle (meters).
using Configuration = Eigen::MatrixXd;

/// Uniformly time-sampled particle positions, t_k = t0 + k*dt.
///
/// Holds J+1 configurations of identical shape. Velocities and accelerations
/// are never stored; they are the backward differences below.
struct DiscreteTrajectory {
    std::vector<Configuration> positions;
    Eigen::VectorXd masses;
    double dt = 1.0;
    double t0 = 0.0;

    std::size_t steps() const { return positions.empty() ? 0 : positions.size() - 1; }
    Eigen::Index particles() const { return masses.size(); }
    Eigen::Index dims() const { return positions.empty() ? 0 : positions.front().cols(); }
    double time(std::size_t k) const { return t0 + static_cast<double>(k) * dt; }

    /// Throws ValidationError unless J >= 2, shapes agree, entries are finite
    /// and masses are positive.
    void validate() const;
};

/// (r_k - r_{k-1}) / dt, defined for 1 <= k <= J.
Configuration discrete_velocity(const DiscreteTrajectory& traj, std::size_t k);

/// (v_k - v_{k-1}) / dt = (r_k - 2 r_{k-1} + r_{k-2}) / dt^2, for 2 <= k <= J.
Configuration discrete_accel(const DiscreteTrajectory& traj, std::size_t k);

/// Velocity attached to sample k for dumps and state coding: the backward
/// difference for k >= 1 and the first forward difference at k = 0.
Configuration sample_velocity(const DiscreteTrajectory& traj, std::size_t k);

}  // namespace simplicity
