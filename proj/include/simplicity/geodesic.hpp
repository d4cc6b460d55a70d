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

// Jacobi (Maupertuis) reformulation: at fixed energy E the Newtonian paths
// are geodesics of g_jk(q) = 2 (E - V(q)) m_jk on configuration space.
//
// Coordinates q flatten an N x D configuration particle by particle, so
// q[n*D + d] is coordinate d of particle n.

#include <cstddef>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "simplicity/banded_newton.hpp"
#include "simplicity/potential.hpp"
#include "simplicity/trajectory.hpp"

namespace simplicity {

struct JacobiMetric {
    double energy = 0.0;              // J
    PotentialSpec potential;
    Eigen::VectorXd masses;           // kg, one per particle
    Eigen::Index dims = 1;
    /// Symmetric positive definite m_jk over all N*D coordinates. Empty
    /// means diag(m_n) repeated per coordinate.
    Eigen::MatrixXd mass_matrix;

    Eigen::Index coordinate_count() const { return masses.size() * dims; }
    Eigen::MatrixXd full_mass_matrix() const;
    void validate() const;
};

struct ConfigPath {
    std::vector<Eigen::VectorXd> samples;  // q_0 .. q_M

    std::size_t segments() const { return samples.empty() ? 0 : samples.size() - 1; }
};

Eigen::VectorXd flatten(const Configuration& r);
Configuration unflatten(const Eigen::VectorXd& q, Eigen::Index particles, Eigen::Index dims);

/// E - V(q). Positive inside the allowed region.
double kinetic_budget(const Eigen::VectorXd& q, const JacobiMetric& jm);

/// 2 (E - V(q)) m_jk. Throws SingularityError naming q when E <= V(q).
Eigen::MatrixXd jacobi_metric_at(const Eigen::VectorXd& q, const JacobiMetric& jm);

/// Sum of sqrt(2 (E - V(mid)) dq^T m dq) over segments, V at the segment
/// midpoint. Throws SingularityError when a midpoint reaches E <= V.
double path_length(const ConfigPath& p, const JacobiMetric& jm);

/// dL/dq_i at the interior samples, entry i-1 for q_i.
std::vector<Eigen::VectorXd> path_length_gradient(const ConfigPath& p, const JacobiMetric& jm);

/// Max-norm of path_length_gradient projected normal to the local chord
/// q_{i+1} - q_{i-1}. The tangential part only moves samples along the path.
double first_variation_norm(const ConfigPath& p, const JacobiMetric& jm);

/// M-segment path stationarizing path_length with fixed endpoints, from the
/// equally spaced chord. Samples are spaced at equal Jacobi length. Throws InfeasibilityError when the endpoints or the
/// starting chord leave the allowed region and ConvergenceError otherwise.
ConfigPath geodesic_solve(const Eigen::VectorXd& q0, const Eigen::VectorXd& q1,
                          const JacobiMetric& jm, std::size_t M,
                          const NewtonOptions& options = {});

/// Time stamps t_0 = 0, t_i = t_{i-1} + sqrt(dq^T m dq / (2 (E - V(mid)))).
std::vector<double> path_times(const ConfigPath& p, const JacobiMetric& jm);

/// Resamples the path onto `steps` uniform time steps (default M) with a
/// not-a-knot cubic spline through the time-stamped samples.
DiscreteTrajectory time_reparameterize(const ConfigPath& p, const JacobiMetric& jm,
                                       std::optional<std::size_t> steps = std::nullopt,
                                       double t0 = 0.0);

/// Not-a-knot cubic spline through (t_i, y_i), evaluated at `at`. Three
/// knots give the interpolating parabola and two the straight line.
std::vector<double> cubic_spline(const std::vector<double>& t, const std::vector<double>& y,
                                 const std::vector<double>& at);

}  // namespace simplicity
