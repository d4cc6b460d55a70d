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

// Discrete variational mechanics on a uniform time grid.
//
// The discrete action sums (T(v_{k+1}) - V(r_k) + E) dt over k = 0..J-1 with
// v_{k+1} = (r_{k+1} - r_k) / dt. Its stationarity condition at an interior
// sample is
//     m (v_{k+1} - v_k) / dt + grad V(r_k) = 0,
// the discrete Newton law, and dS/dr_k = -dt * residual_k. Position Verlet is
// exactly the rule that zeroes this residual one step at a time.

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "simplicity/banded_newton.hpp"
#include "simplicity/potential.hpp"
#include "simplicity/trajectory.hpp"

namespace simplicity {

struct LagrangianBreakdown {
    std::vector<double> kinetic;    // T_k, J
    std::vector<double> potential;  // V_k, J
    std::vector<double> lagrangian; // T_k - V_k, J
    double energy_offset = 0.0;     // E, J
    double dt = 0.0;
    double action = 0.0;            // sum (L_k + E) dt, J*s
    double tau = 0.0;               // J * dt

    /// action / tau.
    double mean_rate() const { return tau > 0.0 ? action / tau : 0.0; }
};

/// E defaults to energy(traj, V, 1).
LagrangianBreakdown discrete_action(const DiscreteTrajectory& traj, const PotentialSpec& V,
                                    std::optional<double> E = std::nullopt);

struct SumByParts {
    double lhs = 0.0;
    double rhs = 0.0;
};

/// U_J V_J against sum_{k=0}^{J} U_k v_k + sum_{k=1}^{J} V_{k-1} u_k with
/// U, V the partial sums of u, v.
SumByParts sum_by_parts(std::span<const double> u, std::span<const double> v);

/// Residuals at the interior samples k = 1..J-1 (entry k-1).
std::vector<Configuration> el_residual(const DiscreteTrajectory& traj, const PotentialSpec& V);
std::vector<Configuration> el_residual(const DiscreteTrajectory& traj, const GradientFunction& grad);

/// max(m) * max|r| / dt^2, the size of the individual terms of a residual.
double force_scale(const DiscreteTrajectory& traj);

/// Max residual entry over force_scale.
double relative_residual(const DiscreteTrajectory& traj, const std::vector<Configuration>& residuals);

/// r_next = 2 r_curr - r_prev - dt^2 M^-1 grad V(r_curr). `step` is the index
/// of r_curr, used by time-dependent potentials.
Configuration step_verlet(const Configuration& r_prev, const Configuration& r_curr,
                          const PotentialSpec& V, const Eigen::VectorXd& masses, double dt,
                          std::size_t step = 0);
Configuration step_verlet(const Configuration& r_prev, const Configuration& r_curr,
                          const GradientFunction& grad, const Eigen::VectorXd& masses, double dt,
                          std::size_t step = 0);

/// Second sample from an initial position and velocity (Taylor start).
Configuration verlet_start(const Configuration& r0, const Configuration& v0, const PotentialSpec& V,
                           const Eigen::VectorXd& masses, double dt);

/// J Verlet steps from the pair (r0, r1).
DiscreteTrajectory simulate_verlet(const Configuration& r0, const Configuration& r1, std::size_t J,
                                   const PotentialSpec& V, const Eigen::VectorXd& masses, double dt,
                                   double t0 = 0.0);

struct ExtremizeResult {
    DiscreteTrajectory trajectory;
    double residual_norm = 0.0;
    int iterations = 0;
    /// Hessian of the discrete action positive definite at the solution;
    /// false means stationary but not minimal (past a conjugate point).
    bool is_minimum = false;
    LagrangianBreakdown action;
};

/// Solves for the interior samples with fixed endpoints, starting from the
/// straight line. Throws ConvergenceError carrying the final residual norm.
ExtremizeResult extremize_action(const Configuration& start, const Configuration& end,
                                 std::size_t J, const PotentialSpec& V,
                                 const Eigen::VectorXd& masses, double dt,
                                 std::optional<double> E = std::nullopt, double t0 = 0.0,
                                 const NewtonOptions& options = {});

/// sum_n m_n |v_k|^2 / 2 + (V(r_k) + V(r_{k-1})) / 2, for 1 <= k <= J.
///
/// The potential is averaged over the two samples that define v_k, so both
/// terms sit at the same half step.
double energy(const DiscreteTrajectory& traj, const PotentialSpec& V, std::size_t k);

struct GalileanCheck {
    double max_delta = 0.0;    // N, largest change of any residual entry
    double force_scale = 0.0;  // N, max m |r| / dt^2 over the boosted samples
    double normalized = 0.0;   // max_delta / force_scale
};

/// Boosts r -> r + boost * t and compares discrete Newton residuals. Only
/// relative-coordinate interactions are frame independent; external
/// potentials throw CapabilityError.
GalileanCheck galilean_check(const DiscreteTrajectory& traj, const PotentialSpec& V,
                             const Eigen::VectorXd& boost);

/// Effective single-particle potential of a frozen massive subsystem.
PotentialSpec freeze_massive_subsystem(const DiscreteTrajectory& massive_traj,
                                       const PotentialSpec& coupling);

/// Closed-form positions for potentials that decouple into independent
/// particles (free, uniform_field, harmonic). Returns nullopt otherwise.
std::optional<Configuration> analytic_position(const PotentialSpec& V, const Eigen::VectorXd& masses,
                                               const Configuration& r0, const Configuration& v0,
                                               double t);

}  // namespace simplicity
