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

#include "simplicity/discrete_mech.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/core.h>

#include "simplicity/errors.hpp"

namespace simplicity {

namespace {

double kinetic(const Configuration& v, const Eigen::VectorXd& masses) {
    double t = 0.0;
    for (Eigen::Index n = 0; n < v.rows(); ++n) t += 0.5 * masses[n] * v.row(n).squaredNorm();
    return t;
}

void check_compatible(const DiscreteTrajectory& traj, const PotentialSpec& V) {
    traj.validate();
    V.validate(traj.dims());
    if (V.kind == PotentialKind::tabulated && V.table->frames.size() < traj.positions.size()) {
        throw ValidationError(fmt::format("tabulated potential covers {} steps, trajectory has {}",
                                          V.table->frames.size(), traj.positions.size()));
    }
}

using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Configuration block_to_config(const Eigen::VectorXd& x, Eigen::Index block, Eigen::Index rows,
                              Eigen::Index cols) {
    return Eigen::Map<const RowMajor>(x.data() + block * rows * cols, rows, cols);
}

Eigen::VectorXd config_to_vector(const Configuration& c) {
    RowMajor rm = c;
    return Eigen::Map<const Eigen::VectorXd>(rm.data(), rm.size());
}

}  // namespace

LagrangianBreakdown discrete_action(const DiscreteTrajectory& traj, const PotentialSpec& V,
                                    std::optional<double> E) {
    check_compatible(traj, V);
    LagrangianBreakdown out;
    out.dt = traj.dt;
    out.energy_offset = E ? *E : energy(traj, V, 1);
    const std::size_t J = traj.steps();
    out.tau = static_cast<double>(J) * traj.dt;
    double action = 0.0;
    for (std::size_t k = 0; k < J; ++k) {
        const double T = kinetic(discrete_velocity(traj, k + 1), traj.masses);
        const double U = potential_value(V, traj.positions[k], traj.masses, k);
        out.kinetic.push_back(T);
        out.potential.push_back(U);
        out.lagrangian.push_back(T - U);
        action += (T - U + out.energy_offset) * traj.dt;
    }
    out.action = action;
    return out;
}

SumByParts sum_by_parts(std::span<const double> u, std::span<const double> v) {
    if (u.size() != v.size()) {
        throw ValidationError(fmt::format("sequences differ in length: {} vs {}", u.size(), v.size()));
    }
    if (u.empty()) throw ValidationError("summation by parts needs at least one term");
    long double U = 0.0L;
    long double Vprev = 0.0L;
    long double first = 0.0L;
    long double second = 0.0L;
    for (std::size_t k = 0; k < u.size(); ++k) {
        U += u[k];
        if (k >= 1) second += Vprev * static_cast<long double>(u[k]);
        const long double Vk = Vprev + static_cast<long double>(v[k]);
        first += U * static_cast<long double>(v[k]);
        Vprev = Vk;
    }
    return {static_cast<double>(U * Vprev), static_cast<double>(first + second)};
}

std::vector<Configuration> el_residual(const DiscreteTrajectory& traj, const GradientFunction& grad) {
    traj.validate();
    const std::size_t J = traj.steps();
    const double dt2 = traj.dt * traj.dt;
    std::vector<Configuration> out;
    out.reserve(J - 1);
    for (std::size_t k = 1; k < J; ++k) {
        const Configuration accel =
            (traj.positions[k + 1] - 2.0 * traj.positions[k] + traj.positions[k - 1]) / dt2;
        out.push_back(traj.masses.asDiagonal() * accel + grad(traj.positions[k], k));
    }
    return out;
}

std::vector<Configuration> el_residual(const DiscreteTrajectory& traj, const PotentialSpec& V) {
    check_compatible(traj, V);
    return el_residual(traj, gradient_function(V, traj.masses));
}

double force_scale(const DiscreteTrajectory& traj) {
    double max_coord = 0.0;
    for (const auto& r : traj.positions) max_coord = std::max(max_coord, r.cwiseAbs().maxCoeff());
    return traj.masses.maxCoeff() * max_coord / (traj.dt * traj.dt);
}

double relative_residual(const DiscreteTrajectory& traj, const std::vector<Configuration>& residuals) {
    double worst = 0.0;
    for (const auto& r : residuals) worst = std::max(worst, r.cwiseAbs().maxCoeff());
    const double scale = force_scale(traj);
    return scale > 0.0 ? worst / scale : worst;
}

Configuration step_verlet(const Configuration& r_prev, const Configuration& r_curr,
                          const GradientFunction& grad, const Eigen::VectorXd& masses, double dt,
                          std::size_t step) {
    if (!r_prev.allFinite() || !r_curr.allFinite()) {
        throw ValidationError("Verlet step received non-finite positions");
    }
    const Configuration force = -grad(r_curr, step);
    if (!force.allFinite()) {
        throw SingularityError(fmt::format("non-finite force at step {}", step));
    }
    return 2.0 * r_curr - r_prev + (dt * dt) * (masses.cwiseInverse().asDiagonal() * force);
}

Configuration step_verlet(const Configuration& r_prev, const Configuration& r_curr,
                          const PotentialSpec& V, const Eigen::VectorXd& masses, double dt,
                          std::size_t step) {
    return step_verlet(r_prev, r_curr, gradient_function(V, masses), masses, dt, step);
}

Configuration verlet_start(const Configuration& r0, const Configuration& v0, const PotentialSpec& V,
                           const Eigen::VectorXd& masses, double dt) {
    const Configuration force = -potential_gradient(V, r0, masses, 0);
    if (!force.allFinite()) throw SingularityError("non-finite force at the initial state");
    return r0 + dt * v0 + (0.5 * dt * dt) * (masses.cwiseInverse().asDiagonal() * force);
}

DiscreteTrajectory simulate_verlet(const Configuration& r0, const Configuration& r1, std::size_t J,
                                   const PotentialSpec& V, const Eigen::VectorXd& masses, double dt,
                                   double t0) {
    if (J < 2) throw ValidationError("simulation needs J >= 2 steps");
    if (r0.rows() != masses.size() || r1.rows() != masses.size() || r0.cols() != r1.cols()) {
        throw ValidationError("initial configurations do not match the particle count");
    }
    V.validate(r0.cols());
    DiscreteTrajectory traj;
    traj.masses = masses;
    traj.dt = dt;
    traj.t0 = t0;
    traj.positions.reserve(J + 1);
    traj.positions.push_back(r0);
    traj.positions.push_back(r1);
    const GradientFunction grad = gradient_function(V, masses);
    for (std::size_t k = 1; k < J; ++k) {
        traj.positions.push_back(
            step_verlet(traj.positions[k - 1], traj.positions[k], grad, masses, dt, k));
    }
    traj.validate();
    return traj;
}

ExtremizeResult extremize_action(const Configuration& start, const Configuration& end,
                                 std::size_t J, const PotentialSpec& V,
                                 const Eigen::VectorXd& masses, double dt,
                                 std::optional<double> E, double t0,
                                 const NewtonOptions& options) {
    if (J < 2) throw ValidationError("extremization needs J >= 2");
    if (!start.allFinite() || !end.allFinite()) throw ValidationError("endpoints must be finite");
    if (start.rows() != masses.size() || end.rows() != masses.size() || start.cols() != end.cols()) {
        throw ValidationError("endpoints do not match the particle count");
    }
    V.validate(start.cols());
    const Eigen::Index rows = start.rows();
    const Eigen::Index cols = start.cols();
    const GradientFunction grad = gradient_function(V, masses);
    const double dt2 = dt * dt;

    BandedProblem problem;
    problem.blocks = static_cast<Eigen::Index>(J) - 1;
    problem.block_size = rows * cols;
    problem.residual_block = [&](const Eigen::VectorXd& x, Eigen::Index i) -> Eigen::VectorXd {
        const Configuration prev = i == 0 ? start : block_to_config(x, i - 1, rows, cols);
        const Configuration next =
            i + 1 == problem.blocks ? end : block_to_config(x, i + 1, rows, cols);
        const Configuration curr = block_to_config(x, i, rows, cols);
        const Configuration r = masses.asDiagonal() * ((next - 2.0 * curr + prev) / dt2) +
                                grad(curr, static_cast<std::size_t>(i) + 1);
        return config_to_vector(r);
    };

    Eigen::VectorXd x0(problem.blocks * problem.block_size);
    for (Eigen::Index i = 0; i < problem.blocks; ++i) {
        const double s = static_cast<double>(i + 1) / static_cast<double>(J);
        x0.segment(i * problem.block_size, problem.block_size) =
            config_to_vector((1.0 - s) * start + s * end);
    }

    const NewtonResult solved = solve_banded(problem, x0, options);
    if (!solved.converged) {
        throw ConvergenceError(fmt::format("action extremization stalled after {} iterations, "
                                           "residual {:.3e}",
                                           solved.iterations, solved.residual_norm),
                               solved.residual_norm);
    }

    ExtremizeResult out;
    out.trajectory.masses = masses;
    out.trajectory.dt = dt;
    out.trajectory.t0 = t0;
    out.trajectory.positions.push_back(start);
    for (Eigen::Index i = 0; i < problem.blocks; ++i) {
        out.trajectory.positions.push_back(block_to_config(solved.x, i, rows, cols));
    }
    out.trajectory.positions.push_back(end);
    out.residual_norm = solved.residual_norm;
    out.iterations = solved.iterations;
    // Hessian of S is -dt times the residual Jacobian.
    out.is_minimum = solved.negative_definite;
    out.action = discrete_action(out.trajectory, V, E);
    return out;
}

double energy(const DiscreteTrajectory& traj, const PotentialSpec& V, std::size_t k) {
    const Configuration v = discrete_velocity(traj, k);
    const double U = 0.5 * (potential_value(V, traj.positions[k], traj.masses, k) +
                            potential_value(V, traj.positions[k - 1], traj.masses, k - 1));
    return kinetic(v, traj.masses) + U;
}

GalileanCheck galilean_check(const DiscreteTrajectory& traj, const PotentialSpec& V,
                             const Eigen::VectorXd& boost) {
    check_compatible(traj, V);
    if (!V.is_relative()) {
        throw CapabilityError(fmt::format(
            "{} potential is an external field fixed in one frame; boosted trajectories see a "
            "different force",
            to_string(V.kind)));
    }
    if (boost.size() != traj.dims()) {
        throw ValidationError(fmt::format("boost has {} components, trajectory has {} dims",
                                          boost.size(), traj.dims()));
    }
    DiscreteTrajectory boosted = traj;
    for (std::size_t k = 0; k < boosted.positions.size(); ++k) {
        boosted.positions[k].rowwise() += traj.time(k) * boost.transpose();
    }
    const auto base = el_residual(traj, V);
    const auto moved = el_residual(boosted, V);
    GalileanCheck out;
    for (std::size_t i = 0; i < base.size(); ++i) {
        out.max_delta = std::max(out.max_delta, (moved[i] - base[i]).cwiseAbs().maxCoeff());
    }
    out.force_scale = std::max(force_scale(traj), force_scale(boosted));
    out.normalized = out.force_scale > 0.0 ? out.max_delta / out.force_scale : out.max_delta;
    return out;
}

PotentialSpec freeze_massive_subsystem(const DiscreteTrajectory& massive_traj,
                                       const PotentialSpec& coupling) {
    if (coupling.kind == PotentialKind::free) return free_potential();
    if (coupling.kind != PotentialKind::pair_spring &&
        coupling.kind != PotentialKind::inverse_square) {
        throw ValidationError("freezing needs a pairwise coupling (pair_spring or inverse_square)");
    }
    massive_traj.validate();
    coupling.validate(massive_traj.dims());
    const bool zero = coupling.kind == PotentialKind::pair_spring ? coupling.stiffness == 0.0
                                                                  : coupling.strength == 0.0;
    if (zero) return free_potential();

    auto table = std::make_shared<TabulatedSource>();
    table->coupling = coupling;
    table->source_masses = massive_traj.masses;
    table->frames = massive_traj.positions;
    table->information_interpretation = false;
    PotentialSpec out;
    out.kind = PotentialKind::tabulated;
    out.table = std::move(table);
    return out;
}

std::optional<Configuration> analytic_position(const PotentialSpec& V, const Eigen::VectorXd& masses,
                                               const Configuration& r0, const Configuration& v0,
                                               double t) {
    switch (V.kind) {
        case PotentialKind::free:
            return Configuration(r0 + t * v0);
        case PotentialKind::uniform_field: {
            Configuration r = r0 + t * v0;
            r.rowwise() += (0.5 * t * t) * V.field.transpose();
            return r;
        }
        case PotentialKind::harmonic: {
            const Eigen::RowVectorXd c = V.center.size() == 0 ? Eigen::RowVectorXd::Zero(r0.cols())
                                                              : Eigen::RowVectorXd(V.center.transpose());
            Configuration r(r0.rows(), r0.cols());
            for (Eigen::Index n = 0; n < r0.rows(); ++n) {
                const double w = std::sqrt(V.stiffness / masses[n]);
                const Eigen::RowVectorXd offset = r0.row(n) - c;
                if (w == 0.0) {
                    r.row(n) = r0.row(n) + t * v0.row(n);
                } else {
                    r.row(n) = c + offset * std::cos(w * t) + v0.row(n) * (std::sin(w * t) / w);
                }
            }
            return r;
        }
        default:
            return std::nullopt;
    }
}

}  // namespace simplicity
