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

#include "simplicity/geodesic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <fmt/core.h>
#include <fmt/ranges.h>

#include "simplicity/errors.hpp"

namespace simplicity {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string describe(const Eigen::VectorXd& q) {
    return fmt::format("[{:.6g}]", fmt::join(q.data(), q.data() + q.size(), ", "));
}

struct Segment {
    double length = 0.0;
    Eigen::VectorXd grad_a;
    Eigen::VectorXd grad_b;
};

class JacobiEvaluator {
public:
    explicit JacobiEvaluator(const JacobiMetric& jm) : jm_(jm), M_(jm.full_mass_matrix()) {}

    double budget(const Eigen::VectorXd& q) const {
        const Configuration r = unflatten(q, jm_.masses.size(), jm_.dims);
        return jm_.energy - potential_value(jm_.potential, r, jm_.masses);
    }

    Eigen::VectorXd potential_grad(const Eigen::VectorXd& q) const {
        const Configuration r = unflatten(q, jm_.masses.size(), jm_.dims);
        return flatten(potential_gradient(jm_.potential, r, jm_.masses));
    }

    // Non-throwing; a midpoint outside the allowed region yields NaN.
    Segment segment(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const {
        Segment s;
        const Eigen::VectorXd dq = b - a;
        const Eigen::VectorXd mid = 0.5 * (a + b);
        const Eigen::VectorXd Mdq = M_ * dq;
        const double Q = dq.dot(Mdq);
        const double w = budget(mid);
        if (!(w > 0.0)) {
            s.length = kNaN;
            s.grad_a = Eigen::VectorXd::Constant(dq.size(), kNaN);
            s.grad_b = s.grad_a;
            return s;
        }
        s.length = std::sqrt(2.0 * w * Q);
        if (s.length == 0.0) {
            s.grad_a = Eigen::VectorXd::Zero(dq.size());
            s.grad_b = s.grad_a;
            return s;
        }
        const Eigen::VectorXd common = -Q * potential_grad(mid);
        s.grad_a = (common - 4.0 * w * Mdq) / (2.0 * s.length);
        s.grad_b = (common + 4.0 * w * Mdq) / (2.0 * s.length);
        return s;
    }

    const Eigen::MatrixXd& mass() const { return M_; }

private:
    const JacobiMetric& jm_;
    Eigen::MatrixXd M_;
};

// Normal part of dL/dq at a node plus the equal-length gauge along the local
// tangent. The midpoint rule makes L depend weakly on node spacing, so the
// tangential component of dL/dq is a near-null direction that Newton cannot
// resolve; the gauge replaces it.
Eigen::VectorXd gauged_residual(const Eigen::VectorXd& left, const Eigen::VectorXd& right,
                                const Segment& in, const Segment& out) {
    const Eigen::VectorXd chord = right - left;
    const double span = chord.norm();
    const Eigen::VectorXd g = in.grad_b + out.grad_a;
    if (span == 0.0) return g;
    const Eigen::VectorXd tau = chord / span;
    return g - tau * tau.dot(g) + tau * ((out.length - in.length) / (0.5 * span));
}

void check_path(const ConfigPath& p, const JacobiMetric& jm) {
    if (p.samples.empty()) throw ValidationError("path has no samples");
    for (const auto& q : p.samples) {
        if (q.size() != jm.coordinate_count()) {
            throw ValidationError(fmt::format("path sample has {} coordinates, metric expects {}",
                                              q.size(), jm.coordinate_count()));
        }
        if (!q.allFinite()) throw ValidationError("path sample is not finite");
    }
}

void check_segment_midpoint(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                            const JacobiEvaluator& ev) {
    const Eigen::VectorXd mid = 0.5 * (a + b);
    if (!(ev.budget(mid) > 0.0)) {
        throw SingularityError(fmt::format("segment midpoint {} touches the turning surface E <= V",
                                           describe(mid)));
    }
}

}  // namespace

Eigen::MatrixXd JacobiMetric::full_mass_matrix() const {
    if (mass_matrix.size() != 0) return mass_matrix;
    Eigen::VectorXd diag(coordinate_count());
    for (Eigen::Index n = 0; n < masses.size(); ++n) diag.segment(n * dims, dims).setConstant(masses[n]);
    return diag.asDiagonal();
}

void JacobiMetric::validate() const {
    if (!std::isfinite(energy)) throw ValidationError("Jacobi energy must be finite");
    if (masses.size() == 0 || dims < 1) throw ValidationError("Jacobi metric needs particles and dims");
    if ((masses.array() <= 0.0).any() || !masses.allFinite()) {
        throw ValidationError("masses must be positive and finite");
    }
    potential.validate(dims);
    if (potential.is_time_dependent()) {
        throw ValidationError("the Jacobi metric needs a static potential");
    }
    if (mass_matrix.size() != 0) {
        const Eigen::Index n = coordinate_count();
        if (mass_matrix.rows() != n || mass_matrix.cols() != n) {
            throw ValidationError(fmt::format("mass matrix must be {}x{}", n, n));
        }
        if (!mass_matrix.isApprox(mass_matrix.transpose(), 1e-12)) {
            throw ValidationError("mass matrix must be symmetric");
        }
        Eigen::LLT<Eigen::MatrixXd> llt(mass_matrix);
        if (llt.info() != Eigen::Success) throw ValidationError("mass matrix must be positive definite");
    }
}

Eigen::VectorXd flatten(const Configuration& r) {
    Eigen::VectorXd q(r.size());
    for (Eigen::Index n = 0; n < r.rows(); ++n) q.segment(n * r.cols(), r.cols()) = r.row(n).transpose();
    return q;
}

Configuration unflatten(const Eigen::VectorXd& q, Eigen::Index particles, Eigen::Index dims) {
    if (q.size() != particles * dims) {
        throw ValidationError(fmt::format("{} coordinates cannot form {} particles in {} dims",
                                          q.size(), particles, dims));
    }
    Configuration r(particles, dims);
    for (Eigen::Index n = 0; n < particles; ++n) r.row(n) = q.segment(n * dims, dims).transpose();
    return r;
}

double kinetic_budget(const Eigen::VectorXd& q, const JacobiMetric& jm) {
    jm.validate();
    return JacobiEvaluator(jm).budget(q);
}

Eigen::MatrixXd jacobi_metric_at(const Eigen::VectorXd& q, const JacobiMetric& jm) {
    jm.validate();
    const double w = kinetic_budget(q, jm);
    if (!(w > 0.0)) {
        throw SingularityError(fmt::format("turning point at q = {}: E - V = {:.6g}", describe(q), w));
    }
    return 2.0 * w * jm.full_mass_matrix();
}

double path_length(const ConfigPath& p, const JacobiMetric& jm) {
    jm.validate();
    check_path(p, jm);
    const JacobiEvaluator ev(jm);
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < p.samples.size(); ++i) {
        check_segment_midpoint(p.samples[i], p.samples[i + 1], ev);
        total += ev.segment(p.samples[i], p.samples[i + 1]).length;
    }
    return total;
}

std::vector<Eigen::VectorXd> path_length_gradient(const ConfigPath& p, const JacobiMetric& jm) {
    jm.validate();
    check_path(p, jm);
    const JacobiEvaluator ev(jm);
    std::vector<Segment> segs;
    for (std::size_t i = 0; i + 1 < p.samples.size(); ++i) {
        check_segment_midpoint(p.samples[i], p.samples[i + 1], ev);
        segs.push_back(ev.segment(p.samples[i], p.samples[i + 1]));
    }
    std::vector<Eigen::VectorXd> out;
    for (std::size_t i = 1; i < segs.size(); ++i) out.push_back(segs[i - 1].grad_b + segs[i].grad_a);
    return out;
}

double first_variation_norm(const ConfigPath& p, const JacobiMetric& jm) {
    const auto grads = path_length_gradient(p, jm);
    double norm = 0.0;
    for (std::size_t i = 0; i < grads.size(); ++i) {
        Eigen::VectorXd g = grads[i];
        const Eigen::VectorXd chord = p.samples[i + 2] - p.samples[i];
        if (chord.norm() > 0.0) {
            const Eigen::VectorXd tau = chord.normalized();
            g -= tau * tau.dot(g);
        }
        norm = std::max(norm, g.lpNorm<Eigen::Infinity>());
    }
    return norm;
}

ConfigPath geodesic_solve(const Eigen::VectorXd& q0, const Eigen::VectorXd& q1,
                          const JacobiMetric& jm, std::size_t M, const NewtonOptions& options) {
    jm.validate();
    if (M < 1) throw ValidationError("geodesic needs at least one segment");
    const Eigen::Index n = jm.coordinate_count();
    if (q0.size() != n || q1.size() != n) {
        throw ValidationError(fmt::format("endpoints must have {} coordinates", n));
    }
    if (!q0.allFinite() || !q1.allFinite()) throw ValidationError("endpoints must be finite");
    const JacobiEvaluator ev(jm);
    for (const auto* q : {&q0, &q1}) {
        if (!(ev.budget(*q) > 0.0)) {
            throw InfeasibilityError(
                fmt::format("endpoint {} lies outside the allowed region E > V", describe(*q)));
        }
    }

    ConfigPath path;
    for (std::size_t i = 0; i <= M; ++i) {
        const double s = static_cast<double>(i) / static_cast<double>(M);
        path.samples.push_back((1.0 - s) * q0 + s * q1);
    }
    if (q0 == q1 || M == 1) return path;
    for (std::size_t i = 0; i < M; ++i) {
        if (!(ev.budget(0.5 * (path.samples[i] + path.samples[i + 1])) > 0.0) ||
            !(ev.budget(path.samples[i]) > 0.0)) {
            throw InfeasibilityError(fmt::format(
                "the chord from {} to {} crosses the forbidden region E <= V", describe(q0),
                describe(q1)));
        }
    }

    BandedProblem problem;
    problem.blocks = static_cast<Eigen::Index>(M) - 1;
    problem.block_size = n;
    problem.residual_block = [&](const Eigen::VectorXd& x, Eigen::Index i) -> Eigen::VectorXd {
        const Eigen::VectorXd left = i == 0 ? q0 : Eigen::VectorXd(x.segment((i - 1) * n, n));
        const Eigen::VectorXd right =
            i + 1 == problem.blocks ? q1 : Eigen::VectorXd(x.segment((i + 1) * n, n));
        const Eigen::VectorXd mid = x.segment(i * n, n);
        const Segment in = ev.segment(left, mid);
        const Segment out = ev.segment(mid, right);
        return gauged_residual(left, right, in, out);
    };
    // Curvature of L lives on the segment scale, far below |q|.
    const double seg = std::max((q1 - q0).lpNorm<Eigen::Infinity>() / static_cast<double>(M),
                                1e-300);
    problem.fd_scale = Eigen::VectorXd::Constant(problem.blocks * n, seg);
    NewtonOptions opts = options;
    opts.fd_step = std::min(options.fd_step * 10.0, 1e-4);
    Eigen::VectorXd x0(problem.blocks * n);
    for (Eigen::Index i = 0; i < problem.blocks; ++i) x0.segment(i * n, n) = path.samples[i + 1];

    const NewtonResult solved = solve_banded(problem, x0, opts);
    if (!solved.converged) {
        throw ConvergenceError(fmt::format("Jacobi geodesic did not converge: first variation "
                                           "{:.3e} after {} iterations",
                                           solved.residual_norm, solved.iterations),
                               solved.residual_norm);
    }
    for (Eigen::Index i = 0; i < problem.blocks; ++i) path.samples[i + 1] = solved.x.segment(i * n, n);
    return path;
}

std::vector<double> path_times(const ConfigPath& p, const JacobiMetric& jm) {
    jm.validate();
    check_path(p, jm);
    const JacobiEvaluator ev(jm);
    std::vector<double> t{0.0};
    for (std::size_t i = 0; i + 1 < p.samples.size(); ++i) {
        check_segment_midpoint(p.samples[i], p.samples[i + 1], ev);
        const Eigen::VectorXd dq = p.samples[i + 1] - p.samples[i];
        const double Q = dq.dot(ev.mass() * dq);
        const double w = ev.budget(0.5 * (p.samples[i] + p.samples[i + 1]));
        t.push_back(t.back() + std::sqrt(Q / (2.0 * w)));
    }
    return t;
}

DiscreteTrajectory time_reparameterize(const ConfigPath& p, const JacobiMetric& jm,
                                       std::optional<std::size_t> steps, double t0) {
    const std::vector<double> t = path_times(p, jm);
    if (p.segments() < 1) throw ValidationError("time reparameterization needs at least one segment");
    for (std::size_t i = 1; i < t.size(); ++i) {
        if (!(t[i] > t[i - 1])) {
            throw ValidationError(fmt::format("segment {} has zero length; time stamps do not advance", i - 1));
        }
    }
    const std::size_t J = steps.value_or(p.segments());
    if (J < 2) throw ValidationError("resampled trajectory needs J >= 2 steps");
    const double total = t.back();
    std::vector<double> at(J + 1);
    for (std::size_t k = 0; k <= J; ++k) at[k] = total * static_cast<double>(k) / static_cast<double>(J);
    at.back() = total;

    const Eigen::Index n = jm.coordinate_count();
    std::vector<Eigen::VectorXd> q(J + 1, Eigen::VectorXd(n));
    std::vector<double> y(t.size());
    for (Eigen::Index c = 0; c < n; ++c) {
        for (std::size_t i = 0; i < t.size(); ++i) y[i] = p.samples[i][c];
        const std::vector<double> v = cubic_spline(t, y, at);
        for (std::size_t k = 0; k <= J; ++k) q[k][c] = v[k];
    }

    DiscreteTrajectory traj;
    traj.masses = jm.masses;
    traj.dt = total / static_cast<double>(J);
    traj.t0 = t0;
    for (const auto& qk : q) traj.positions.push_back(unflatten(qk, jm.masses.size(), jm.dims));
    traj.validate();
    return traj;
}

std::vector<double> cubic_spline(const std::vector<double>& t, const std::vector<double>& y,
                                 const std::vector<double>& at) {
    const std::size_t n = t.size();
    if (n < 2 || y.size() != n) throw ValidationError("spline needs at least two matching knots");
    for (std::size_t i = 1; i < n; ++i) {
        if (!(t[i] > t[i - 1])) throw ValidationError("spline knots must increase strictly");
    }
    std::vector<double> c(n, 0.0);  // second derivatives at the knots
    if (n == 3) {
        const double d0 = (y[1] - y[0]) / (t[1] - t[0]);
        const double d1 = (y[2] - y[1]) / (t[2] - t[1]);
        std::fill(c.begin(), c.end(), 2.0 * (d1 - d0) / (t[2] - t[0]));
    } else if (n >= 4) {
        std::vector<Eigen::Triplet<double>> triplets;
        Eigen::VectorXd rhs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
        const auto h = [&](std::size_t i) { return t[i + 1] - t[i]; };
        const auto I = [](std::size_t i) { return static_cast<Eigen::Index>(i); };
        triplets.emplace_back(0, 0, h(1));
        triplets.emplace_back(0, 1, -(h(0) + h(1)));
        triplets.emplace_back(0, 2, h(0));
        for (std::size_t i = 1; i + 1 < n; ++i) {
            triplets.emplace_back(I(i), I(i - 1), h(i - 1));
            triplets.emplace_back(I(i), I(i), 2.0 * (h(i - 1) + h(i)));
            triplets.emplace_back(I(i), I(i + 1), h(i));
            rhs[I(i)] = 6.0 * ((y[i + 1] - y[i]) / h(i) - (y[i] - y[i - 1]) / h(i - 1));
        }
        triplets.emplace_back(I(n - 1), I(n - 3), h(n - 2));
        triplets.emplace_back(I(n - 1), I(n - 2), -(h(n - 3) + h(n - 2)));
        triplets.emplace_back(I(n - 1), I(n - 1), h(n - 3));
        Eigen::SparseMatrix<double> A(I(n), I(n));
        A.setFromTriplets(triplets.begin(), triplets.end());
        Eigen::SparseLU<Eigen::SparseMatrix<double>> lu(A);
        if (lu.info() != Eigen::Success) throw ValidationError("spline system is singular");
        const Eigen::VectorXd sol = lu.solve(rhs);
        for (std::size_t i = 0; i < n; ++i) c[i] = sol[I(i)];
    }

    std::vector<double> out;
    out.reserve(at.size());
    for (double x : at) {
        std::size_t i = static_cast<std::size_t>(std::upper_bound(t.begin(), t.end(), x) - t.begin());
        i = std::clamp<std::size_t>(i, 1, n - 1) - 1;
        const double hi = t[i + 1] - t[i];
        const double a = t[i + 1] - x;
        const double b = x - t[i];
        out.push_back(c[i] * a * a * a / (6.0 * hi) + c[i + 1] * b * b * b / (6.0 * hi) +
                      (y[i] / hi - c[i] * hi / 6.0) * a + (y[i + 1] / hi - c[i + 1] * hi / 6.0) * b);
    }
    return out;
}

}  // namespace simplicity
