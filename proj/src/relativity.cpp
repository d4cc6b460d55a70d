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

#include "simplicity/relativity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/core.h>

#include "simplicity/errors.hpp"

namespace simplicity {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

Eigen::Vector3d spatial(const Event& e) { return e.tail<3>(); }

Eigen::Vector3d midpoint(const Event& a, const Event& b) { return 0.5 * (spatial(a) + spatial(b)); }

std::string describe(const Event& e) {
    return fmt::format("(t={:.9g}, x={:.9g}, y={:.9g}, z={:.9g})", e[0], e[1], e[2], e[3]);
}

double raw_phi(const StaticMetric& sm, const Eigen::Vector3d& r) {
    if (sm.kind == MetricKind::minkowski) return 0.0;
    if (sm.field == FieldKind::uniform) return sm.g * r.z();
    return -sm.gm / (r - sm.center).norm();
}

// Segment proper length and its gradients in the two spatial endpoints at
// fixed times. Non-throwing; non-timelike segments yield NaN.
struct Segment {
    double ds = 0.0;
    Eigen::Vector3d grad_a;
    Eigen::Vector3d grad_b;
};

Segment segment(const Event& a, const Event& b, const StaticMetric& sm) {
    Segment s;
    const double dt = b[0] - a[0];
    const Eigen::Vector3d dx = spatial(b) - spatial(a);
    const Eigen::Vector3d mid = midpoint(a, b);
    const double phi = raw_phi(sm, mid);
    const double s2 = sm.c * sm.c * dt * dt + 2.0 * phi * dt * dt - dx.squaredNorm();
    if (!(s2 > 0.0)) {
        s.ds = kNaN;
        s.grad_a.setConstant(kNaN);
        s.grad_b.setConstant(kNaN);
        return s;
    }
    s.ds = std::sqrt(s2);
    const Eigen::Vector3d field = sm.kind == MetricKind::minkowski ? Eigen::Vector3d::Zero()
                                                                   : sm.grad_phi(mid);
    s.grad_a = (dt * dt * field + 2.0 * dx) / (2.0 * s.ds);
    s.grad_b = (dt * dt * field - 2.0 * dx) / (2.0 * s.ds);
    return s;
}

}  // namespace

double StaticMetric::phi(const Eigen::Vector3d& r) const {
    if (kind == MetricKind::weak_field && field == FieldKind::point_mass && (r - center).norm() == 0.0) {
        throw SingularityError("potential evaluated at the point mass");
    }
    return raw_phi(*this, r);
}

Eigen::Vector3d StaticMetric::grad_phi(const Eigen::Vector3d& r) const {
    if (kind == MetricKind::minkowski) return Eigen::Vector3d::Zero();
    if (field == FieldKind::uniform) return Eigen::Vector3d(0.0, 0.0, g);
    const Eigen::Vector3d d = r - center;
    const double n = d.norm();
    return gm * d / (n * n * n);
}

double StaticMetric::g00(const Eigen::Vector3d& r) const {
    const double value = 1.0 + 2.0 * phi(r) / (c * c);
    if (!(value > 0.0 && value < 2.0)) {
        throw InfeasibilityError(fmt::format(
            "weak-field metric invalid at ({:.6g}, {:.6g}, {:.6g}): |2 phi / c^2| >= 1", r.x(), r.y(),
            r.z()));
    }
    return value;
}

void StaticMetric::validate() const {
    if (!(c > 0.0) || !std::isfinite(c)) throw ValidationError("light speed c must be positive");
    if (!std::isfinite(g) || !std::isfinite(gm) || !center.allFinite()) {
        throw ValidationError("metric parameters must be finite");
    }
    if (kind == MetricKind::weak_field && field == FieldKind::point_mass && !(gm > 0.0)) {
        throw ValidationError("point-mass parameter GM must be positive");
    }
}

StaticMetric minkowski(double c) {
    StaticMetric sm;
    sm.c = c;
    return sm;
}

StaticMetric weak_uniform_field(double g, double c) {
    StaticMetric sm;
    sm.kind = MetricKind::weak_field;
    sm.field = FieldKind::uniform;
    sm.g = g;
    sm.c = c;
    return sm;
}

StaticMetric weak_point_mass(double gm, Eigen::Vector3d center, double c) {
    StaticMetric sm;
    sm.kind = MetricKind::weak_field;
    sm.field = FieldKind::point_mass;
    sm.gm = gm;
    sm.center = center;
    sm.c = c;
    return sm;
}

double interval(const Event& a, const Event& b, const StaticMetric& sm) {
    const double dt = b[0] - a[0];
    const Eigen::Vector3d dx = spatial(b) - spatial(a);
    const double g00 = sm.kind == MetricKind::minkowski ? 1.0 : sm.g00(midpoint(a, b));
    return g00 * sm.c * sm.c * dt * dt - dx.squaredNorm();
}

double proper_length(const Event& a, const Event& b, const StaticMetric& sm) {
    const double s2 = interval(a, b, sm);
    if (!(s2 > 0.0)) {
        throw ValidationError(fmt::format("segment {} -> {} is not timelike: (ds)^2 = {:.6g}",
                                          describe(a), describe(b), s2));
    }
    return std::sqrt(s2);
}

void validate_worldline(const Worldline& w, const StaticMetric& sm) {
    sm.validate();
    if (w.events.size() < 2) throw ValidationError("worldline needs at least two events");
    if (!(w.mass > 0.0)) throw ValidationError("worldline mass must be positive");
    if (w.c != sm.c) {
        throw ValidationError(fmt::format("worldline c = {} differs from metric c = {}", w.c, sm.c));
    }
    for (const auto& e : w.events) {
        if (!e.allFinite()) throw ValidationError("worldline event is not finite");
    }
    for (std::size_t k = 0; k + 1 < w.events.size(); ++k) proper_length(w.events[k], w.events[k + 1], sm);
}

Event lorentz_boost(const Event& e, const Eigen::Vector3d& v, double c) {
    const double beta2 = v.squaredNorm() / (c * c);
    if (!(beta2 < 1.0)) {
        throw ValidationError(fmt::format("boost speed {:.6g} m/s is not below c", v.norm()));
    }
    if (beta2 == 0.0) return e;
    const double gamma = 1.0 / std::sqrt(1.0 - beta2);
    const Eigen::Vector3d n = v.normalized();
    const Eigen::Vector3d x = spatial(e);
    const double xpar = n.dot(x);
    Event out;
    out[0] = gamma * (e[0] - v.dot(x) / (c * c));
    out.tail<3>() = x + ((gamma - 1.0) * xpar) * n - (gamma * e[0]) * v;
    return out;
}

Worldline lorentz_boost(const Worldline& w, const Eigen::Vector3d& v) {
    Worldline out = w;
    for (auto& e : out.events) e = lorentz_boost(e, v, w.c);
    return out;
}

Eigen::Vector4d four_velocity(const Worldline& w, std::size_t k, const StaticMetric& sm) {
    if (k + 1 >= w.events.size()) {
        throw IndexError(fmt::format("segment {} out of range for {} events", k, w.events.size()));
    }
    const Event& a = w.events[k];
    const Event& b = w.events[k + 1];
    const double ds = proper_length(a, b, sm);
    Eigen::Vector4d u;
    u[0] = sm.c * (b[0] - a[0]);
    u.tail<3>() = spatial(b) - spatial(a);
    return u / ds;
}

Eigen::Vector4d four_velocity(const Worldline& w, std::size_t k) {
    return four_velocity(w, k, minkowski(w.c));
}

double metric_dot(const Eigen::Vector4d& u, const Eigen::Vector4d& w, const Event& a,
                  const Event& b, const StaticMetric& sm) {
    const double g00 = sm.kind == MetricKind::minkowski ? 1.0 : sm.g00(midpoint(a, b));
    return g00 * u[0] * w[0] - u.tail<3>().dot(w.tail<3>());
}

double rel_action(const Worldline& w, const StaticMetric& sm, double a, std::optional<double> E) {
    validate_worldline(w, sm);
    double total = 0.0;
    for (std::size_t k = 0; k + 1 < w.events.size(); ++k) {
        total += proper_length(w.events[k], w.events[k + 1], sm);
    }
    double action = a * total;
    if (E) action += a * sm.c * *E * (w.events.back()[0] - w.events.front()[0]);
    return action;
}

std::vector<Eigen::Vector3d> proper_time_gradient(const Worldline& w, const StaticMetric& sm) {
    validate_worldline(w, sm);
    std::vector<Segment> segs;
    for (std::size_t k = 0; k + 1 < w.events.size(); ++k) segs.push_back(segment(w.events[k], w.events[k + 1], sm));
    std::vector<Eigen::Vector3d> out;
    for (std::size_t i = 1; i < segs.size(); ++i) out.push_back(segs[i - 1].grad_b + segs[i].grad_a);
    return out;
}

double rel_first_variation_norm(const Worldline& w, const StaticMetric& sm) {
    double norm = 0.0;
    for (const auto& g : proper_time_gradient(w, sm)) norm = std::max(norm, g.lpNorm<Eigen::Infinity>());
    return norm;
}

Worldline rel_geodesic_solve(const Event& e0, const Event& e1, const StaticMetric& sm,
                             std::size_t M, double mass, const NewtonOptions& options) {
    sm.validate();
    if (M < 1) throw ValidationError("worldline needs at least one segment");
    if (!e0.allFinite() || !e1.allFinite()) throw ValidationError("boundary events must be finite");
    if (!(mass > 0.0)) throw ValidationError("mass must be positive");
    if (!(e1[0] > e0[0]) || !(interval(e0, e1, sm) > 0.0)) {
        throw InfeasibilityError(fmt::format("{} is not in the timelike future of {}", describe(e1),
                                             describe(e0)));
    }
    sm.g00(spatial(e0));
    sm.g00(spatial(e1));

    Worldline w;
    w.mass = mass;
    w.c = sm.c;
    for (std::size_t i = 0; i <= M; ++i) {
        const double s = static_cast<double>(i) / static_cast<double>(M);
        w.events.push_back((1.0 - s) * e0 + s * e1);
    }
    for (std::size_t i = 0; i < M; ++i) {
        sm.g00(spatial(w.events[i + 1]));
        if (!(interval(w.events[i], w.events[i + 1], sm) > 0.0)) {
            throw InfeasibilityError(fmt::format("straight start leaves the light cone at {}",
                                                 describe(w.events[i])));
        }
    }
    if (M == 1) return w;

    const double dt = (e1[0] - e0[0]) / static_cast<double>(M);
    // Residuals scaled by c/dt read as acceleration errors, in m/s^2.
    const double to_accel = sm.c / dt;
    const Eigen::Vector3d span = spatial(e1) - spatial(e0);
    const double accel_scale = std::max(
        {span.norm() / ((e1[0] - e0[0]) * (e1[0] - e0[0])), sm.grad_phi(spatial(e0)).norm(),
         sm.grad_phi(spatial(e1)).norm(), std::numeric_limits<double>::min()});
    const double extent =
        std::max({spatial(e0).norm(), spatial(e1).norm(), span.norm(), std::numeric_limits<double>::min()});

    BandedProblem problem;
    problem.blocks = static_cast<Eigen::Index>(M) - 1;
    problem.block_size = 3;
    problem.fd_scale = Eigen::VectorXd::Constant(problem.blocks * 3, extent);
    const auto event_at = [&](const Eigen::VectorXd& x, Eigen::Index i) -> Event {
        // Interior event i+1 of the worldline.
        Event e = w.events[static_cast<std::size_t>(i) + 1];
        e.tail<3>() = x.segment(i * 3, 3);
        return e;
    };
    problem.residual_block = [&](const Eigen::VectorXd& x, Eigen::Index i) -> Eigen::VectorXd {
        const Event left = i == 0 ? e0 : event_at(x, i - 1);
        const Event right = i + 1 == problem.blocks ? e1 : event_at(x, i + 1);
        const Event mid = event_at(x, i);
        const Eigen::Vector3d g = segment(left, mid, sm).grad_b + segment(mid, right, sm).grad_a;
        return to_accel * g;
    };
    Eigen::VectorXd x0(problem.blocks * 3);
    for (Eigen::Index i = 0; i < problem.blocks; ++i) x0.segment(i * 3, 3) = spatial(w.events[i + 1]);

    NewtonOptions opts = options;
    opts.tolerance = options.tolerance * accel_scale;
    const NewtonResult solved = solve_banded(problem, x0, opts);
    for (Eigen::Index i = 0; i < problem.blocks; ++i) {
        w.events[static_cast<std::size_t>(i) + 1].tail<3>() = solved.x.segment(i * 3, 3);
    }
    const double fv = solved.x.allFinite() ? rel_first_variation_norm(w, sm) : kNaN;
    if (!solved.converged || !(fv <= 1e-10)) {
        throw ConvergenceError(fmt::format("worldline did not converge: scaled residual {:.3e} m/s^2 "
                                           "(scale {:.3e}), first variation {:.3e}",
                                           solved.residual_norm, accel_scale, fv),
                               solved.residual_norm);
    }
    return w;
}

}  // namespace simplicity
