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


// Property suites behind the `verify` run kind. Each suite reduces to one
// check: its worst measured value against a pinned tolerance.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <random>
#include <set>

#include <json.hpp>
#include <fmt/format.h>

#include "simplicity/calibration.hpp"
#include "simplicity/errors.hpp"
#include "simplicity/scenario.hpp"

namespace simplicity {

using nlohmann::json;

namespace {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    double uniform(double lo, double hi) {
        return lo + (hi - lo) * static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }
    std::size_t below(std::size_t n) { return static_cast<std::size_t>(engine_() % n); }
    BitString bits(std::size_t n) {
        BitString s;
        s.reserve(n);
        for (std::size_t i = 0; i < n; ++i) s.push_back((engine_() >> 63) ? '1' : '0');
        return s;
    }

private:
    std::mt19937_64 engine_;
};

Configuration row(std::initializer_list<double> xs) {
    Configuration r(1, static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (double x : xs) r(0, i++) = x;
    return r;
}

DiscreteTrajectory verlet(const PotentialSpec& V, const Eigen::VectorXd& m, const Configuration& r0,
                          const Configuration& v0, std::size_t J, double dt) {
    return simulate_verlet(r0, verlet_start(r0, v0, V, m, dt), J, V, m, dt);
}

double max_abs(const Configuration& c) { return c.size() ? c.cwiseAbs().maxCoeff() : 0.0; }

// --- statecodec ---

void suite_pairing(RunReport& rep, Rng& rng) {
    std::size_t failures = 0;
    for (int i = 0; i < 500; ++i) {
        const BitString a = rng.bits(rng.below(70)), b = rng.bits(rng.below(70));
        const BitString p = pair(a, b);
        const auto back = try_unpair(p);
        if (!back || back->first != a || back->second != b) ++failures;
        // Self-delimiting in the first component.
        std::size_t pos = 0;
        const auto n = read_length_header(p + rng.bits(5), pos);
        if (!n || *n != a.size()) ++failures;
        std::vector<BitString> parts{a, b, rng.bits(rng.below(20))};
        if (unpair_all(pair_all(parts), 3) != parts) ++failures;
    }
    rep.add_check("statecodec.pairing", failures == 0, static_cast<double>(failures), 0.0,
                  "pair/unpair and tuple round trips");
}

void suite_quantize(RunReport& rep, Rng& rng) {
    auto grid = std::make_shared<GridSpec>();
    grid->position = {{-2.0, 2.0}, {-1.0, 3.0}};
    grid->velocity = {{-5.0, 5.0}, {-5.0, 5.0}};
    grid->time = Range{0.0, 10.0};
    grid->bits = 10;
    double worst = 0.0;
    std::size_t mismatches = 0;
    for (int i = 0; i < 500; ++i) {
        StateVector s{{rng.uniform(-2, 2), rng.uniform(-1, 3)}, {rng.uniform(-5, 5), rng.uniform(-5, 5)},
                      rng.uniform(0, 10)};
        const CoarseState c = quantize(s, grid);
        const StateVector d = dequantize(c);
        const auto cell = [&](const Range& r) { return r.width() / std::ldexp(1.0, grid->bits); };
        for (std::size_t k = 0; k < 2; ++k) {
            worst = std::max(worst, std::abs(d.r[k] - s.r[k]) / cell(grid->position[k]));
            worst = std::max(worst, std::abs(d.v[k] - s.v[k]) / cell(grid->velocity[k]));
        }
        worst = std::max(worst, std::abs(d.t - s.t) / cell(*grid->time));
        if (quantize(d, grid).bits != c.bits) ++mismatches;
    }
    rep.add_check("statecodec.quantize", worst <= 0.5 && mismatches == 0, worst, 0.5,
                  fmt::format("centre error in cells; {} re-quantize mismatches", mismatches));
}

// --- complexity ---

void suite_coder(RunReport& rep, Rng& rng) {
    std::int64_t worst_excess = 0;
    std::size_t failures = 0;
    for (int i = 0; i < 40; ++i) {
        const BitString cond = rng.bits(rng.below(120));
        BitString target = rng.bits(rng.below(120));
        if (i % 3 == 0) target = cond;  // compressible case
        const BitString code = arithmetic_encode(target, cond);
        if (arithmetic_decode(code, target.size(), cond) != target) ++failures;
        if (khat(target, cond) != khat(target, cond)) ++failures;
        worst_excess = std::max(worst_excess, static_cast<std::int64_t>(code.size()) - khat(target, cond));
    }
    rep.add_check("complexity.coder", failures == 0 && worst_excess <= 2, static_cast<double>(worst_excess), 2.0,
                  fmt::format("code length minus khat; {} round-trip or determinism failures", failures));
}

void suite_kraft(RunReport& rep, Rng& rng) {
    // Exhaustive over every target length up to 8 bits, for a few conditions.
    double worst = 0.0;
    for (int c = 0; c < 4; ++c) {
        const BitString cond = rng.bits(static_cast<std::size_t>(8 * c));
        for (int len = 1; len <= 8; ++len) {
            std::vector<std::int64_t> lengths;
            for (std::uint64_t w = 0; w < (1u << len); ++w) lengths.push_back(khat(cell_bits(w, len), cond));
            worst = std::max(worst, kraft_sum(lengths).sum);
        }
    }
    rep.add_check("complexity.kraft", worst <= 1.0, worst, 1.0, "max Kraft sum, lengths 1..8");
}

void suite_chain(RunReport& rep, const std::optional<std::string>& calibration_path) {
    const std::string path = calibration_path.value_or(default_calibration_path());
    if (!std::filesystem::is_regular_file(path)) {
        rep.add_check("complexity.chain_rule", false, 0.0, 0.0, "calibration file missing: " + path);
        return;
    }
    const Calibration cal = load_calibration(path);
    CorpusSpec spec = cal.corpus;
    auto corpus = triple_corpus(spec);
    corpus.resize(std::min<std::size_t>(corpus.size(), 120));
    const ChainStats st = measure_chain(corpus, cal.model);
    const bool ok = st.c_w <= cal.chain.c_w && st.n3_residual <= cal.chain.n3_residual;
    rep.add_check("complexity.chain_rule", ok, static_cast<double>(st.c_w), static_cast<double>(cal.chain.c_w),
                  fmt::format("n3 residual {} (calibrated {})", st.n3_residual, cal.chain.n3_residual));
}

void suite_decomposition(RunReport& rep, Rng& rng) {
    std::size_t failures = 0;
    for (int i = 0; i < 20; ++i) {
        std::vector<BitString> parts;
        const std::size_t n = 1 + rng.below(4);
        for (std::size_t k = 0; k < n; ++k) parts.push_back(rng.bits(rng.below(60)));
        if (!chain_decompose(parts, rng.bits(rng.below(30))).identity_holds()) ++failures;
    }
    rep.add_check("complexity.decomposition", failures == 0, static_cast<double>(failures), 0.0,
                  "K_joint = sum K - sum I + residual");
}

void suite_law(RunReport& rep) {
    // Orbit of a fixed update rule: the law complexity is the mean of the
    // per-step costs of that rule.
    const PotentialSpec V = harmonic(1.0);
    const auto traj = verlet(V, Eigen::VectorXd::Ones(1), row({1.0}), row({0.0}), 64, 0.1);
    GridSpec g;
    g.position = {{-1.5, 1.5}};
    g.velocity = {{-1.5, 1.5}};
    g.bits = 8;
    g.dt = 0.1;
    const auto states = encode_trajectory(traj, g);
    const auto law = law_complexity(states, LawParameterization::abstract_index);
    const auto law_t = law_complexity(states, LawParameterization::time);
    double sum = 0.0;
    for (std::size_t k = 0; k + 1 < states.size(); ++k) sum += static_cast<double>(khat(states[k + 1].bits, states[k].bits));
    const double gap = std::max(std::abs(law.mean_rate - sum / 64.0), std::abs(law_t.mean_rate - sum / 6.4) * 0.1);
    rep.add_check("complexity.law", gap <= 1e-12, gap, 1e-12, "mean rate against per-step khat");
}

// --- discrete_mech ---

void suite_el_residual(RunReport& rep, const std::optional<std::string>& mutation) {
    const PotentialSpec V = pair_spring(3.0, 0.5);
    Eigen::VectorXd m(2);
    m << 1.0, 2.5;
    Configuration r0(2, 2), v0(2, 2);
    r0 << 0.0, 0.0, 1.0, 0.2;
    v0 << 0.1, -0.3, -0.2, 0.4;
    const auto traj = verlet(V, m, r0, v0, 400, 0.01);
    GradientFunction grad = gradient_function(V, m);
    if (mutation && *mutation == "gradient_sign") {
        grad = [inner = grad](const Configuration& r, std::size_t k) -> Configuration { return -inner(r, k); };
    }
    const double rel = relative_residual(traj, el_residual(traj, grad));
    rep.add_check("discrete_mech.el_residual", rel <= 1e-12, rel, 1e-12, "Verlet orbit, residual / force scale");
}

void suite_sum_by_parts(RunReport& rep, Rng& rng) {
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const std::size_t n = 2 + rng.below(200);
        std::vector<double> u(n), v(n);
        for (std::size_t k = 0; k < n; ++k) {
            u[k] = rng.uniform(-1, 1);
            v[k] = rng.uniform(-1, 1);
        }
        const auto s = sum_by_parts(u, v);
        const double scale = std::max({std::abs(s.lhs), std::abs(s.rhs), 1.0});
        worst = std::max(worst, std::abs(s.lhs - s.rhs) / scale);
    }
    rep.add_check("discrete_mech.sum_by_parts", worst <= 1e-12, worst, 1e-12, "1000 random pairs");
}

void suite_action_gradient(RunReport& rep, Rng& rng) {
    // dS/dr_k = -dt * residual_k, by central differences of the action.
    const PotentialSpec V = harmonic(2.0);
    Eigen::VectorXd m(2);
    m << 1.0, 0.5;
    DiscreteTrajectory traj;
    traj.masses = m;
    traj.dt = 0.05;
    for (int k = 0; k <= 12; ++k) {
        Configuration r(2, 2);
        for (Eigen::Index i = 0; i < 4; ++i) r(i / 2, i % 2) = rng.uniform(-1, 1);
        traj.positions.push_back(r);
    }
    const double E = 0.3;
    const auto res = el_residual(traj, V);
    double worst = 0.0;
    const double h = 1e-5;
    for (std::size_t k = 1; k < 12; ++k) {
        for (Eigen::Index i = 0; i < 4; ++i) {
            DiscreteTrajectory p = traj, q = traj;
            p.positions[k](i / 2, i % 2) += h;
            q.positions[k](i / 2, i % 2) -= h;
            const double fd = (discrete_action(p, V, E).action - discrete_action(q, V, E).action) / (2 * h);
            const double an = -traj.dt * res[k - 1](i / 2, i % 2);
            worst = std::max(worst, std::abs(fd - an) / std::max(1.0, std::abs(an)));
        }
    }
    rep.add_check("discrete_mech.action_gradient", worst <= 1e-7, worst, 1e-7, "finite differences of S");
}

void suite_galilean(RunReport& rep, Rng& rng) {
    const PotentialSpec V = inverse_square(1.0);
    Eigen::VectorXd m(3);
    m << 1.0, 0.01, 0.02;
    Configuration r0(3, 2), v0(3, 2);
    r0 << 0, 0, 1, 0, -1.5, 0;
    v0 << 0, 0, 0, 1, 0, -0.8;
    const auto traj = verlet(V, m, r0, v0, 300, 0.005);
    double worst = 0.0;
    for (int i = 0; i < 10; ++i) {
        worst = std::max(worst, galilean_check(traj, V, Eigen::Vector2d(rng.uniform(-1, 1), rng.uniform(-1, 1))).normalized);
    }
    rep.add_check("discrete_mech.galilean", worst <= 1e-12, worst, 1e-12, "10 random boosts");
}

void suite_energy(RunReport& rep) {
    const PotentialSpec V = harmonic(1.0);
    const auto traj = verlet(V, Eigen::VectorXd::Ones(1), row({1.0}), row({0.0}), 20000, 0.01);
    const double e1 = energy(traj, V, 1);
    double worst = 0.0;
    for (std::size_t k = 1; k <= traj.steps(); ++k) worst = std::max(worst, std::abs(energy(traj, V, k) - e1) / e1);
    rep.add_check("discrete_mech.energy", worst <= 1e-4, worst, 1e-4, "harmonic, 2e4 steps");
}

void suite_extremize(RunReport& rep) {
    const PotentialSpec V = harmonic(1.0);
    const Eigen::VectorXd m = Eigen::VectorXd::Ones(1);
    const auto ref = verlet(V, m, row({1.0, 0.0}), row({0.0, 0.7}), 200, 0.01);
    const auto res = extremize_action(ref.positions.front(), ref.positions.back(), 200, V, m, 0.01);
    double dev = 0.0;
    for (std::size_t k = 0; k <= 200; ++k) dev = std::max(dev, max_abs(res.trajectory.positions[k] - ref.positions[k]));
    rep.add_check("discrete_mech.extremize", dev <= 1e-8 && res.is_minimum, dev, 1e-8,
                  res.is_minimum ? "minimum" : "not reported as a minimum");
}

void suite_frozen(RunReport& rep) {
    // Light particle on a spring to a massive body that circles a tether.
    const double dt = 0.01;
    const std::size_t J = 400;
    Eigen::VectorXd M = Eigen::VectorXd::Constant(1, 1e6), m = Eigen::VectorXd::Constant(1, 1e-3);
    const PotentialSpec tether = harmonic(1e6), spring = pair_spring(1e-3);
    const auto massive = verlet(tether, M, row({1.0, 0.0}), row({0.0, 1.0}), J, dt);
    const PotentialSpec eff = freeze_massive_subsystem(massive, spring);
    const auto light = verlet(eff, m, row({1.5, 0.0}), row({0.0, 0.8}), J, dt);
    // Full two-body run with both interactions.
    Eigen::VectorXd both(2);
    both << M[0], m[0];
    GradientFunction grad = [&](const Configuration& r, std::size_t) -> Configuration {
        Configuration g = Configuration::Zero(2, 2);
        g.row(0) = 1e6 * r.row(0);
        const Eigen::RowVectorXd d = r.row(1) - r.row(0);
        g.row(1) += 1e-3 * d;
        g.row(0) -= 1e-3 * d;
        return g;
    };
    Configuration r0(2, 2), v0(2, 2);
    r0 << 1.0, 0.0, 1.5, 0.0;
    v0 << 0.0, 1.0, 0.0, 0.8;
    Configuration prev = r0;
    Configuration curr = r0 + dt * v0;
    const Configuration g0 = grad(r0, 0);
    for (Eigen::Index n = 0; n < 2; ++n) curr.row(n) -= 0.5 * dt * dt * g0.row(n) / both[n];
    double dev = max_abs(light.positions[1].row(0) - curr.row(1));
    for (std::size_t k = 1; k < J; ++k) {
        const Configuration next = step_verlet(prev, curr, grad, both, dt, k);
        prev = curr;
        curr = next;
        dev = std::max(dev, (light.positions[k + 1].row(0) - curr.row(1)).cwiseAbs().maxCoeff());
    }
    rep.add_check("discrete_mech.frozen_subsystem", dev <= 1e-6, dev, 1e-6, "effective potential vs full run, m");
}

void suite_convergence(RunReport& rep) {
    InitialState init{row({1.0}), row({0.0})};
    const auto table = convergence_sweep(harmonic(1.0), Eigen::VectorXd::Ones(1), init, 10.0, {0.04, 0.02, 0.01, 0.005});
    const double p = table.observed_order.value_or(0.0);
    rep.add_check("discrete_mech.convergence", p >= 1.8 && p <= 2.2, p, 2.2, "observed order in [1.8, 2.2]");
}

// --- geodesic ---

double polyline_distance(const Eigen::VectorXd& x, const std::vector<Eigen::VectorXd>& path) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        const Eigen::VectorXd d = path[i + 1] - path[i];
        const double s = std::clamp((x - path[i]).dot(d) / d.squaredNorm(), 0.0, 1.0);
        best = std::min(best, (x - path[i] - s * d).norm());
    }
    return best;
}

void suite_jacobi(RunReport& rep) {
    // Free particle: straight line with equal Jacobi spacing.
    JacobiMetric free_jm{2.0, free_potential(), Eigen::VectorXd::Constant(1, 1.5), 2, {}};
    const auto straight = geodesic_solve(Eigen::Vector2d(0, 0), Eigen::Vector2d(3, -1), free_jm, 30);
    double dev = 0.0;
    for (std::size_t i = 0; i <= 30; ++i) {
        dev = std::max(dev, (straight.samples[i] - Eigen::Vector2d(3, -1) * (static_cast<double>(i) / 30)).cwiseAbs().maxCoeff());
    }
    // Harmonic arc of 0.8 rad against Verlet.
    const PotentialSpec V = harmonic(1.0);
    const Eigen::VectorXd m = Eigen::VectorXd::Ones(1);
    const std::size_t J = 800;
    const auto ref = verlet(V, m, row({1.0, 0.0}), row({0.0, 0.7}), J, 1e-3);
    JacobiMetric jm{0.5 * 0.49 + 0.5, V, m, 2, {}};
    const auto path = geodesic_solve(flatten(ref.positions.front()), flatten(ref.positions.back()), jm, 200);
    double set_dev = 0.0;
    for (const auto& r : ref.positions) set_dev = std::max(set_dev, polyline_distance(flatten(r), path.samples));
    const double fv = first_variation_norm(path, jm);
    rep.add_check("geodesic.jacobi", dev <= 1e-10 && set_dev <= 1e-3 && fv <= 1e-10, set_dev, 1e-3,
                  fmt::format("free-path deviation {:.3g} m, first variation {:.3g}", dev, fv));
}

void suite_lorentz(RunReport& rep, Rng& rng) {
    const StaticMetric sm = minkowski();
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const Event a(rng.uniform(-1, 1), rng.uniform(-1e8, 1e8), rng.uniform(-1e8, 1e8), rng.uniform(-1e8, 1e8));
        const Event b = a + Event(rng.uniform(0.5, 2.0), rng.uniform(-1e8, 1e8), rng.uniform(-1e8, 1e8), rng.uniform(-1e8, 1e8));
        Eigen::Vector3d dir(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1));
        const Eigen::Vector3d v = dir.normalized() * rng.uniform(0.0, 0.9) * kSpeedOfLight;
        const double s2 = interval(a, b, sm);
        const double s2b = interval(lorentz_boost(a, v), lorentz_boost(b, v), sm);
        const double scale = std::pow(kSpeedOfLight * (b[0] - a[0]), 2) + (b - a).tail<3>().squaredNorm();
        worst = std::max(worst, std::abs(s2b - s2) / scale);
    }
    rep.add_check("geodesic.lorentz_invariance", worst <= 1e-10, worst, 1e-10, "100 random boosts");
}

void suite_worldlines(RunReport& rep) {
    double worst_norm = 0.0, straight = 0.0;
    const Event e0(0, 0, 0, 0), e1(1.0, 3e7, -1e7, 5e6);
    const auto w = rel_geodesic_solve(e0, e1, minkowski(), 50);
    for (std::size_t k = 0; k <= w.segments(); ++k) {
        const double s = w.events[k][0];
        straight = std::max(straight, (w.events[k].tail<3>() - s * e1.tail<3>()).cwiseAbs().maxCoeff() / 3e7);
    }
    const StaticMetric field = weak_point_mass(1.0, Eigen::Vector3d::Zero(), 1.0);
    const Event p0(0, 1e3, 0, 0), p1(2e4, 0, 1.2e3, 0);
    std::vector<std::pair<Worldline, StaticMetric>> solved{{w, minkowski()}};
    solved.emplace_back(rel_geodesic_solve(p0, p1, field, 80), field);
    for (const auto& [wl, sm] : solved) {
        for (std::size_t k = 0; k < wl.segments(); ++k) {
            const Eigen::Vector4d u = four_velocity(wl, k, sm);
            worst_norm = std::max(worst_norm, std::abs(metric_dot(u, u, wl.events[k], wl.events[k + 1], sm) - 1.0));
        }
    }
    rep.add_check("geodesic.worldlines", worst_norm <= 1e-9 && straight <= 1e-10, worst_norm, 1e-9,
                  fmt::format("Minkowski straightness {:.3g}", straight));
}

void suite_low_speed(RunReport& rep) {
    // Natural units c = 1: projectile of speed beta across unit distance.
    auto deviation = [](double beta) {
        const double T = 1.0 / beta, g = beta * beta;
        const StaticMetric sm = weak_uniform_field(g, 1.0);
        const Event e0(0, 0, 0, 0), e1(T, 1.0, 0, 0);
        const auto w = rel_geodesic_solve(e0, e1, sm, 100);
        const auto n = extremize_action(row({0, 0, 0}), row({1.0, 0, 0}), 100, uniform_field(Eigen::Vector3d(0, 0, -g)),
                                        Eigen::VectorXd::Ones(1), T / 100, 0.0);
        double dev = 0.0, span = 0.0;
        for (std::size_t k = 0; k <= 100; ++k) {
            const Eigen::Vector3d xn = n.trajectory.positions[k].row(0).transpose();
            dev = std::max(dev, (w.events[k].tail<3>() - xn).cwiseAbs().maxCoeff());
            span = std::max(span, xn.cwiseAbs().maxCoeff());
        }
        return dev / span;
    };
    const double d3 = deviation(1e-3), d2 = deviation(1e-2);
    const double ratio = d2 / d3;  // O(beta^2) predicts 100
    rep.add_check("geodesic.low_speed_limit", d3 <= 1e-5 && ratio > 50 && ratio < 200, d3, 1e-5,
                  fmt::format("deviation ratio over one decade {:.4g}", ratio));
}

// --- cli ---

json mini_config(RunKind kind) {
    json harmonic1 = {{"kind", "harmonic"}, {"stiffness_N_per_m", 1.0}};
    switch (kind) {
        case RunKind::simulate:
            return {{"run", "simulate"}, {"system", {{"masses_kg", {1.0, 2.0}}, {"dimensions", 1}}},
                    {"potential", {{"kind", "pair_spring"}, {"stiffness_N_per_m", 2.0}}},
                    {"grid", {{"position_ranges_m", {{-2, 2}}}, {"velocity_ranges_m_per_s", {{-3, 3}}}, {"bits", 6}}},
                    {"simulate", {{"dt_s", 0.01}, {"steps", 300}, {"initial_positions_m", {0.0, 1.0}},
                                  {"initial_velocities_m_per_s", {0.5, 0.0}}, {"random_boosts", 3}}}};
        case RunKind::extremize:
            return {{"run", "extremize"}, {"system", {{"masses_kg", {1.0}}, {"dimensions", 1}}},
                    {"potential", harmonic1},
                    {"extremize", {{"dt_s", 0.01}, {"steps", 100}, {"initial_positions_m", {1.0}}}}};
        case RunKind::geodesic:
            return {{"run", "geodesic"}, {"system", {{"masses_kg", {1.0}}, {"dimensions", 2}}},
                    {"potential", harmonic1},
                    {"geodesic", {{"segments", 100}, {"dt_s", 0.002}, {"steps", 300},
                                  {"initial_positions_m", {1.0, 0.0}}, {"initial_velocities_m_per_s", {0.0, 0.7}}}},
                    {"tolerances", {{"energy_relative", 1e-4}}}};
        case RunKind::rel_geodesic:
            return {{"run", "rel_geodesic"},
                    {"rel_geodesic", {{"metric", {{"kind", "weak_field"}, {"field", "uniform"}, {"g_m_per_s2", 1e-6},
                                                  {"c_m_per_s", 1.0}}},
                                      {"start_event_s_m", {0, 0, 0, 0}}, {"end_event_s_m", {1000, 1, 0, 0}},
                                      {"segments", 40}}},
                    {"system", {{"masses_kg", {1.0}}, {"dimensions", 3}}}};
        case RunKind::complexity:
            return {{"run", "complexity"}, {"system", {{"masses_kg", {1.0, 1.0}}, {"dimensions", 1}}},
                    {"potential", {{"kind", "pair_spring"}, {"stiffness_N_per_m", 1.0}}},
                    {"grid", {{"position_ranges_m", {{-1, 1}}}, {"velocity_ranges_m_per_s", {{-1, 1}}}, {"bits", 24}}},
                    {"acceleration_grid", {{"ranges_m_per_s2", {{-0.6, 0.6}}}, {"bits", 8}}},
                    {"complexity", {{"dt_s", 0.05}, {"steps", 40}, {"initial_positions_m", {0.4, 0.1}},
                                    {"initial_velocities_m_per_s", {-0.15, 0.15}}}}};
        case RunKind::convergence:
            return {{"run", "convergence"}, {"system", {{"masses_kg", {1.0}}, {"dimensions", 1}}},
                    {"potential", harmonic1},
                    {"convergence", {{"dt_sweep_s", {0.04, 0.02, 0.01}}, {"duration_s", 2.0},
                                     {"initial_positions_m", {1.0}}}}};
        case RunKind::verify:
            break;
    }
    return {};
}

void suite_coverage(RunReport& rep, std::uint64_t seed) {
    std::set<RunKind> kinds;
    std::size_t unreachable = 0;
    for (const auto& [op, ks] : operation_coverage()) {
        if (ks.empty()) ++unreachable;
        kinds.insert(ks.begin(), ks.end());
    }
    std::size_t failed_runs = 0;
    std::string detail;
    for (RunKind k : kinds) {
        if (k == RunKind::verify) continue;
        json cfg = mini_config(k);
        cfg["seed"] = seed;
        try {
            if (!run_scenario(parse_scenario(cfg)).passed()) {
                ++failed_runs;
                detail += fmt::format(" {} failed checks;", to_string(k));
            }
        } catch (const std::exception& e) {
            ++failed_runs;
            detail += fmt::format(" {}: {};", to_string(k), e.what());
        }
    }
    rep.add_check("cli.coverage", unreachable == 0 && failed_runs == 0, static_cast<double>(unreachable + failed_runs),
                  0.0, fmt::format("{} operations over {} run kinds{}", operation_coverage().size(), kinds.size(), detail));
}

void suite_determinism(RunReport& rep, std::uint64_t seed) {
    json cfg = mini_config(RunKind::simulate);
    cfg["seed"] = seed;
    const auto a = run_scenario(parse_scenario(cfg));
    const auto b = run_scenario(parse_scenario(cfg));
    const bool same = a.artifacts == b.artifacts && a.to_json().dump() == b.to_json().dump();
    rep.add_check("cli.determinism", same, same ? 0.0 : 1.0, 0.0, "two in-memory runs, artifacts compared");
}

void suite_validation(RunReport& rep) {
    // Malformed configs are rejected before anything runs.
    std::size_t accepted = 0;
    json bad1 = mini_config(RunKind::simulate);
    bad1["simulate"]["dt_s"] = -1.0;
    json bad2 = mini_config(RunKind::convergence);
    bad2["convergence"]["dt_sweep_s"] = {0.01};
    json bad3 = mini_config(RunKind::extremize);
    bad3["extremize"]["unexpected"] = 1;
    for (const json* cfg : {&bad1, &bad2, &bad3}) {
        try {
            parse_scenario(*cfg);
            ++accepted;
        } catch (const ValidationError&) {
        }
    }
    rep.add_check("cli.validation", accepted == 0, static_cast<double>(accepted), 0.0, "malformed configs accepted");
}

}  // namespace

const std::vector<std::pair<std::string, std::vector<RunKind>>>& operation_coverage() {
    using K = RunKind;
    static const std::vector<std::pair<std::string, std::vector<RunKind>>> table{
        {"quantize", {K::simulate, K::complexity, K::verify}},
        {"dequantize", {K::complexity, K::verify}},
        {"pair", {K::simulate, K::complexity, K::verify}},
        {"encode_trajectory", {K::simulate, K::complexity}},
        {"khat", {K::complexity, K::verify}},
        {"mutual_info", {K::complexity}},
        {"chain_decompose", {K::complexity, K::verify}},
        {"law_complexity", {K::complexity, K::verify}},
        {"interaction_term", {K::complexity}},
        {"kraft_sum", {K::complexity, K::verify}},
        {"discrete_velocity", {K::simulate, K::extremize}},
        {"discrete_accel", {K::simulate, K::extremize}},
        {"discrete_action", {K::simulate, K::extremize}},
        {"sum_by_parts", {K::verify}},
        {"el_residual", {K::simulate, K::extremize}},
        {"step_verlet", {K::simulate, K::extremize, K::geodesic, K::complexity, K::convergence}},
        {"extremize_action", {K::extremize, K::rel_geodesic}},
        {"energy", {K::simulate, K::geodesic}},
        {"galilean_check", {K::simulate}},
        {"freeze_massive_subsystem", {K::simulate, K::verify}},
        {"jacobi_metric_at", {K::geodesic}},
        {"path_length", {K::geodesic}},
        {"geodesic_solve", {K::geodesic}},
        {"time_reparameterize", {K::geodesic}},
        {"interval", {K::rel_geodesic, K::verify}},
        {"lorentz_boost", {K::verify}},
        {"four_velocity", {K::rel_geodesic}},
        {"rel_action", {K::rel_geodesic}},
        {"rel_geodesic_solve", {K::rel_geodesic}},
        {"run", {K::simulate, K::extremize, K::geodesic, K::rel_geodesic, K::complexity, K::convergence, K::verify}},
        {"convergence_sweep", {K::convergence, K::verify}},
        {"verify", {K::verify}},
    };
    return table;
}

RunReport run_verify(std::uint64_t seed, const std::optional<std::string>& mutation,
                     const std::optional<std::string>& calibration_path) {
    RunReport rep;
    rep.kind = RunKind::verify;
    Rng rng(seed);
    suite_pairing(rep, rng);
    suite_quantize(rep, rng);
    suite_coder(rep, rng);
    suite_kraft(rep, rng);
    suite_chain(rep, calibration_path);
    suite_decomposition(rep, rng);
    suite_law(rep);
    suite_el_residual(rep, mutation);
    suite_sum_by_parts(rep, rng);
    suite_action_gradient(rep, rng);
    suite_galilean(rep, rng);
    suite_energy(rep);
    suite_extremize(rep);
    suite_frozen(rep);
    suite_convergence(rep);
    suite_jacobi(rep);
    suite_lorentz(rep, rng);
    suite_worldlines(rep);
    suite_low_speed(rep);
    suite_coverage(rep, seed);
    suite_determinism(rep, seed);
    suite_validation(rep);
    rep.results["suites"] = rep.checks.size();
    rep.results["mutation"] = mutation ? json(*mutation) : json(nullptr);
    return rep;
}

}  // namespace simplicity
