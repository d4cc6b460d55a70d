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


// Acceptance criteria 1-10. One PASS/FAIL line per criterion; exit status is
// nonzero if any criterion fails.

#include <fmt/core.h>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>

#include "simplicity/calibration.hpp"
#include "simplicity/complexity.hpp"
#include "simplicity/discrete_mech.hpp"
#include "simplicity/geodesic.hpp"
#include "simplicity/relativity.hpp"
#include "simplicity/scenario.hpp"
#include "simplicity/statecodec.hpp"

using namespace simplicity;

namespace {

struct Outcome {
    bool passed = false;
    std::string detail;
};

Configuration scalar(double x) { return Configuration::Constant(1, 1, x); }

const Eigen::VectorXd kUnitMass = Eigen::VectorXd::Ones(1);

// 1. Verlet against x(t) = cos t.
Outcome discrete_newton() {
    constexpr double kTol = 5e-3;
    const double dt = 0.01;
    const PotentialSpec V = harmonic(1.0);
    const auto traj = simulate_verlet(scalar(1.0), verlet_start(scalar(1.0), scalar(0.0), V, kUnitMass, dt), 1000, V,
                                      kUnitMass, dt);
    double worst = 0.0;
    for (std::size_t k = 0; k <= 1000; ++k)
        worst = std::max(worst, std::abs(traj.positions[k](0, 0) - std::cos(dt * static_cast<double>(k))));
    return {worst <= kTol, fmt::format("max |x_k - cos t_k| = {:.3e} (tol {:.0e})", worst, kTol)};
}

// 2. Fixed-endpoint extremum reproduces the Verlet interior.
Outcome stationarity() {
    constexpr double kMatchTol = 1e-8, kResidualTol = 1e-10;
    const double dt = 0.01;
    const std::size_t J = 1000;
    const PotentialSpec V = harmonic(1.0);
    const auto ref = simulate_verlet(scalar(1.0), verlet_start(scalar(1.0), scalar(0.3), V, kUnitMass, dt), J, V,
                                     kUnitMass, dt);
    const auto res = extremize_action(ref.positions.front(), ref.positions.back(), J, V, kUnitMass, dt);
    double match = 0.0, resid = 0.0;
    for (std::size_t k = 0; k <= J; ++k)
        match = std::max(match, std::abs(res.trajectory.positions[k](0, 0) - ref.positions[k](0, 0)));
    for (const auto& r : el_residual(res.trajectory, V)) resid = std::max(resid, r.cwiseAbs().maxCoeff());
    return {match <= kMatchTol && resid <= kResidualTol,
            fmt::format("J={} match {:.3e} (tol {:.0e}), el_residual {:.3e} (tol {:.0e})", J, match, kMatchTol, resid,
                        kResidualTol)};
}

// 3. Summation by parts on random sequences.
Outcome summation_by_parts() {
    constexpr double kTol = 1e-12;
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::uniform_int_distribution<int> len(1, 200);
    double worst = 0.0;
    for (int pair = 0; pair < 1000; ++pair) {
        std::vector<double> a(static_cast<std::size_t>(len(rng))), b(a.size());
        double scale = 0.0;
        for (std::size_t k = 0; k < a.size(); ++k) {
            a[k] = u(rng);
            b[k] = u(rng);
        }
        double pa = 0.0, pb = 0.0;
        for (std::size_t k = 0; k < a.size(); ++k) {
            pa += std::abs(a[k]);
            pb += std::abs(b[k]);
        }
        scale = pa * pb;
        const SumByParts s = sum_by_parts(a, b);
        worst = std::max(worst, std::abs(s.lhs - s.rhs) / scale);
    }
    return {worst <= kTol, fmt::format("max relative defect {:.3e} over 1000 pairs (tol {:.0e})", worst, kTol)};
}

// 4. Observed order on the harmonic dt sweep.
Outcome convergence_order() {
    constexpr double kLo = 1.8, kHi = 2.2;
    const InitialState init{scalar(1.0), scalar(0.0)};
    const auto table = convergence_sweep(harmonic(1.0), kUnitMass, init, 10.0, {0.04, 0.02, 0.01, 0.005});
    const double p = table.observed_order.value_or(0.0);
    return {table.observed_order && p >= kLo && p <= kHi, fmt::format("order {:.4f} (range [{}, {}])", p, kLo, kHi)};
}

// 5. Long-run energy deviation and trend.
Outcome energy_behaviour() {
    constexpr double kDevTol = 1e-3, kTrendTol = 1e-4;
    const double dt = 0.01;
    const std::size_t J = 100000;
    const PotentialSpec V = harmonic(1.0);
    const auto traj = simulate_verlet(scalar(1.0), verlet_start(scalar(1.0), scalar(0.0), V, kUnitMass, dt), J, V,
                                      kUnitMass, dt);
    const double e1 = energy(traj, V, 1);
    double worst = 0.0, st = 0.0, se = 0.0, stt = 0.0, ste = 0.0;
    for (std::size_t k = 1; k <= J; ++k) {
        const double e = energy(traj, V, k), t = dt * static_cast<double>(k);
        worst = std::max(worst, std::abs(e - e1) / e1);
        st += t;
        se += e;
        stt += t * t;
        ste += t * e;
    }
    const double n = static_cast<double>(J);
    const double slope = (n * ste - st * se) / (n * stt - st * st);
    const double tau = dt * n;
    const double trend = std::abs(slope) * tau / e1;
    return {worst <= kDevTol && trend <= kTrendTol,
            fmt::format("max |E_k - E_1|/E_1 {:.3e} (tol {:.0e}), |slope| tau / E_1 {:.3e} (tol {:.0e})", worst,
                        kDevTol, trend, kTrendTol)};
}

// 6. Jacobi geodesic against Verlet between identical endpoints.
Outcome jacobi_equivalence() {
    constexpr double kTol = 1e-3;
    const double dt = 1e-3;
    const std::size_t J = 800;
    const PotentialSpec V = harmonic(1.0);
    Configuration r0(1, 2), v0(1, 2);
    r0 << 1.0, 0.0;
    v0 << 0.0, 0.7;
    const auto ref = simulate_verlet(r0, verlet_start(r0, v0, V, kUnitMass, dt), J, V, kUnitMass, dt);
    JacobiMetric jm;
    jm.energy = 0.5 * v0.squaredNorm() + 0.5 * r0.squaredNorm();
    jm.potential = V;
    jm.masses = kUnitMass;
    jm.dims = 2;
    const auto path = geodesic_solve(flatten(ref.positions.front()), flatten(ref.positions.back()), jm, 800);
    const auto traj = time_reparameterize(path, jm, J);
    double dev = 0.0;
    for (std::size_t k = 0; k <= J; ++k) dev = std::max(dev, (traj.positions[k] - ref.positions[k]).cwiseAbs().maxCoeff());
    return {dev <= kTol, fmt::format("0.8 rad arc, pointwise deviation {:.3e} m (tol {:.0e})", dev, kTol)};
}

// 7. Four-velocity norm, interval invariance, straight free worldlines.
Outcome relativistic_invariants() {
    constexpr double kNormTol = 1e-9, kBoostTol = 1e-10, kStraightTol = 1e-10;
    const double c = kSpeedOfLight;
    std::vector<std::pair<Worldline, StaticMetric>> solved;
    solved.emplace_back(rel_geodesic_solve(Event(0, 0, 0, 0), Event(2.0, 1e8, 3e7, -4e7), minkowski(), 100), minkowski());
    solved.emplace_back(rel_geodesic_solve(Event(0, 0, 0, 0), Event(1000, 1, 0, 0), weak_uniform_field(1e-6, 1.0), 100),
                        weak_uniform_field(1e-6, 1.0));
    const StaticMetric earth = weak_point_mass(3.986004418e14);
    solved.emplace_back(rel_geodesic_solve(Event(0, 7e6, 0, 0), Event(600, 5e6, 4.5e6, 0), earth, 200), earth);
    double norm_dev = 0.0;
    for (const auto& [w, sm] : solved) {
        for (std::size_t k = 0; k < w.segments(); ++k) {
            const Eigen::Vector4d u = four_velocity(w, k, sm);
            norm_dev = std::max(norm_dev, std::abs(metric_dot(u, u, w.events[k], w.events[k + 1], sm) - 1.0));
        }
    }

    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const StaticMetric flat = minkowski();
    double boost_dev = 0.0;
    for (int i = 0; i < 100; ++i) {
        const Event a(u(rng), 1e8 * u(rng), 1e8 * u(rng), 1e8 * u(rng));
        const Event b = a + Event(1.0 + u(rng), 1e8 * u(rng), 1e8 * u(rng), 1e8 * u(rng));
        const Eigen::Vector3d v = Eigen::Vector3d(u(rng), u(rng), u(rng)).normalized() * 0.95 * c * std::abs(u(rng));
        const double s2 = interval(a, b, flat), s2b = interval(lorentz_boost(a, v), lorentz_boost(b, v), flat);
        const double scale = std::pow(c * (b[0] - a[0]), 2) + (b - a).tail<3>().squaredNorm();
        boost_dev = std::max(boost_dev, std::abs(s2b - s2) / scale);
    }

    const Worldline& free = solved.front().first;
    const Event& e1 = free.events.back();
    double straight = 0.0;
    for (const auto& e : free.events)
        straight = std::max(straight, (e.tail<3>() - (e[0] / e1[0]) * e1.tail<3>()).cwiseAbs().maxCoeff());
    straight /= e1.tail<3>().cwiseAbs().maxCoeff();
    return {norm_dev <= kNormTol && boost_dev <= kBoostTol && straight <= kStraightTol,
            fmt::format("|u.u - 1| {:.3e} (tol {:.0e}), boost {:.3e} (tol {:.0e}), straightness {:.3e} (tol {:.0e})",
                        norm_dev, kNormTol, boost_dev, kBoostTol, straight, kStraightTol)};
}

double projectile_deviation(double beta) {
    // Natural units c = 1: unit distance at speed beta with g = beta^2.
    const std::size_t M = 100;
    const double T = 1.0 / beta, g = beta * beta;
    const auto w = rel_geodesic_solve(Event(0, 0, 0, 0), Event(T, 1, 0, 0), weak_uniform_field(g, 1.0), M);
    Configuration a = Configuration::Zero(1, 3), b = Configuration::Zero(1, 3);
    b(0, 0) = 1.0;
    const auto newton = extremize_action(a, b, M, uniform_field(Eigen::Vector3d(0, 0, -g)), kUnitMass,
                                         T / static_cast<double>(M), 0.0);
    double dev = 0.0, span = 0.0;
    for (std::size_t k = 0; k <= M; ++k) {
        const Eigen::Vector3d xn = newton.trajectory.positions[k].row(0).transpose();
        dev = std::max(dev, (w.events[k].tail<3>() - xn).cwiseAbs().maxCoeff());
        span = std::max(span, xn.cwiseAbs().maxCoeff());
    }
    return dev / span;
}

// 8. Weak uniform field against the Newtonian projectile.
Outcome low_speed_limit() {
    constexpr double kTol = 1e-5;
    constexpr double kSlopeLo = 1.8, kSlopeHi = 2.2;  // log10 deviation ratio per decade of beta
    const double d2 = projectile_deviation(1e-2), d3 = projectile_deviation(1e-3), d4 = projectile_deviation(1e-4);
    const double s1 = std::log10(d2 / d3), s2 = std::log10(d3 / d4);
    const bool ok = d3 <= kTol && s1 >= kSlopeLo && s1 <= kSlopeHi && s2 >= kSlopeLo && s2 <= kSlopeHi;
    return {ok, fmt::format("beta=1e-3 deviation {:.3e} (tol {:.0e}); decade slopes {:.3f}, {:.3f} (range [{}, {}])",
                            d3, kTol, s1, s2, kSlopeLo, kSlopeHi)};
}

// 9. Kraft, chain rule against the pinned calibration, interaction fixture.
Outcome complexity_calculus() {
    std::mt19937_64 rng(9);
    double kraft = 0.0;
    for (int c = 0; c < 4; ++c) {
        BitString cond;
        for (int i = 0; i < 8 * c; ++i) cond.push_back((rng() >> 63) ? '1' : '0');
        for (int len = 1; len <= 8; ++len) {
            std::vector<std::int64_t> lengths;
            for (std::uint64_t w = 0; w < (1u << len); ++w) {
                BitString t;
                for (int i = len - 1; i >= 0; --i) t.push_back(((w >> i) & 1u) ? '1' : '0');
                lengths.push_back(khat(t, cond));
            }
            kraft = std::max(kraft, kraft_sum(lengths).sum);
        }
    }
    const Calibration pinned = load_calibration(default_calibration_path());
    const auto corpus = triple_corpus(pinned.corpus);
    const bool same_corpus = corpus.size() == 1000 && corpus_fingerprint(corpus) == pinned.fingerprint;
    const ChainStats chain = measure_chain(corpus, pinned.model);
    const InteractionFixture fx = measure_interaction_fixture(pinned.model);
    const bool vn_ok = fx.coupled >= 2 * std::abs(fx.uncoupled) && fx.coupled > 0;
    const bool ok = kraft <= 1.0 && same_corpus && chain.c_w <= pinned.chain.c_w && vn_ok;
    return {ok, fmt::format("Kraft max {:.6f} (<= 1); chain residual {} (c_W {}); V_N coupled {} vs uncoupled {} (>= 2x)",
                            kraft, chain.c_w, pinned.chain.c_w, fx.coupled, fx.uncoupled)};
}

// 10. Two runs of the same scenarios give identical bytes on disk.
Outcome determinism() {
    namespace fs = std::filesystem;
    const fs::path root = fs::temp_directory_path() / "simplicity_acceptance";
    fs::remove_all(root);
    std::size_t files = 0;
    bool same = true;
    for (const char* name : {"harmonic_simulate", "spring_pair_boosts", "harmonic_extremize", "free_geodesic",
                             "minkowski_worldline", "small_grid_complexity", "harmonic_convergence"}) {
        const ScenarioConfig cfg = load_scenario(std::string(SIMPLICITY_SCENARIO_DIR) + "/" + name + ".json");
        std::vector<std::string> listing[2];
        for (int run = 0; run < 2; ++run) {
            for (const auto& f : commit_artifacts(run_scenario(cfg), (root / fmt::format("{}_{}", name, run)).string()))
                listing[run].push_back(fs::path(f).filename().string());
        }
        same = same && listing[0] == listing[1];
        for (const auto& f : listing[0]) {
            auto bytes = [&](int run) {
                std::ifstream in(root / fmt::format("{}_{}", name, run) / f, std::ios::binary);
                std::ostringstream s;
                s << in.rdbuf();
                return s.str();
            };
            same = same && bytes(0) == bytes(1);
            ++files;
        }
    }
    fs::remove_all(root);
    return {same && files > 0, fmt::format("{} artifact files compared byte for byte", files)};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"discrete_newton", discrete_newton},
        {"stationarity_equivalence", stationarity},
        {"summation_by_parts", summation_by_parts},
        {"convergence_order", convergence_order},
        {"energy_behaviour", energy_behaviour},
        {"jacobi_geodesic", jacobi_equivalence},
        {"relativistic_invariants", relativistic_invariants},
        {"low_speed_limit", low_speed_limit},
        {"complexity_calculus", complexity_calculus},
        {"determinism", determinism},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (!o.passed) ++failed;
        fmt::print("{} {:>2} {}: {} [{:.2f} s]\n", o.passed ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail, secs);
    }
    fmt::print("{} of {} criteria passed\n", criteria.size() - static_cast<std::size_t>(failed), criteria.size());
    return failed == 0 ? 0 : 1;
}
