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


#include <doctest.h>

#include <cmath>
#include <random>

#include "simplicity/discrete_mech.hpp"
#include "simplicity/errors.hpp"
#include "simplicity/relativity.hpp"

using namespace simplicity;

namespace {

constexpr double c = kSpeedOfLight;

double projectile_deviation(double beta, std::size_t M = 100) {
    // Natural units: unit distance at speed beta in a field g = beta^2.
    const double T = 1.0 / beta, g = beta * beta;
    const StaticMetric sm = weak_uniform_field(g, 1.0);
    const auto w = rel_geodesic_solve(Event(0, 0, 0, 0), Event(T, 1, 0, 0), sm, M);
    Configuration a = Configuration::Zero(1, 3), b = Configuration::Zero(1, 3);
    b(0, 0) = 1.0;
    const auto newton = extremize_action(a, b, M, uniform_field(Eigen::Vector3d(0, 0, -g)), Eigen::VectorXd::Ones(1),
                                         T / static_cast<double>(M), 0.0);
    double dev = 0.0, span = 0.0;
    for (std::size_t k = 0; k <= M; ++k) {
        const Eigen::Vector3d xn = newton.trajectory.positions[k].row(0).transpose();
        dev = std::max(dev, (w.events[k].tail<3>() - xn).cwiseAbs().maxCoeff());
        span = std::max(span, xn.cwiseAbs().maxCoeff());
    }
    return dev / span;
}

}  // namespace

TEST_CASE("intervals") {
    const StaticMetric flat = minkowski();
    CHECK(interval(Event(0, 0, 0, 0), Event(2, 0, 0, 0), flat) == doctest::Approx(4 * c * c));
    CHECK(interval(Event(0, 0, 0, 0), Event(1, c, 0, 0), flat) == 0.0);
    CHECK(interval(Event(0, 0, 0, 0), Event(1, 0, 2 * c, 0), flat) < 0.0);
    CHECK_THROWS_AS(proper_length(Event(0, 0, 0, 0), Event(1, c, 0, 0), flat), ValidationError);

    const StaticMetric field = weak_uniform_field(10.0);
    const Event a(0, 0, 0, 100), b(1, 0, 0, 300);
    const double g00 = 1.0 + 2.0 * 10.0 * 200.0 / (c * c);
    CHECK(interval(a, b, field) == doctest::Approx(g00 * c * c - 200.0 * 200.0).epsilon(1e-15));
}

TEST_CASE("Lorentz boosts") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> u(-1, 1);
    const StaticMetric flat = minkowski();
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const Event a(u(rng), 1e8 * u(rng), 1e8 * u(rng), 1e8 * u(rng));
        const Event b = a + Event(1.0 + u(rng), 1e8 * u(rng), 1e8 * u(rng), 1e8 * u(rng));
        const Eigen::Vector3d dir(u(rng), u(rng), u(rng));
        const Eigen::Vector3d v = dir.normalized() * 0.9 * c * std::abs(u(rng));
        const double s2 = interval(a, b, flat), s2b = interval(lorentz_boost(a, v), lorentz_boost(b, v), flat);
        worst = std::max(worst, std::abs(s2b - s2) / (std::pow(c * (b[0] - a[0]), 2) + (b - a).tail<3>().squaredNorm()));
    }
    CHECK(worst <= 1e-12);

    Worldline w{{Event(0, 1, 2, 3), Event(1, 1, 2, 3), Event(2, 1, 2, 3)}, 1.0, c};
    const Worldline same = lorentz_boost(w, Eigen::Vector3d::Zero());
    for (std::size_t k = 0; k < 3; ++k) CHECK(same.events[k] == w.events[k]);

    const Eigen::Vector3d v(0.6 * c, 0.0, 0.2 * c);
    const Worldline back = lorentz_boost(lorentz_boost(w, v), -v);
    for (std::size_t k = 0; k < 3; ++k) {
        CHECK(std::abs(back.events[k][0] - w.events[k][0]) <= 1e-12 * 3);
        CHECK((back.events[k].tail<3>() - w.events[k].tail<3>()).norm() <= 1e-12 * c);
    }

    // A particle at rest seen from a frame moving with v drifts at -v.
    const Worldline moving = lorentz_boost(w, Eigen::Vector3d(0.5 * c, 0, 0));
    const Event d = moving.events[2] - moving.events[0];
    CHECK(d[1] / d[0] == doctest::Approx(-0.5 * c));
    CHECK_THROWS_AS(lorentz_boost(w, Eigen::Vector3d(c, 0, 0)), ValidationError);
}

TEST_CASE("four-velocity") {
    Worldline rest{{Event(0, 5, 0, 0), Event(1, 5, 0, 0)}, 1.0, c};
    const Eigen::Vector4d u = four_velocity(rest, 0);
    CHECK(u[0] == doctest::Approx(1.0));
    CHECK(u.tail<3>().norm() == 0.0);

    const double v = 0.6 * c, gamma = 1.25;
    Worldline drift{{Event(0, 0, 0, 0), Event(2, 2 * v, 0, 0)}, 1.0, c};
    const Eigen::Vector4d ud = four_velocity(drift, 0);
    CHECK(ud[0] == doctest::Approx(gamma));
    CHECK(ud[1] == doctest::Approx(gamma * 0.6));

    Worldline light{{Event(0, 0, 0, 0), Event(1, c, 0, 0)}, 1.0, c};
    CHECK_THROWS_AS(four_velocity(light, 0), ValidationError);
    CHECK_THROWS_AS(four_velocity(drift, 1), IndexError);
}

TEST_CASE("relativistic action") {
    const StaticMetric flat = minkowski();
    const double m = 2.0, a = -m * c;
    Worldline drift{{Event(0, 0, 0, 0), Event(1, 0.3 * c, 0, 0), Event(2, 0.6 * c, 0, 0)}, m, c};
    const double s = 2.0 * c * std::sqrt(1 - 0.09);
    CHECK(rel_action(drift, flat, a) == doctest::Approx(a * s).epsilon(1e-14));
    Worldline rest{{Event(0, 0, 0, 0), Event(3, 0, 0, 0)}, m, c};
    CHECK(rel_action(rest, flat, a) == doctest::Approx(a * c * 3.0));
    CHECK(rel_action(rest, flat, a, 1.0) == doctest::Approx(a * c * 3.0 + a * c * 1.0 * 3.0));

    // Low-speed expansion: per unit time the action is -m c^2 + m v^2 / 2 + O(v^4 / c^2).
    const double vlow = 1e-3 * c;
    Worldline slow{{Event(0, 0, 0, 0), Event(1, vlow, 0, 0)}, m, c};
    const double density = rel_action(slow, flat, a);
    const double kinetic_part = density + m * c * c;
    CHECK(std::abs(kinetic_part - 0.5 * m * vlow * vlow) <= 1e-6 * 0.5 * m * vlow * vlow);
}

TEST_CASE("metric validation") {
    CHECK_THROWS_AS(weak_point_mass(-1.0).validate(), ValidationError);
    CHECK_THROWS_AS(minkowski(0.0).validate(), ValidationError);
    const StaticMetric deep = weak_point_mass(1.0, Eigen::Vector3d::Zero(), 1.0);
    CHECK_THROWS_AS(deep.g00(Eigen::Vector3d(0.1, 0, 0)), InfeasibilityError);
    CHECK_THROWS_AS(deep.g00(Eigen::Vector3d::Zero()), SingularityError);
    Worldline w{{Event(0, 0, 0, 0), Event(1, 0, 0, 0)}, 1.0, 1.0};
    CHECK_THROWS_AS(validate_worldline(w, minkowski()), ValidationError);
}

TEST_CASE("free worldlines are straight") {
    const Event e0(0, 0, 0, 0), e1(2.0, 1e8, 3e7, -4e7);
    const auto w = rel_geodesic_solve(e0, e1, minkowski(), 60);
    double dev = 0.0, norm_dev = 0.0;
    for (std::size_t k = 0; k <= 60; ++k) {
        const double s = w.events[k][0] / 2.0;
        dev = std::max(dev, (w.events[k].tail<3>() - s * e1.tail<3>()).cwiseAbs().maxCoeff());
    }
    const Eigen::Vector4d u0 = four_velocity(w, 0, minkowski());
    for (std::size_t k = 0; k < 60; ++k) {
        const Eigen::Vector4d u = four_velocity(w, k, minkowski());
        norm_dev = std::max(norm_dev, (u - u0).cwiseAbs().maxCoeff());
    }
    CHECK(dev <= 1e-10 * 1e8);
    CHECK(norm_dev <= 1e-9);
    CHECK_THROWS_AS(rel_geodesic_solve(e0, Event(1.0, 2 * c, 0, 0), minkowski(), 10), InfeasibilityError);
    CHECK_THROWS_AS(rel_geodesic_solve(e1, e0, minkowski(), 10), InfeasibilityError);
}

TEST_CASE("uniform field reproduces the Newtonian projectile") {
    CHECK(projectile_deviation(1e-3) <= 1e-5);
    const double d2 = projectile_deviation(1e-2), d3 = projectile_deviation(1e-3), d4 = projectile_deviation(1e-4);
    MESSAGE("deviations " << d2 << " " << d3 << " " << d4);
    CHECK(d2 / d3 == doctest::Approx(100.0).epsilon(0.2));
    CHECK(d3 / d4 == doctest::Approx(100.0).epsilon(0.2));
}

TEST_CASE("circular orbit period matches Kepler") {
    // Natural units c = 1; quarter orbit of radius R, T tuned so the
    // midpoint event sits on the circle.
    const double gm = 1e-6, R = 1.0;
    const StaticMetric sm = weak_point_mass(gm, Eigen::Vector3d::Zero(), 1.0);
    const std::size_t M = 400;
    auto mid_radius = [&](double T) {
        const auto w = rel_geodesic_solve(Event(0, R, 0, 0), Event(T, 0, R, 0), sm, M);
        return w.events[M / 2].tail<3>().norm() - R;
    };
    const double kepler = 2.0 * M_PI * std::sqrt(R * R * R / gm);
    double t0 = 0.24 * kepler, t1 = 0.26 * kepler;
    double f0 = mid_radius(t0), f1 = mid_radius(t1);
    for (int it = 0; it < 30 && std::abs(f1) > 1e-13; ++it) {
        const double t2 = t1 - f1 * (t1 - t0) / (f1 - f0);
        t0 = t1;
        f0 = f1;
        t1 = t2;
        f1 = mid_radius(t1);
    }
    const double period = 4.0 * t1;
    MESSAGE("period relative error " << (period - kepler) / kepler);
    CHECK(std::abs(period - kepler) / kepler <= 1e-4);
}

TEST_CASE("four-velocity is normalized on solved worldlines") {
    const StaticMetric sm = weak_point_mass(3.986004418e14);
    const auto w = rel_geodesic_solve(Event(0, 7e6, 0, 0), Event(600, 5e6, 4.5e6, 0), sm, 200);
    double worst = 0.0;
    for (std::size_t k = 0; k < w.segments(); ++k) {
        const Eigen::Vector4d u = four_velocity(w, k, sm);
        worst = std::max(worst, std::abs(metric_dot(u, u, w.events[k], w.events[k + 1], sm) - 1.0));
    }
    CHECK(worst <= 1e-9);
    CHECK(rel_first_variation_norm(w, sm) <= 1e-10);
}

TEST_CASE("solved worldline minimizes the action with a < 0") {
    const StaticMetric sm = weak_uniform_field(1e-6, 1.0);
    const auto w = rel_geodesic_solve(Event(0, 0, 0, 0), Event(1000, 1, 0, 0.2), sm, 30);
    const double a = -1.0;
    const double S = rel_action(w, sm, a);
    std::mt19937_64 rng(7);
    std::normal_distribution<double> n(0.0, 1e-3);
    int decreases = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        Worldline p = w;
        for (std::size_t k = 1; k < p.segments(); ++k) p.events[k].tail<3>() += Eigen::Vector3d(n(rng), n(rng), n(rng));
        if (rel_action(p, sm, a) < S) ++decreases;
    }
    CHECK(decreases == 0);
}
