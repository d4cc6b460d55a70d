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
#include "simplicity/geodesic.hpp"

using namespace simplicity;

namespace {

JacobiMetric metric(double E, PotentialSpec V, Eigen::VectorXd m, Eigen::Index dims) {
    JacobiMetric jm;
    jm.energy = E;
    jm.potential = std::move(V);
    jm.masses = std::move(m);
    jm.dims = dims;
    return jm;
}

Configuration row(std::initializer_list<double> xs) {
    Configuration r(1, static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (double x : xs) r(0, i++) = x;
    return r;
}

double polyline_distance(const Eigen::VectorXd& x, const std::vector<Eigen::VectorXd>& path) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        const Eigen::VectorXd d = path[i + 1] - path[i];
        const double s = std::clamp((x - path[i]).dot(d) / d.squaredNorm(), 0.0, 1.0);
        best = std::min(best, (x - path[i] - s * d).norm());
    }
    return best;
}

const Eigen::VectorXd kOne = Eigen::VectorXd::Ones(1);

}  // namespace

TEST_CASE("Jacobi metric at a point") {
    const auto free_jm = metric(1.5, free_potential(), kOne, 2);
    CHECK(jacobi_metric_at(Eigen::Vector2d(4, 5), free_jm).isApprox(3.0 * Eigen::Matrix2d::Identity()));
    const auto osc = metric(1.0, harmonic(1.0), kOne, 2);
    CHECK(jacobi_metric_at(Eigen::Vector2d(1, 0), osc).isApprox(Eigen::Matrix2d::Identity()));
    CHECK(kinetic_budget(Eigen::Vector2d(1, 0), osc) == doctest::Approx(0.5));
    try {
        jacobi_metric_at(Eigen::Vector2d(std::sqrt(2.0), 0), osc);
        FAIL("expected a turning-point error");
    } catch (const SingularityError& e) {
        CHECK(std::string(e.what()).find("turning") != std::string::npos);
    }
    // Anisotropic mass matrix comes through unchanged up to the factor 2(E - V).
    auto aniso = metric(2.0, free_potential(), kOne, 2);
    aniso.mass_matrix = (Eigen::Matrix2d() << 2.0, 0.5, 0.5, 1.0).finished();
    const Eigen::MatrixXd g = jacobi_metric_at(Eigen::Vector2d(0, 0), aniso);
    CHECK(g.isApprox(4.0 * aniso.mass_matrix));
    CHECK((g - g.transpose()).norm() == 0.0);
    aniso.mass_matrix(0, 1) = 3.0;
    CHECK_THROWS_AS(aniso.validate(), ValidationError);
}

TEST_CASE("path length") {
    const auto free_jm = metric(2.0, free_potential(), kOne, 2);
    ConfigPath seg{{Eigen::Vector2d(0, 0), Eigen::Vector2d(3, 4)}};
    CHECK(path_length(seg, free_jm) == doctest::Approx(2.0 * 5.0));  // sqrt(2E) |dq|
    ConfigPath point{{Eigen::Vector2d(1, 1)}};
    CHECK(path_length(point, free_jm) == 0.0);

    // Through the centre of an isotropic well the radial chord is a geodesic,
    // and any bent path between the same points is longer.
    const auto osc = metric(1.0, harmonic(1.0), kOne, 2);
    ConfigPath chord, arc;
    const std::size_t M = 64;
    for (std::size_t i = 0; i <= M; ++i) {
        const double s = -0.8 + 1.6 * static_cast<double>(i) / M;
        chord.samples.push_back(Eigen::Vector2d(s, 0.0));
        arc.samples.push_back(Eigen::Vector2d(s, 0.2 * (1.0 - s * s / 0.64)));
    }
    CHECK(path_length(arc, osc) > path_length(chord, osc));
    ConfigPath through{{Eigen::Vector2d(1.3, 0), Eigen::Vector2d(1.6, 0)}};
    CHECK_THROWS_AS(path_length(through, osc), SingularityError);
}

TEST_CASE("geodesics of the free particle are straight") {
    const auto free_jm = metric(0.7, free_potential(), Eigen::VectorXd::Constant(1, 2.0), 3);
    const Eigen::Vector3d a(0, 1, 2), b(3, -1, 0);
    const auto p = geodesic_solve(a, b, free_jm, 12);
    REQUIRE(p.segments() == 12);
    for (std::size_t i = 0; i <= 12; ++i) {
        CHECK((p.samples[i] - (a + (b - a) * (static_cast<double>(i) / 12))).norm() <= 1e-12);
    }
    const auto same = geodesic_solve(a, a, free_jm, 5);
    for (const auto& q : same.samples) CHECK(q == a);
}

TEST_CASE("geodesic failures") {
    const auto osc = metric(0.5, harmonic(1.0), kOne, 2);
    CHECK_THROWS_AS(geodesic_solve(Eigen::Vector2d(2, 0), Eigen::Vector2d(0, 0.5), osc, 10), InfeasibilityError);
    CHECK_THROWS_AS(geodesic_solve(Eigen::Vector2d(0, 0), Eigen::Vector2d(0, 1.2), osc, 10), InfeasibilityError);
    auto timed = osc;
    DiscreteTrajectory src;
    src.masses = kOne;
    src.positions = {Configuration::Zero(1, 2), Configuration::Zero(1, 2), Configuration::Zero(1, 2)};
    timed.potential = freeze_massive_subsystem(src, pair_spring(1.0));
    CHECK_THROWS_AS(timed.validate(), ValidationError);
}

TEST_CASE("time reparameterization") {
    const double E = 2.0, m = 4.0;
    const auto free_jm = metric(E, free_potential(), Eigen::VectorXd::Constant(1, m), 1);
    const auto p = geodesic_solve(Eigen::VectorXd::Constant(1, 0.0), Eigen::VectorXd::Constant(1, 5.0), free_jm, 10);
    const auto traj = time_reparameterize(p, free_jm);
    const double speed = std::sqrt(2 * E / m);
    for (std::size_t k = 1; k <= traj.steps(); ++k) CHECK(discrete_velocity(traj, k)(0, 0) == doctest::Approx(speed));

    // One segment: dt = sqrt(dq m dq / (2 (E - V(mid)))).
    const auto osc = metric(1.0, harmonic(1.0), kOne, 1);
    ConfigPath seg{{Eigen::VectorXd::Constant(1, 0.2), Eigen::VectorXd::Constant(1, 0.6)}};
    const double expected = std::sqrt(0.16 / (2.0 * (1.0 - 0.5 * 0.16)));
    CHECK(path_times(seg, osc).back() == doctest::Approx(expected).epsilon(1e-15));

    std::vector<double> t{0, 1, 3}, y{1, 2, 10};
    const auto at = cubic_spline(t, y, {2.0});  // parabola through three points
    CHECK(at[0] == doctest::Approx(5.0));
}

TEST_CASE("harmonic geodesic reproduces the Newtonian orbit") {
    const std::size_t J = 800;
    const double dt = 1e-3;
    const PotentialSpec V = harmonic(1.0);
    const Configuration r0 = row({1.0, 0.0}), v0 = row({0.0, 0.7});
    const auto ref = simulate_verlet(r0, verlet_start(r0, v0, V, kOne, dt), J, V, kOne, dt);
    const auto jm = metric(0.5 * 0.49 + 0.5, V, kOne, 2);
    const auto path = geodesic_solve(flatten(ref.positions.front()), flatten(ref.positions.back()), jm, 800);
    CHECK(first_variation_norm(path, jm) <= 1e-10);
    double set_dev = 0.0;
    for (const auto& r : ref.positions) set_dev = std::max(set_dev, polyline_distance(flatten(r), path.samples));
    CHECK(set_dev <= 1e-3);

    const auto traj = time_reparameterize(path, jm, J);
    double dev = 0.0, e_dev = 0.0;
    for (std::size_t k = 0; k <= J; ++k) dev = std::max(dev, (traj.positions[k] - ref.positions[k]).cwiseAbs().maxCoeff());
    for (std::size_t k = 1; k <= J; ++k) e_dev = std::max(e_dev, std::abs(energy(traj, V, k) - jm.energy) / jm.energy);
    CHECK(dev <= 1e-3);
    CHECK(e_dev <= 1e-6);
}

TEST_CASE("inverse-square pair geodesic reproduces the Newtonian orbit") {
    Eigen::VectorXd m(2);
    m << 1.0, 0.5;
    const PotentialSpec V = inverse_square(1.0);
    Configuration r0(2, 2), v0(2, 2);
    r0 << 0, 0, 1, 0;
    v0 << 0, -0.3, 0, 0.6;
    const double dt = 1e-3;
    const std::size_t J = 600;
    const auto ref = simulate_verlet(r0, verlet_start(r0, v0, V, m, dt), J, V, m, dt);
    const double E = 0.5 * (m[0] * v0.row(0).squaredNorm() + m[1] * v0.row(1).squaredNorm()) + potential_value(V, r0, m);
    const auto jm = metric(E, V, m, 2);
    const auto path = geodesic_solve(flatten(ref.positions.front()), flatten(ref.positions.back()), jm, 600);
    const auto traj = time_reparameterize(path, jm, J);
    double dev = 0.0;
    for (std::size_t k = 0; k <= J; ++k) dev = std::max(dev, (traj.positions[k] - ref.positions[k]).cwiseAbs().maxCoeff());
    CHECK(dev <= 1e-3);
}

TEST_CASE("solved Jacobi path is a local minimum of its length") {
    const auto jm = metric(0.745, harmonic(1.0), kOne, 2);
    const Eigen::Vector2d a(1, 0), b(std::cos(0.8), 0.7 * std::sin(0.8));
    const auto path = geodesic_solve(a, b, jm, 40);
    const double L = path_length(path, jm);
    std::mt19937_64 rng(1000);
    std::normal_distribution<double> n(0.0, 1e-3);
    int decreases = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        ConfigPath p = path;
        for (std::size_t i = 1; i < p.segments(); ++i) p.samples[i] += Eigen::Vector2d(n(rng), n(rng));
        if (path_length(p, jm) < L) ++decreases;
    }
    CHECK(decreases == 0);
}

TEST_CASE("flatten is particle major") {
    Configuration r(2, 3);
    r << 1, 2, 3, 4, 5, 6;
    const Eigen::VectorXd q = flatten(r);
    CHECK(q[3] == 4.0);
    CHECK(unflatten(q, 2, 3) == r);
}
