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

// Special-relativistic worldlines and the static weak-field metric
//     ds^2 = (1 + 2 phi(r)/c^2) c^2 dt^2 - |dr|^2.
// Segment quantities evaluate phi at the spatial midpoint.

#include <cstddef>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "simplicity/banded_newton.hpp"

namespace simplicity {

inline constexpr double kSpeedOfLight = 299792458.0;  // m/s

/// (t, x, y, z) in seconds and meters.
using Event = Eigen::Vector4d;

enum class MetricKind { minkowski, weak_field };
enum class FieldKind { uniform, point_mass };

struct StaticMetric {
    MetricKind kind = MetricKind::minkowski;
    FieldKind field = FieldKind::uniform;
    double g = 0.0;              // uniform: phi = g z, m/s^2
    double gm = 0.0;             // point_mass: phi = -gm / |r - center|, m^3/s^2
    Eigen::Vector3d center = Eigen::Vector3d::Zero();
    double c = kSpeedOfLight;

    double phi(const Eigen::Vector3d& r) const;
    Eigen::Vector3d grad_phi(const Eigen::Vector3d& r) const;
    /// 1 + 2 phi / c^2. Throws InfeasibilityError where it leaves (0, 2) and
    /// SingularityError at the point mass itself.
    double g00(const Eigen::Vector3d& r) const;
    void validate() const;
};

StaticMetric minkowski(double c = kSpeedOfLight);
StaticMetric weak_uniform_field(double g, double c = kSpeedOfLight);
StaticMetric weak_point_mass(double gm, Eigen::Vector3d center = Eigen::Vector3d::Zero(),
                             double c = kSpeedOfLight);

struct Worldline {
    std::vector<Event> events;
    double mass = 1.0;       // kg
    double c = kSpeedOfLight;

    std::size_t segments() const { return events.empty() ? 0 : events.size() - 1; }
};

/// (ds)^2 between two events, m^2. Positive for timelike separations.
double interval(const Event& a, const Event& b, const StaticMetric& sm);

/// +sqrt(interval). Throws ValidationError for null or spacelike pairs.
double proper_length(const Event& a, const Event& b, const StaticMetric& sm);

/// Throws ValidationError unless every step is timelike under sm and the
/// worldline's light speed matches the metric's.
void validate_worldline(const Worldline& w, const StaticMetric& sm);

/// Standard boost into the frame moving with velocity v (m/s).
Event lorentz_boost(const Event& e, const Eigen::Vector3d& v, double c = kSpeedOfLight);
Worldline lorentz_boost(const Worldline& w, const Eigen::Vector3d& v);

/// (c dt, dx, dy, dz) / ds on segment k.
Eigen::Vector4d four_velocity(const Worldline& w, std::size_t k, const StaticMetric& sm);
Eigen::Vector4d four_velocity(const Worldline& w, std::size_t k);

/// g00(mid) u0 w0 - u_spatial . w_spatial on segment k.
double metric_dot(const Eigen::Vector4d& u, const Eigen::Vector4d& w, const Event& a,
                  const Event& b, const StaticMetric& sm);

/// a * sum ds, plus a * c * E * tau when E is given (tau the coordinate
/// duration). a = -m c is the minimum convention.
double rel_action(const Worldline& w, const StaticMetric& sm, double a,
                  std::optional<double> E = std::nullopt);

/// d(sum ds)/dx_i at interior events, with event times held fixed.
std::vector<Eigen::Vector3d> proper_time_gradient(const Worldline& w, const StaticMetric& sm);
double rel_first_variation_norm(const Worldline& w, const StaticMetric& sm);

/// Stationarizes sum ds over the spatial positions of M - 1 interior events
/// at uniformly spaced coordinate times, from the straight worldline.
/// Throws InfeasibilityError when e1 is not in the timelike future of e0 and
/// ConvergenceError when Newton stalls.
Worldline rel_geodesic_solve(const Event& e0, const Event& e1, const StaticMetric& sm,
                             std::size_t M, double mass = 1.0,
                             const NewtonOptions& options = {});

}  // namespace simplicity
