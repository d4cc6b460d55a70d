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

#include "simplicity/trajectory.hpp"

#include <cmath>
#include <string>

#include <fmt/core.h>

#include "simplicity/errors.hpp"

namespace simplicity {

void DiscreteTrajectory::validate() const {
    if (positions.size() < 3) {
        throw ValidationError(fmt::format(
            "trajectory needs at least 3 samples (J >= 2), got {}", positions.size()));
    }
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        throw ValidationError(fmt::format("time step must be positive and finite, got {}", dt));
    }
    if (!std::isfinite(t0)) throw ValidationError("t0 must be finite");
    if (masses.size() < 1) throw ValidationError("trajectory has no particles");
    for (Eigen::Index n = 0; n < masses.size(); ++n) {
        if (!(masses[n] > 0.0) || !std::isfinite(masses[n])) {
            throw ValidationError(fmt::format("mass of particle {} must be positive, got {}",
                                              n, masses[n]));
        }
    }
    const Eigen::Index d = positions.front().cols();
    if (d < 1) throw ValidationError("trajectory must have at least one spatial dimension");
    for (std::size_t k = 0; k < positions.size(); ++k) {
        const auto& r = positions[k];
        if (r.rows() != masses.size() || r.cols() != d) {
            throw ValidationError(fmt::format(
                "sample {} has shape {}x{}, expected {}x{}", k, r.rows(), r.cols(),
                masses.size(), d));
        }
        if (!r.allFinite()) throw ValidationError(fmt::format("sample {} is not finite", k));
    }
}

Configuration discrete_velocity(const DiscreteTrajectory& traj, std::size_t k) {
    if (k < 1 || k > traj.steps()) {
        throw IndexError(fmt::format("velocity index {} outside [1, {}]", k, traj.steps()));
    }
    return (traj.positions[k] - traj.positions[k - 1]) / traj.dt;
}

Configuration discrete_accel(const DiscreteTrajectory& traj, std::size_t k) {
    if (k < 2 || k > traj.steps()) {
        throw IndexError(fmt::format("acceleration index {} outside [2, {}]", k, traj.steps()));
    }
    const double dt2 = traj.dt * traj.dt;
    return (traj.positions[k] - 2.0 * traj.positions[k - 1] + traj.positions[k - 2]) / dt2;
}

Configuration sample_velocity(const DiscreteTrajectory& traj, std::size_t k) {
    return discrete_velocity(traj, k == 0 ? 1 : k);
}

}  // namespace simplicity
