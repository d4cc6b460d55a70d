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

#include "simplicity/trajectory_io.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include <fmt/core.h>
#include <fmt/ostream.h>

#include "simplicity/discrete_mech.hpp"
#include "simplicity/errors.hpp"

namespace simplicity {

namespace {

constexpr const char* kAxes[] = {"x", "y", "z"};

std::string axis_name(Eigen::Index d) {
    return d < 3 ? std::string(kAxes[d]) : fmt::format("x{}", d);
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

double parse_real(const std::string& s, std::size_t line) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::logic_error&) {
        throw DecodeError(fmt::format("line {}: '{}' is not a number", line, s));
    }
}

}  // namespace

std::string format_real(double x) { return fmt::format("{:.17g}", x); }

void write_trajectory_csv(std::ostream& out, const DiscreteTrajectory& traj, const PotentialSpec& V) {
    traj.validate();
    const Eigen::Index D = traj.dims();
    std::string header = "t,particle";
    for (Eigen::Index d = 0; d < D; ++d) header += "," + axis_name(d);
    for (Eigen::Index d = 0; d < D; ++d) header += ",v" + axis_name(d);
    header += ",E";
    fmt::print(out, "{}\n", header);
    for (std::size_t k = 0; k <= traj.steps(); ++k) {
        const Configuration v = sample_velocity(traj, k);
        const double E = energy(traj, V, k == 0 ? 1 : k);
        for (Eigen::Index n = 0; n < traj.particles(); ++n) {
            std::string row = format_real(traj.time(k)) + "," + std::to_string(n);
            for (Eigen::Index d = 0; d < D; ++d) row += "," + format_real(traj.positions[k](n, d));
            for (Eigen::Index d = 0; d < D; ++d) row += "," + format_real(v(n, d));
            row += "," + format_real(E);
            fmt::print(out, "{}\n", row);
        }
    }
}

DiscreteTrajectory read_trajectory_csv(std::istream& in, const Eigen::VectorXd& masses) {
    std::string line;
    if (!std::getline(in, line)) throw DecodeError("trajectory dump is empty");
    const auto header = split(line);
    if (header.size() < 5 || header[0] != "t" || header[1] != "particle" || header.back() != "E" ||
        (header.size() - 3) % 2 != 0) {
        throw DecodeError("trajectory header must be t,particle,<positions>,<velocities>,E");
    }
    const Eigen::Index D = static_cast<Eigen::Index>((header.size() - 3) / 2);
    const Eigen::Index N = masses.size();
    if (N < 1) throw ValidationError("reading a trajectory needs at least one mass");

    std::vector<double> times;
    DiscreteTrajectory traj;
    traj.masses = masses;
    std::size_t lineno = 1;
    Eigen::Index expected = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto cells = split(line);
        if (cells.size() != header.size()) {
            throw DecodeError(fmt::format("line {}: expected {} fields, got {}", lineno, header.size(),
                                          cells.size()));
        }
        const double t = parse_real(cells[0], lineno);
        const double particle = parse_real(cells[1], lineno);
        if (particle != static_cast<double>(expected)) {
            throw DecodeError(fmt::format("line {}: expected particle {}", lineno, expected));
        }
        if (expected == 0) {
            times.push_back(t);
            traj.positions.emplace_back(N, D);
        } else if (t != times.back()) {
            throw DecodeError(fmt::format("line {}: particles of one step disagree on t", lineno));
        }
        for (Eigen::Index d = 0; d < D; ++d) {
            traj.positions.back()(expected, d) = parse_real(cells[static_cast<std::size_t>(2 + d)], lineno);
        }
        expected = (expected + 1) % N;
    }
    if (expected != 0) throw DecodeError("trajectory dump ends in the middle of a step");
    if (times.size() < 3) throw DecodeError("trajectory dump needs at least three steps");
    traj.t0 = times.front();
    traj.dt = (times.back() - times.front()) / static_cast<double>(times.size() - 1);
    for (std::size_t k = 1; k < times.size(); ++k) {
        const double step = times[k] - times[k - 1];
        if (std::abs(step - traj.dt) > 1e-9 * std::max(1.0, std::abs(traj.dt))) {
            throw DecodeError(fmt::format("time grid is not uniform at step {}", k));
        }
    }
    traj.validate();
    return traj;
}

void write_energy_csv(std::ostream& out, const DiscreteTrajectory& traj, const PotentialSpec& V) {
    traj.validate();
    fmt::print(out, "k,t,E,relative_deviation\n");
    const double E1 = energy(traj, V, 1);
    for (std::size_t k = 1; k <= traj.steps(); ++k) {
        const double E = energy(traj, V, k);
        const double rel = E1 != 0.0 ? (E - E1) / std::abs(E1) : E - E1;
        fmt::print(out, "{},{},{},{}\n", k, format_real(traj.time(k)), format_real(E), format_real(rel));
    }
}

void write_worldline_csv(std::ostream& out, const Worldline& w, const StaticMetric& sm) {
    validate_worldline(w, sm);
    fmt::print(out, "t,x,y,z,u0,u1,u2,u3,ds\n");
    for (std::size_t k = 0; k < w.events.size(); ++k) {
        const std::size_t seg = std::min(k, w.segments() - 1);
        const Eigen::Vector4d u = four_velocity(w, seg, sm);
        const double ds = k == 0 ? 0.0 : proper_length(w.events[k - 1], w.events[k], sm);
        const Event& e = w.events[k];
        fmt::print(out, "{},{},{},{},{},{},{},{},{}\n", format_real(e[0]), format_real(e[1]),
                   format_real(e[2]), format_real(e[3]), format_real(u[0]), format_real(u[1]),
                   format_real(u[2]), format_real(u[3]), format_real(ds));
    }
}

void write_path_csv(std::ostream& out, const ConfigPath& p, const JacobiMetric& jm) {
    const std::vector<double> t = path_times(p, jm);
    std::string header = "i,t";
    for (Eigen::Index c = 0; c < jm.coordinate_count(); ++c) header += fmt::format(",q{}", c);
    header += ",kinetic_budget";
    fmt::print(out, "{}\n", header);
    for (std::size_t i = 0; i < p.samples.size(); ++i) {
        std::string row = std::to_string(i) + "," + format_real(t[i]);
        for (Eigen::Index c = 0; c < p.samples[i].size(); ++c) row += "," + format_real(p.samples[i][c]);
        row += "," + format_real(kinetic_budget(p.samples[i], jm));
        fmt::print(out, "{}\n", row);
    }
}

}  // namespace simplicity
