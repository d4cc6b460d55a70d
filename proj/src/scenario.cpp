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


#include "simplicity/scenario.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

#include <json.hpp>
#include <fmt/format.h>

#include "simplicity/calibration.hpp"
#include "simplicity/errors.hpp"
#include "simplicity/trajectory_io.hpp"

namespace simplicity {

using nlohmann::json;

std::string_view to_string(RunKind kind) {
    switch (kind) {
        case RunKind::simulate: return "simulate";
        case RunKind::extremize: return "extremize";
        case RunKind::geodesic: return "geodesic";
        case RunKind::rel_geodesic: return "rel_geodesic";
        case RunKind::complexity: return "complexity";
        case RunKind::convergence: return "convergence";
        case RunKind::verify: return "verify";
    }
    return "?";
}

RunKind run_kind_from_string(std::string_view name) {
    if (name == "rel-geodesic") return RunKind::rel_geodesic;
    for (auto kind : {RunKind::simulate, RunKind::extremize, RunKind::geodesic, RunKind::rel_geodesic,
                      RunKind::complexity, RunKind::convergence, RunKind::verify}) {
        if (to_string(kind) == name) return kind;
    }
    throw ValidationError(fmt::format("unknown run kind '{}'", name));
}

bool RunReport::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

void RunReport::add_check(std::string name, bool ok, double measured, double tolerance, std::string detail) {
    for (const auto& c : checks) {
        if (c.name == name) throw std::logic_error("duplicate check " + name);
    }
    checks.push_back({std::move(name), ok, measured, tolerance, std::move(detail)});
}

json RunReport::to_json() const {
    json j;
    j["scenario"] = scenario;
    j["kind"] = std::string(to_string(kind));
    j["config"] = echo;
    j["results"] = results.is_null() ? json::object() : results;
    json cs = json::array();
    for (const auto& c : checks) {
        json e{{"name", c.name}, {"passed", c.passed}, {"measured", c.measured}, {"tolerance", c.tolerance}};
        if (!c.detail.empty()) e["detail"] = c.detail;
        cs.push_back(e);
    }
    j["checks"] = cs;
    json files = json::array();
    for (const auto& [name, body] : artifacts) files.push_back(name);
    files.push_back("report.json");
    j["artifacts"] = files;
    j["passed"] = passed();
    return j;
}

namespace {

template <class Writer>
std::string render(Writer&& w) {
    std::ostringstream out;
    w(out);
    return out.str();
}

double max_abs(const Configuration& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

// Least-squares slope of y against x.
double trend_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    return sxx > 0.0 ? sxy / sxx : 0.0;
}

double initial_energy(const PotentialSpec& V, const Eigen::VectorXd& masses, const InitialState& s) {
    double ke = 0.0;
    for (Eigen::Index n = 0; n < masses.size(); ++n) ke += 0.5 * masses[n] * s.velocities.row(n).squaredNorm();
    return ke + potential_value(V, s.positions, masses, 0);
}

DiscreteTrajectory run_verlet(const PotentialSpec& V, const Eigen::VectorXd& masses, const InitialState& s,
                              std::size_t steps, double dt) {
    const Configuration r1 = verlet_start(s.positions, s.velocities, V, masses, dt);
    return simulate_verlet(s.positions, r1, steps, V, masses, dt);
}

// Uniform in [-1, 1) from raw engine bits, identical on every platform.
double symmetric_unit(std::mt19937_64& rng) {
    return 2.0 * static_cast<double>(rng() >> 11) * 0x1.0p-53 - 1.0;
}

void energy_checks(RunReport& report, const ScenarioConfig& c, const DiscreteTrajectory& traj,
                   const PotentialSpec& V) {
    const std::size_t J = traj.steps();
    const double e1 = energy(traj, V, 1);
    const double scale = std::abs(e1) > 0.0 ? std::abs(e1) : 1.0;
    std::vector<double> t, e;
    double worst = 0.0;
    for (std::size_t k = 1; k <= J; ++k) {
        const double ek = energy(traj, V, k);
        t.push_back(traj.time(k));
        e.push_back(ek);
        worst = std::max(worst, std::abs(ek - e1) / scale);
    }
    const double slope = trend_slope(t, e);
    const double tau = static_cast<double>(J) * traj.dt;
    report.results["energy_initial_J"] = e1;
    report.results["energy_max_relative_deviation"] = worst;
    report.results["energy_trend_slope_W"] = slope;
    const double tol = c.tolerance("energy_relative", 1e-3);
    report.add_check("energy_conservation", worst <= tol, worst, tol, "max |E_k - E_1| / |E_1|");
    const double trend = std::abs(slope) * tau / scale;
    const double ttol = c.tolerance("energy_trend_relative", 1e-4);
    report.add_check("energy_trend", trend <= ttol, trend, ttol, "|slope| * tau / |E_1|");
}

void residual_check(RunReport& report, const ScenarioConfig& c, const DiscreteTrajectory& traj,
                    const PotentialSpec& V) {
    const double rel = relative_residual(traj, el_residual(traj, V));
    report.results["el_residual_relative"] = rel;
    const double tol = c.tolerance("el_residual_relative", 1e-12);
    report.add_check("discrete_newton_residual", rel <= tol, rel, tol, "max residual / (m |r| / dt^2)");
}

void action_results(RunReport& report, const DiscreteTrajectory& traj, const PotentialSpec& V,
                    std::optional<double> E = std::nullopt) {
    const auto a = discrete_action(traj, V, E);
    report.results["action_J_s"] = a.action;
    report.results["action_energy_offset_J"] = a.energy_offset;
    report.results["action_mean_rate_J"] = a.mean_rate();
    report.results["duration_s"] = a.tau;
}

RunReport run_simulate(const ScenarioConfig& c) {
    RunReport report;
    PotentialSpec V = c.potential;
    const InitialState& init = *c.initial;
    if (c.frozen) {
        const auto& fs = *c.frozen;
        const DiscreteTrajectory massive = run_verlet(fs.internal, fs.masses, fs.initial, c.steps, c.dt);
        V = freeze_massive_subsystem(massive, fs.coupling);
        report.artifacts["source_trajectory.csv"] =
            render([&](std::ostream& o) { write_trajectory_csv(o, massive, fs.internal); });
        report.results["information_interpretation"] = V.table ? V.table->information_interpretation : false;
    }
    const DiscreteTrajectory traj = run_verlet(V, c.masses, init, c.steps, c.dt);
    report.results["steps"] = traj.steps();
    report.results["dt_s"] = traj.dt;
    residual_check(report, c, traj, V);
    action_results(report, traj, V);
    if (!V.is_time_dependent()) energy_checks(report, c, traj, V);

    bool has_oracle = false;
    double worst = 0.0;
    for (std::size_t k = 0; k <= traj.steps(); ++k) {
        const auto exact = analytic_position(V, c.masses, init.positions, init.velocities, traj.time(k));
        if (!exact) break;
        has_oracle = true;
        worst = std::max(worst, max_abs(traj.positions[k] - *exact));
    }
    if (has_oracle) {
        report.results["analytic_max_error_m"] = worst;
        auto it = c.tolerances.find("analytic_error_m");
        if (it != c.tolerances.end()) {
            report.add_check("analytic_oracle", worst <= it->second, worst, it->second, "max |r_k - r(t_k)|");
        }
    }

    std::vector<Eigen::VectorXd> boosts = c.boosts;
    std::mt19937_64 rng(c.seed);
    for (std::size_t i = 0; i < c.random_boosts; ++i) {
        Eigen::VectorXd b(c.dims);
        for (Eigen::Index d = 0; d < c.dims; ++d) b[d] = symmetric_unit(rng);
        boosts.push_back(b);
    }
    if (!boosts.empty()) {
        double g = 0.0;
        for (const auto& b : boosts) g = std::max(g, galilean_check(traj, V, b).normalized);
        const double tol = c.tolerance("galilean_relative", 1e-12);
        report.results["galilean_boosts"] = boosts.size();
        report.add_check("galilean_invariance", g <= tol, g, tol, "max residual change / force scale");
    }

    report.artifacts["trajectory.csv"] = render([&](std::ostream& o) { write_trajectory_csv(o, traj, V); });
    if (!V.is_time_dependent()) {
        report.artifacts["energy.csv"] = render([&](std::ostream& o) { write_energy_csv(o, traj, V); });
    }
    if (c.grid) {
        const auto states = encode_trajectory(traj, *c.grid);
        report.artifacts["states.txt"] = render([&](std::ostream& o) { write_coarse_states(o, states); });
    }
    return report;
}

RunReport run_extremize(const ScenarioConfig& c) {
    RunReport report;
    std::optional<DiscreteTrajectory> ref;
    Configuration start, end;
    if (c.initial) {
        ref = run_verlet(c.potential, c.masses, *c.initial, c.steps, c.dt);
        start = ref->positions.front();
        end = ref->positions.back();
    } else {
        start = *c.start;
        end = *c.end;
    }
    NewtonOptions opts;
    opts.tolerance = c.tolerance("el_residual", 1e-10);
    const auto res = extremize_action(start, end, c.steps, c.potential, c.masses, c.dt, c.energy, 0.0, opts);
    report.results["iterations"] = res.iterations;
    report.results["is_minimum"] = res.is_minimum;
    report.results["stationarity"] = res.is_minimum ? "minimum" : "stationary, not minimal";
    report.results["action_J_s"] = res.action.action;
    report.results["action_energy_offset_J"] = res.action.energy_offset;
    double worst = 0.0;
    for (const auto& r : el_residual(res.trajectory, c.potential)) worst = std::max(worst, max_abs(r));
    report.results["el_residual_max_N"] = worst;
    report.add_check("el_residual", worst <= opts.tolerance, worst, opts.tolerance, "max |residual| at the solution");
    if (ref) {
        double dev = 0.0;
        for (std::size_t k = 1; k < c.steps; ++k) dev = std::max(dev, max_abs(res.trajectory.positions[k] - ref->positions[k]));
        const double tol = c.tolerance("verlet_match_m", 1e-8);
        report.results["verlet_max_deviation_m"] = dev;
        report.add_check("verlet_equivalence", dev <= tol, dev, tol, "max interior |r_k - r_k^verlet|");
        report.artifacts["verlet_trajectory.csv"] =
            render([&](std::ostream& o) { write_trajectory_csv(o, *ref, c.potential); });
    }
    report.artifacts["trajectory.csv"] =
        render([&](std::ostream& o) { write_trajectory_csv(o, res.trajectory, c.potential); });
    return report;
}

// Distance from x to the polyline through `path`.
double distance_to_polyline(const Eigen::VectorXd& x, const std::vector<Eigen::VectorXd>& path) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        const Eigen::VectorXd d = path[i + 1] - path[i];
        const double len2 = d.squaredNorm();
        const double s = len2 > 0.0 ? std::clamp((x - path[i]).dot(d) / len2, 0.0, 1.0) : 0.0;
        best = std::min(best, (x - path[i] - s * d).norm());
    }
    if (path.size() == 1) best = (x - path[0]).norm();
    return best;
}

RunReport run_geodesic(const ScenarioConfig& c) {
    RunReport report;
    JacobiMetric jm;
    jm.potential = c.potential;
    jm.masses = c.masses;
    jm.dims = c.dims;
    jm.mass_matrix = c.mass_matrix;
    std::optional<DiscreteTrajectory> ref;
    Eigen::VectorXd q0, q1;
    if (c.initial) {
        ref = run_verlet(c.potential, c.masses, *c.initial, c.steps, c.dt);
        jm.energy = initial_energy(c.potential, c.masses, *c.initial);
        q0 = flatten(ref->positions.front());
        q1 = flatten(ref->positions.back());
    } else {
        jm.energy = *c.energy;
        q0 = flatten(*c.start);
        q1 = flatten(*c.end);
    }
    jm.validate();
    NewtonOptions opts;
    opts.tolerance = c.tolerance("first_variation", 1e-10);
    const ConfigPath path = geodesic_solve(q0, q1, jm, c.segments, opts);
    const double fv = first_variation_norm(path, jm);
    report.results["energy_J"] = jm.energy;
    report.results["segments"] = path.segments();
    report.results["jacobi_length"] = path_length(path, jm);
    report.results["metric_trace_start"] = jacobi_metric_at(q0, jm).trace();
    report.results["first_variation_norm"] = fv;
    report.add_check("first_variation", fv <= opts.tolerance, fv, opts.tolerance, "normal part of dL/dq");
    report.artifacts["path.csv"] = render([&](std::ostream& o) { write_path_csv(o, path, jm); });

    if (path.segments() >= 1 && (q1 - q0).norm() > 0.0) {
        const std::size_t steps = c.resample_steps.value_or(ref ? ref->steps() : path.segments());
        const DiscreteTrajectory traj = time_reparameterize(path, jm, steps);
        const auto times = path_times(path, jm);
        report.results["travel_time_s"] = times.back();
        double worst = 0.0;
        for (std::size_t k = 1; k <= traj.steps(); ++k) {
            worst = std::max(worst, std::abs(energy(traj, c.potential, k) - jm.energy) / std::abs(jm.energy));
        }
        const double etol = c.tolerance("energy_relative", 1e-6);
        report.results["reparameterized_energy_deviation"] = worst;
        report.add_check("reparameterized_energy", worst <= etol, worst, etol, "max |E_k - E| / |E|");
        report.artifacts["trajectory.csv"] =
            render([&](std::ostream& o) { write_trajectory_csv(o, traj, c.potential); });
        if (ref) {
            double set_dev = 0.0;
            for (const auto& r : ref->positions) set_dev = std::max(set_dev, distance_to_polyline(flatten(r), path.samples));
            const double tol = c.tolerance("newtonian_match_m", 1e-3);
            report.results["newtonian_point_set_deviation_m"] = set_dev;
            report.add_check("newtonian_path", set_dev <= tol, set_dev, tol, "Verlet samples to the geodesic");
            if (traj.steps() == ref->steps()) {
                double dev = 0.0;
                for (std::size_t k = 0; k <= traj.steps(); ++k) dev = std::max(dev, max_abs(traj.positions[k] - ref->positions[k]));
                report.results["newtonian_pointwise_deviation_m"] = dev;
                report.results["verlet_duration_s"] = ref->dt * static_cast<double>(ref->steps());
                report.add_check("newtonian_trajectory", dev <= tol, dev, tol, "reparameterized vs Verlet, same index");
            }
        }
    }
    return report;
}

RunReport run_rel_geodesic(const ScenarioConfig& c) {
    RunReport report;
    const double mass = c.masses[0];
    NewtonOptions opts;
    if (auto it = c.tolerances.find("acceleration_residual"); it != c.tolerances.end()) opts.tolerance = it->second;
    const Worldline w = rel_geodesic_solve(c.start_event, c.end_event, c.metric, c.segments, mass, opts);
    double sum_ds = 0.0, worst_norm = 0.0;
    for (std::size_t k = 0; k < w.segments(); ++k) {
        sum_ds += proper_length(w.events[k], w.events[k + 1], c.metric);
        const Eigen::Vector4d u = four_velocity(w, k, c.metric);
        worst_norm = std::max(worst_norm, std::abs(metric_dot(u, u, w.events[k], w.events[k + 1], c.metric) - 1.0));
    }
    report.results["segments"] = w.segments();
    report.results["proper_time_s"] = sum_ds / c.metric.c;
    report.results["coordinate_time_s"] = c.end_event[0] - c.start_event[0];
    report.results["action_J_s"] = rel_action(w, c.metric, c.action_scale);
    report.results["first_variation_norm"] = rel_first_variation_norm(w, c.metric);
    const double ntol = c.tolerance("four_velocity", 1e-9);
    report.add_check("four_velocity_norm", worst_norm <= ntol, worst_norm, ntol, "max |u.u - 1|");

    const Eigen::Vector3d x0 = c.start_event.tail<3>(), x1 = c.end_event.tail<3>();
    const double extent = std::max(1.0, (x1 - x0).cwiseAbs().maxCoeff());
    if (c.metric.kind == MetricKind::minkowski) {
        double dev = 0.0;
        for (std::size_t k = 0; k <= w.segments(); ++k) {
            const double s = (w.events[k][0] - c.start_event[0]) / (c.end_event[0] - c.start_event[0]);
            dev = std::max(dev, (w.events[k].tail<3>() - (x0 + s * (x1 - x0))).cwiseAbs().maxCoeff());
        }
        const double tol = c.tolerance("straight_relative", 1e-10);
        report.add_check("straight_worldline", dev / extent <= tol, dev / extent, tol, "interior deviation / extent");
    } else if (c.metric.field == FieldKind::uniform && c.dims == 3) {
        // Newtonian projectile with the same endpoints and event times.
        Configuration start(1, 3), end(1, 3);
        start.row(0) = x0.transpose();
        end.row(0) = x1.transpose();
        const double dt = (c.end_event[0] - c.start_event[0]) / static_cast<double>(w.segments());
        const auto newton = extremize_action(start, end, w.segments(), uniform_field(Eigen::Vector3d(0, 0, -c.metric.g)),
                                             Eigen::VectorXd::Constant(1, mass), dt, 0.0);
        double dev = 0.0, span = 0.0;
        for (std::size_t k = 0; k <= w.segments(); ++k) {
            const Eigen::Vector3d xn = newton.trajectory.positions[k].row(0).transpose();
            dev = std::max(dev, (w.events[k].tail<3>() - xn).cwiseAbs().maxCoeff());
            span = std::max(span, (xn - x0).cwiseAbs().maxCoeff());
        }
        const double rel = dev / std::max(span, std::numeric_limits<double>::min());
        const double tol = c.tolerance("newtonian_relative", 1e-5);
        report.results["newtonian_relative_deviation"] = rel;
        report.add_check("newtonian_limit", rel <= tol, rel, tol, "max |x - x_newton| / displacement");
    }
    report.artifacts["worldline.csv"] = render([&](std::ostream& o) { write_worldline_csv(o, w, c.metric); });
    return report;
}

RunReport run_complexity(const ScenarioConfig& c) {
    RunReport report;
    DiscreteTrajectory traj;
    if (c.trajectory_csv) {
        std::ifstream in(*c.trajectory_csv);
        traj = read_trajectory_csv(in, c.masses);
    } else {
        traj = run_verlet(c.potential, c.masses, *c.initial, c.steps, c.dt);
    }
    GridSpec grid = *c.grid;
    grid.dt = traj.dt;
    const auto states = encode_trajectory(traj, grid);
    const auto law = law_complexity(states, c.parameterization, c.model);
    std::int64_t total = 0;
    for (auto b : law.per_step) total += b;
    const double denom = c.parameterization == LawParameterization::time
                             ? static_cast<double>(law.per_step.size()) * traj.dt
                             : static_cast<double>(law.per_step.size());
    report.results["state_bits"] = states.front().bits.size();
    report.results["law_total_bits"] = total;
    report.results["law_mean_rate"] = law.mean_rate;
    report.results["parameterization"] = c.parameterization == LawParameterization::time ? "time" : "abstract_index";
    const double gap = std::abs(law.mean_rate - static_cast<double>(total) / denom);
    report.add_check("law_mean_of_steps", gap <= 1e-12 * std::max(1.0, law.mean_rate), gap,
                     1e-12 * std::max(1.0, law.mean_rate), "mean rate against the per-step sum");
    report.artifacts["states.txt"] = render([&](std::ostream& o) { write_coarse_states(o, states); });
    report.artifacts["law.csv"] = render([&](std::ostream& o) {
        o << "k,bits\n";
        for (std::size_t k = 0; k < law.per_step.size(); ++k) o << k << ',' << law.per_step[k] << '\n';
    });

    // Kraft sum of the transition code out of the initial state.
    const std::size_t width = grid.coordinate_count() * static_cast<std::size_t>(grid.bits);
    if (width <= 12) {
        std::vector<std::int64_t> lengths;
        for (const auto& w : all_codewords(grid)) lengths.push_back(khat(w, states.front().bits, c.model));
        const auto ks = kraft_sum(lengths);
        report.results["kraft_sum"] = ks.sum;
        report.add_check("kraft", ks.satisfied, ks.sum, 1.0, "transition code out of state 0");
    } else {
        report.results["kraft_sum"] = nullptr;
    }

    const bool per_particle = static_cast<Eigen::Index>(grid.position.size()) == traj.dims() &&
                              (grid.velocity.empty() || static_cast<Eigen::Index>(grid.velocity.size()) == traj.dims());
    if (traj.particles() >= 2 && per_particle) {
        const auto subs = encode_particle_trajectories(traj, grid);
        std::vector<BitString> parts;
        for (const auto& s : subs) parts.push_back(s.front().bits);
        const auto dec = chain_decompose(parts, {}, c.model);
        report.results["decomposition"] = {{"k_joint", dec.k_joint}, {"k_singles", dec.k_singles},
                                           {"i_terms", dec.i_terms}, {"residual", dec.residual}};
        report.add_check("decomposition_identity", dec.identity_holds(), static_cast<double>(dec.residual), 0.0,
                         "K_joint = sum K - sum I + residual");
        if (c.accel_grid) {
            std::int64_t sum = 0;
            std::vector<std::int64_t> series;
            for (std::size_t t = 1; t + 1 < subs.front().size(); ++t) {
                series.push_back(interaction_term(subs, t, *c.accel_grid, c.model));
                sum += series.back();
            }
            report.results["interaction_sum_bits"] = sum;
            report.artifacts["interaction.csv"] = render([&](std::ostream& o) {
                o << "t,V_N\n";
                for (std::size_t i = 0; i < series.size(); ++i) o << i + 1 << ',' << series[i] << '\n';
            });
        }
    }
    return report;
}

RunReport run_convergence(const ScenarioConfig& c) {
    RunReport report;
    const auto table = convergence_sweep(c.potential, c.masses, *c.initial, c.duration, c.dt_sweep);
    report.results["exact"] = table.exact;
    if (table.observed_order) {
        report.results["observed_order"] = *table.observed_order;
    } else {
        report.results["observed_order"] = nullptr;
    }
    if (table.exact) {
        report.add_check("convergence_order", true, 0.0, 0.0, "exact at every step size");
    } else {
        const double p = table.observed_order.value_or(0.0);
        report.add_check("convergence_order", p >= c.order_lo && p <= c.order_hi, p, c.order_hi,
                         fmt::format("expected in [{}, {}]", c.order_lo, c.order_hi));
    }
    report.artifacts["convergence.csv"] = convergence_csv(table);
    return report;
}

}  // namespace

ConvergenceTable convergence_sweep(const PotentialSpec& V, const Eigen::VectorXd& masses,
                                   const InitialState& initial, double duration,
                                   const std::vector<double>& dt_list) {
    if (dt_list.size() < 3) throw ValidationError("convergence sweep needs at least three step sizes");
    if (!analytic_position(V, masses, initial.positions, initial.velocities, 0.0)) {
        throw CapabilityError(fmt::format("no closed-form oracle for {}", to_string(V.kind)));
    }
    ConvergenceTable table;
    double scale = 1.0;
    for (double dt : dt_list) {
        if (!(dt > 0.0)) throw ValidationError("step sizes must be positive");
        const double n = std::round(duration / dt);
        if (n < 2 || std::abs(n * dt - duration) > 1e-9 * duration) {
            throw ValidationError(fmt::format("dt = {} does not divide the duration {}", dt, duration));
        }
        const auto traj = run_verlet(V, masses, initial, static_cast<std::size_t>(n), dt);
        double err = 0.0;
        for (std::size_t k = 0; k <= traj.steps(); ++k) {
            const auto exact = analytic_position(V, masses, initial.positions, initial.velocities, traj.time(k));
            err = std::max(err, max_abs(traj.positions[k] - *exact));
            scale = std::max(scale, max_abs(*exact));
        }
        table.rows.push_back({dt, err, std::nullopt});
    }
    const double floor = 1e3 * std::numeric_limits<double>::epsilon() * scale;
    table.exact = std::all_of(table.rows.begin(), table.rows.end(),
                              [&](const ConvergenceRow& r) { return r.max_error <= floor; });
    if (!table.exact) {
        double sum = 0.0;
        int n = 0;
        for (std::size_t i = 1; i < table.rows.size(); ++i) {
            const auto& a = table.rows[i - 1];
            auto& b = table.rows[i];
            if (a.max_error <= floor || b.max_error <= floor) continue;
            b.order = std::log2(a.max_error / b.max_error) / std::log2(a.dt / b.dt);
            sum += *b.order;
            ++n;
        }
        if (n > 0) table.observed_order = sum / n;
    }
    return table;
}

std::string convergence_csv(const ConvergenceTable& table) {
    std::ostringstream o;
    o << "dt,max_error,order\n";
    for (const auto& r : table.rows) {
        o << format_real(r.dt) << ',' << format_real(r.max_error) << ',';
        if (table.exact) {
            o << "exact";
        } else if (r.order) {
            o << format_real(*r.order);
        }
        o << '\n';
    }
    return o.str();
}

RunReport run_scenario(const ScenarioConfig& config) {
    const auto start = std::chrono::steady_clock::now();
    RunReport report;
    switch (config.kind) {
        case RunKind::simulate: report = run_simulate(config); break;
        case RunKind::extremize: report = run_extremize(config); break;
        case RunKind::geodesic: report = run_geodesic(config); break;
        case RunKind::rel_geodesic: report = run_rel_geodesic(config); break;
        case RunKind::complexity: report = run_complexity(config); break;
        case RunKind::convergence: report = run_convergence(config); break;
        case RunKind::verify: report = run_verify(config.seed, config.mutation, config.calibration_path); break;
    }
    report.scenario = config.name;
    report.kind = config.kind;
    report.echo = config.raw;
    report.echo["seed"] = config.seed;
    report.wall_clock_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

std::vector<std::string> commit_artifacts(const RunReport& report, const std::string& dir) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    std::map<std::string, std::string> files = report.artifacts;
    files["report.json"] = report.to_json().dump(2) + "\n";
    std::vector<std::string> written;
    for (const auto& [name, body] : files) {
        const fs::path target = fs::path(dir) / name;
        const fs::path tmp = fs::path(dir) / ("." + name + ".tmp");
        {
            std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
            out << body;
            out.flush();
            if (!out) throw Error(fmt::format("cannot write {}", tmp.string()));
        }
        fs::rename(tmp, target);
        written.push_back(target.string());
    }
    return written;
}

int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const ConvergenceError*>(&e)) return kExitConvergence;
    if (dynamic_cast<const DomainError*>(&e)) return kExitDomain;
    if (dynamic_cast<const ValidationError*>(&e)) return kExitValidation;
    if (dynamic_cast<const nlohmann::json::exception*>(&e)) return kExitValidation;
    return kExitCheckFailed;
}

}  // namespace simplicity
