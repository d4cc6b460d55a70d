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


// JSON -> ScenarioConfig. Every accessor carries the dotted field path so
// that a rejected config names the offending entry.

#include <filesystem>
#include <fstream>
#include <set>

#include <fmt/format.h>

#include "simplicity/errors.hpp"
#include "simplicity/scenario.hpp"

namespace simplicity {

using nlohmann::json;

namespace {

[[noreturn]] void reject(const std::string& path, const std::string& what) {
    throw ValidationError(fmt::format("{}: {}", path, what));
}

std::string child(const std::string& path, const std::string& key) {
    return path.empty() ? key : path + "." + key;
}

void allow_keys(const json& obj, const std::string& path, std::initializer_list<const char*> keys) {
    if (!obj.is_object()) reject(path, "expected an object");
    std::set<std::string> allowed(keys.begin(), keys.end());
    for (const auto& [key, value] : obj.items()) {
        if (!allowed.count(key)) reject(child(path, key), "unknown field");
    }
}

const json* find(const json& obj, const char* key) {
    auto it = obj.find(key);
    return it == obj.end() ? nullptr : &*it;
}

const json& require(const json& obj, const std::string& path, const char* key) {
    const json* v = find(obj, key);
    if (!v) reject(child(path, key), "required field missing");
    return *v;
}

double number(const json& v, const std::string& path) {
    if (!v.is_number()) reject(path, "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) reject(path, "must be finite");
    return x;
}

double positive(const json& v, const std::string& path) {
    const double x = number(v, path);
    if (!(x > 0.0)) reject(path, "must be positive");
    return x;
}

double nonnegative(const json& v, const std::string& path) {
    const double x = number(v, path);
    if (x < 0.0) reject(path, "must be non-negative");
    return x;
}

std::size_t count(const json& v, const std::string& path, std::size_t min = 0) {
    if (!v.is_number_integer() || v.get<std::int64_t>() < 0) reject(path, "expected a non-negative integer");
    const auto n = v.get<std::size_t>();
    if (n < min) reject(path, fmt::format("must be at least {}", min));
    return n;
}

Eigen::VectorXd vector(const json& v, const std::string& path, Eigen::Index size = -1) {
    if (!v.is_array()) reject(path, "expected an array of numbers");
    if (size >= 0 && static_cast<Eigen::Index>(v.size()) != size) {
        reject(path, fmt::format("expected {} entries, got {}", size, v.size()));
    }
    Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) out[static_cast<Eigen::Index>(i)] = number(v[i], fmt::format("{}[{}]", path, i));
    return out;
}

// N rows of D numbers. A flat array is accepted when N == 1 or D == 1.
Configuration configuration(const json& v, const std::string& path, Eigen::Index n, Eigen::Index d) {
    if (!v.is_array()) reject(path, "expected an array");
    Configuration out(n, d);
    if (!v.empty() && !v[0].is_array()) {
        if (static_cast<Eigen::Index>(v.size()) != n * d || (n != 1 && d != 1)) {
            reject(path, fmt::format("expected {} rows of {} coordinates", n, d));
        }
        const Eigen::VectorXd flat = vector(v, path);
        for (Eigen::Index i = 0; i < n * d; ++i) out(i / d, i % d) = flat[i];
        return out;
    }
    if (static_cast<Eigen::Index>(v.size()) != n) reject(path, fmt::format("expected {} rows", n));
    for (Eigen::Index i = 0; i < n; ++i) {
        out.row(i) = vector(v[static_cast<std::size_t>(i)], fmt::format("{}[{}]", path, i), d).transpose();
    }
    return out;
}

Range range(const json& v, const std::string& path) {
    const Eigen::VectorXd lohi = vector(v, path, 2);
    if (!(lohi[0] < lohi[1])) reject(path, "lower bound must be below upper bound");
    return {lohi[0], lohi[1]};
}

std::vector<Range> ranges(const json& v, const std::string& path) {
    if (!v.is_array()) reject(path, "expected an array of [lo, hi] pairs");
    std::vector<Range> out;
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(range(v[i], fmt::format("{}[{}]", path, i)));
    return out;
}

int bits(const json& v, const std::string& path) {
    const auto b = count(v, path, 1);
    if (b > 53) reject(path, "at most 53 bits per coordinate");
    return static_cast<int>(b);
}

PotentialSpec parse_potential(const json& v, const std::string& path, Eigen::Index dims) {
    allow_keys(v, path, {"kind", "field_m_per_s2", "stiffness_N_per_m", "center_m", "rest_length_m",
                         "strength_m3_per_kg_s2"});
    const json& kind = require(v, path, "kind");
    if (!kind.is_string()) reject(child(path, "kind"), "expected a string");
    PotentialSpec V;
    try {
        V.kind = potential_kind_from_string(kind.get<std::string>());
    } catch (const ValidationError& e) {
        reject(child(path, "kind"), e.what());
    }
    if (V.kind == PotentialKind::tabulated) {
        reject(child(path, "kind"), "tabulated potentials come from simulate.frozen_source");
    }
    auto need = [&](const char* key) -> const json& { return require(v, path, key); };
    switch (V.kind) {
        case PotentialKind::uniform_field:
            V.field = vector(need("field_m_per_s2"), child(path, "field_m_per_s2"), dims);
            break;
        case PotentialKind::harmonic:
            V.stiffness = nonnegative(need("stiffness_N_per_m"), child(path, "stiffness_N_per_m"));
            if (const json* c = find(v, "center_m")) V.center = vector(*c, child(path, "center_m"), dims);
            break;
        case PotentialKind::pair_spring:
            V.stiffness = nonnegative(need("stiffness_N_per_m"), child(path, "stiffness_N_per_m"));
            if (const json* l = find(v, "rest_length_m")) V.rest_length = number(*l, child(path, "rest_length_m"));
            break;
        case PotentialKind::inverse_square:
            V.strength = nonnegative(need("strength_m3_per_kg_s2"), child(path, "strength_m3_per_kg_s2"));
            break;
        default:
            break;
    }
    try {
        V.validate(dims);
    } catch (const ValidationError& e) {
        reject(path, e.what());
    }
    return V;
}

InitialState parse_initial(const json& section, const std::string& path, Eigen::Index n, Eigen::Index d) {
    InitialState s;
    s.positions = configuration(require(section, path, "initial_positions_m"),
                                child(path, "initial_positions_m"), n, d);
    if (const json* v = find(section, "initial_velocities_m_per_s")) {
        s.velocities = configuration(*v, child(path, "initial_velocities_m_per_s"), n, d);
    } else {
        s.velocities = Configuration::Zero(n, d);
    }
    return s;
}

bool has_initial(const json& section) { return find(section, "initial_positions_m") != nullptr; }

void parse_grid(const json& v, const std::string& path, ScenarioConfig& c) {
    allow_keys(v, path, {"position_ranges_m", "velocity_ranges_m_per_s", "time_range_s", "bits"});
    GridSpec g;
    g.position = ranges(require(v, path, "position_ranges_m"), child(path, "position_ranges_m"));
    if (const json* r = find(v, "velocity_ranges_m_per_s")) g.velocity = ranges(*r, child(path, "velocity_ranges_m_per_s"));
    if (const json* t = find(v, "time_range_s")) g.time = range(*t, child(path, "time_range_s"));
    if (const json* b = find(v, "bits")) g.bits = bits(*b, child(path, "bits"));
    const auto nd = static_cast<std::size_t>(c.masses.size() * c.dims);
    const auto d = static_cast<std::size_t>(c.dims);
    if (g.position.size() != d && g.position.size() != nd) {
        reject(child(path, "position_ranges_m"), fmt::format("expected {} or {} ranges", d, nd));
    }
    if (!g.velocity.empty() && g.velocity.size() != d && g.velocity.size() != nd) {
        reject(child(path, "velocity_ranges_m_per_s"), fmt::format("expected {} or {} ranges", d, nd));
    }
    c.grid = g;
}

void parse_accel_grid(const json& v, const std::string& path, ScenarioConfig& c) {
    allow_keys(v, path, {"ranges_m_per_s2", "bits"});
    AccelerationGrid a;
    a.ranges = ranges(require(v, path, "ranges_m_per_s2"), child(path, "ranges_m_per_s2"));
    if (static_cast<Eigen::Index>(a.ranges.size()) != c.dims) {
        reject(child(path, "ranges_m_per_s2"), fmt::format("expected {} ranges", c.dims));
    }
    if (const json* b = find(v, "bits")) a.bits = bits(*b, child(path, "bits"));
    c.accel_grid = a;
}

void parse_model(const json& v, const std::string& path, ScenarioConfig& c) {
    allow_keys(v, path, {"order", "smoothing"});
    if (const json* o = find(v, "order")) c.model.order = static_cast<int>(count(*o, child(path, "order")));
    if (const json* s = find(v, "smoothing")) {
        const std::string sp = child(path, "smoothing");
        if (!s->is_array() || s->size() != 2 || !(*s)[0].is_number_integer() || !(*s)[1].is_number_integer()) {
            reject(sp, "expected [numerator, denominator] integers");
        }
        c.model.smoothing = {(*s)[0].get<std::int64_t>(), (*s)[1].get<std::int64_t>()};
    }
    try {
        c.model.validate();
    } catch (const ValidationError& e) {
        reject(path, e.what());
    }
}

void require_steps(const json& s, const std::string& path, ScenarioConfig& c) {
    c.dt = positive(require(s, path, "dt_s"), child(path, "dt_s"));
    c.steps = count(require(s, path, "steps"), child(path, "steps"), 2);
}

void parse_simulate(const json& s, const std::string& path, ScenarioConfig& c, std::uint64_t) {
    allow_keys(s, path, {"dt_s", "steps", "initial_positions_m", "initial_velocities_m_per_s", "boosts_m_per_s",
                         "random_boosts", "frozen_source"});
    require_steps(s, path, c);
    c.initial = parse_initial(s, path, c.masses.size(), c.dims);
    if (const json* b = find(s, "boosts_m_per_s")) {
        const std::string bp = child(path, "boosts_m_per_s");
        if (!b->is_array()) reject(bp, "expected an array of velocity vectors");
        for (std::size_t i = 0; i < b->size(); ++i) c.boosts.push_back(vector((*b)[i], fmt::format("{}[{}]", bp, i), c.dims));
    }
    if (const json* r = find(s, "random_boosts")) c.random_boosts = count(*r, child(path, "random_boosts"));
    if ((!c.boosts.empty() || c.random_boosts > 0) && !c.potential.is_relative()) {
        throw CapabilityError(fmt::format("{}: Galilean boosts need a relative-coordinate potential, got {}",
                                          child(path, "boosts_m_per_s"), to_string(c.potential.kind)));
    }
    if (const json* f = find(s, "frozen_source")) {
        const std::string fp = child(path, "frozen_source");
        allow_keys(*f, fp, {"masses_kg", "initial_positions_m", "initial_velocities_m_per_s", "internal_potential",
                            "coupling"});
        if (c.potential.kind != PotentialKind::free) {
            reject("potential", "must be free when simulate.frozen_source supplies the field");
        }
        FrozenSource fs;
        fs.masses = vector(require(*f, fp, "masses_kg"), child(fp, "masses_kg"));
        if (fs.masses.size() == 0) reject(child(fp, "masses_kg"), "at least one source particle");
        for (Eigen::Index i = 0; i < fs.masses.size(); ++i) {
            if (!(fs.masses[i] > 0.0)) reject(fmt::format("{}.masses_kg[{}]", fp, i), "must be positive");
        }
        fs.initial = parse_initial(*f, fp, fs.masses.size(), c.dims);
        if (const json* ip = find(*f, "internal_potential")) {
            fs.internal = parse_potential(*ip, child(fp, "internal_potential"), c.dims);
        }
        fs.coupling = parse_potential(require(*f, fp, "coupling"), child(fp, "coupling"), c.dims);
        if (fs.coupling.kind != PotentialKind::pair_spring && fs.coupling.kind != PotentialKind::inverse_square) {
            reject(child(fp, "coupling.kind"), "must be pair_spring or inverse_square");
        }
        c.frozen = fs;
    }
}

void parse_extremize(const json& s, const std::string& path, ScenarioConfig& c) {
    allow_keys(s, path, {"dt_s", "steps", "start_m", "end_m", "initial_positions_m", "initial_velocities_m_per_s",
                         "energy_J"});
    require_steps(s, path, c);
    if (has_initial(s)) {
        if (find(s, "start_m") || find(s, "end_m")) reject(path, "give either endpoints or an initial state");
        c.initial = parse_initial(s, path, c.masses.size(), c.dims);
    } else {
        c.start = configuration(require(s, path, "start_m"), child(path, "start_m"), c.masses.size(), c.dims);
        c.end = configuration(require(s, path, "end_m"), child(path, "end_m"), c.masses.size(), c.dims);
    }
    if (const json* e = find(s, "energy_J")) c.energy = number(*e, child(path, "energy_J"));
}

void parse_geodesic(const json& s, const std::string& path, ScenarioConfig& c) {
    allow_keys(s, path, {"energy_J", "start_m", "end_m", "segments", "resample_steps", "mass_matrix_kg",
                         "initial_positions_m", "initial_velocities_m_per_s", "dt_s", "steps"});
    if (c.potential.is_time_dependent()) reject("potential", "Jacobi geodesics need a static potential");
    c.segments = count(require(s, path, "segments"), child(path, "segments"), 1);
    if (const json* r = find(s, "resample_steps")) c.resample_steps = count(*r, child(path, "resample_steps"), 1);
    if (has_initial(s)) {
        if (find(s, "start_m") || find(s, "end_m") || find(s, "energy_J")) {
            reject(path, "give either endpoints and energy or an initial state");
        }
        require_steps(s, path, c);
        c.initial = parse_initial(s, path, c.masses.size(), c.dims);
    } else {
        c.energy = number(require(s, path, "energy_J"), child(path, "energy_J"));
        c.start = configuration(require(s, path, "start_m"), child(path, "start_m"), c.masses.size(), c.dims);
        c.end = configuration(require(s, path, "end_m"), child(path, "end_m"), c.masses.size(), c.dims);
    }
    if (const json* m = find(s, "mass_matrix_kg")) {
        const std::string mp = child(path, "mass_matrix_kg");
        const Eigen::Index n = c.masses.size() * c.dims;
        if (!m->is_array() || static_cast<Eigen::Index>(m->size()) != n) reject(mp, fmt::format("expected {} rows", n));
        c.mass_matrix.resize(n, n);
        for (Eigen::Index i = 0; i < n; ++i) {
            c.mass_matrix.row(i) = vector((*m)[static_cast<std::size_t>(i)], fmt::format("{}[{}]", mp, i), n).transpose();
        }
    }
}

Event event(const json& v, const std::string& path) {
    const Eigen::VectorXd e = vector(v, path, 4);
    return Event(e[0], e[1], e[2], e[3]);
}

void parse_rel_geodesic(const json& s, const std::string& path, ScenarioConfig& c) {
    allow_keys(s, path, {"metric", "start_event_s_m", "end_event_s_m", "segments", "mass_kg", "action_scale_J_s"});
    const std::string mp = child(path, "metric");
    const json& m = require(s, path, "metric");
    allow_keys(m, mp, {"kind", "field", "g_m_per_s2", "gm_m3_per_s2", "center_m", "c_m_per_s"});
    const json& kind = require(m, mp, "kind");
    double light = kSpeedOfLight;
    if (const json* cv = find(m, "c_m_per_s")) light = positive(*cv, child(mp, "c_m_per_s"));
    if (kind == "minkowski") {
        c.metric = minkowski(light);
    } else if (kind == "weak_field") {
        const json& field = require(m, mp, "field");
        if (field == "uniform") {
            c.metric = weak_uniform_field(number(require(m, mp, "g_m_per_s2"), child(mp, "g_m_per_s2")), light);
        } else if (field == "point_mass") {
            Eigen::Vector3d center = Eigen::Vector3d::Zero();
            if (const json* cv = find(m, "center_m")) center = vector(*cv, child(mp, "center_m"), 3);
            c.metric = weak_point_mass(positive(require(m, mp, "gm_m3_per_s2"), child(mp, "gm_m3_per_s2")), center,
                                       light);
        } else {
            reject(child(mp, "field"), "expected \"uniform\" or \"point_mass\"");
        }
    } else {
        reject(child(mp, "kind"), "expected \"minkowski\" or \"weak_field\"");
    }
    try {
        c.metric.validate();
    } catch (const ValidationError& e) {
        reject(mp, e.what());
    }
    c.start_event = event(require(s, path, "start_event_s_m"), child(path, "start_event_s_m"));
    c.end_event = event(require(s, path, "end_event_s_m"), child(path, "end_event_s_m"));
    c.segments = count(require(s, path, "segments"), child(path, "segments"), 1);
    const double m0 = c.masses.size() > 0 ? c.masses[0] : 1.0;
    c.masses = Eigen::VectorXd::Constant(1, m0);
    if (const json* mk = find(s, "mass_kg")) c.masses[0] = positive(*mk, child(path, "mass_kg"));
    c.action_scale = -c.masses[0] * c.metric.c;
    if (const json* a = find(s, "action_scale_J_s")) c.action_scale = number(*a, child(path, "action_scale_J_s"));
}

void parse_complexity(const json& s, const std::string& path, ScenarioConfig& c, const std::string& base_dir) {
    allow_keys(s, path, {"trajectory_csv", "dt_s", "steps", "initial_positions_m", "initial_velocities_m_per_s",
                         "parameterization"});
    if (!c.grid) reject("grid", "complexity runs need a state grid");
    if (const json* t = find(s, "trajectory_csv")) {
        if (!t->is_string()) reject(child(path, "trajectory_csv"), "expected a path");
        std::filesystem::path p(t->get<std::string>());
        if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
        if (!std::filesystem::is_regular_file(p)) reject(child(path, "trajectory_csv"), "file not found: " + p.string());
        c.trajectory_csv = p.string();
        if (has_initial(s)) reject(path, "give either trajectory_csv or an initial state");
    } else {
        require_steps(s, path, c);
        c.initial = parse_initial(s, path, c.masses.size(), c.dims);
    }
    if (const json* m = find(s, "parameterization")) {
        if (*m == "abstract_index") {
            c.parameterization = LawParameterization::abstract_index;
        } else if (*m == "time") {
            c.parameterization = LawParameterization::time;
        } else {
            reject(child(path, "parameterization"), "expected \"abstract_index\" or \"time\"");
        }
    }
}

void parse_convergence(const json& s, const std::string& path, ScenarioConfig& c) {
    allow_keys(s, path, {"dt_sweep_s", "duration_s", "initial_positions_m", "initial_velocities_m_per_s",
                         "expected_order"});
    const Eigen::VectorXd sweep = vector(require(s, path, "dt_sweep_s"), child(path, "dt_sweep_s"));
    if (sweep.size() < 3) reject(child(path, "dt_sweep_s"), "at least three step sizes");
    for (Eigen::Index i = 0; i < sweep.size(); ++i) {
        if (!(sweep[i] > 0.0)) reject(fmt::format("{}.dt_sweep_s[{}]", path, i), "must be positive");
        c.dt_sweep.push_back(sweep[i]);
    }
    c.duration = positive(require(s, path, "duration_s"), child(path, "duration_s"));
    c.initial = parse_initial(s, path, c.masses.size(), c.dims);
    if (const json* o = find(s, "expected_order")) {
        const Range r = range(*o, child(path, "expected_order"));
        c.order_lo = r.lo;
        c.order_hi = r.hi;
    }
    if (c.potential.kind != PotentialKind::free && c.potential.kind != PotentialKind::uniform_field &&
        c.potential.kind != PotentialKind::harmonic) {
        throw CapabilityError(fmt::format("potential: no closed-form oracle for {}", to_string(c.potential.kind)));
    }
}

void parse_verify(const json& s, const std::string& path, ScenarioConfig& c, const std::string& base_dir) {
    allow_keys(s, path, {"mutation", "calibration"});
    if (const json* m = find(s, "mutation")) {
        if (*m != "gradient_sign") reject(child(path, "mutation"), "only \"gradient_sign\" is defined");
        c.mutation = m->get<std::string>();
    }
    if (const json* p = find(s, "calibration")) {
        if (!p->is_string()) reject(child(path, "calibration"), "expected a path");
        std::filesystem::path f(p->get<std::string>());
        if (f.is_relative()) f = std::filesystem::path(base_dir) / f;
        if (!std::filesystem::is_regular_file(f)) reject(child(path, "calibration"), "file not found: " + f.string());
        c.calibration_path = f.string();
    }
}

}  // namespace

double ScenarioConfig::tolerance(const std::string& key, double fallback) const {
    auto it = tolerances.find(key);
    return it == tolerances.end() ? fallback : it->second;
}

ScenarioConfig parse_scenario(const json& j, const std::string& base_dir) {
    allow_keys(j, "", {"schema_version", "name", "run", "seed", "system", "potential", "grid", "acceleration_grid",
                       "model", "tolerances", "simulate", "extremize", "geodesic", "rel_geodesic", "complexity",
                       "convergence", "verify"});
    ScenarioConfig c;
    c.raw = j;
    if (const json* v = find(j, "schema_version")) {
        if (*v != 1) reject("schema_version", "only version 1 is understood");
    }
    const json& run = require(j, "", "run");
    if (!run.is_string()) reject("run", "expected a run kind");
    try {
        c.kind = run_kind_from_string(run.get<std::string>());
    } catch (const ValidationError& e) {
        reject("run", e.what());
    }
    c.name = find(j, "name") && j["name"].is_string() ? j["name"].get<std::string>() : std::string(to_string(c.kind));
    if (const json* s = find(j, "seed")) {
        if (!s->is_number_unsigned() && !(s->is_number_integer() && s->get<std::int64_t>() >= 0)) {
            reject("seed", "expected a non-negative integer");
        }
        c.seed = s->get<std::uint64_t>();
    }

    if (const json* sys = find(j, "system")) {
        allow_keys(*sys, "system", {"masses_kg", "dimensions"});
        c.masses = vector(require(*sys, "system", "masses_kg"), "system.masses_kg");
        if (c.masses.size() == 0) reject("system.masses_kg", "at least one particle");
        for (Eigen::Index i = 0; i < c.masses.size(); ++i) {
            if (!(c.masses[i] > 0.0)) reject(fmt::format("system.masses_kg[{}]", i), "must be positive");
        }
        if (const json* d = find(*sys, "dimensions")) {
            const auto dims = count(*d, "system.dimensions", 1);
            if (dims > 3) reject("system.dimensions", "1, 2 or 3");
            c.dims = static_cast<Eigen::Index>(dims);
        }
    } else if (c.kind != RunKind::verify && c.kind != RunKind::rel_geodesic) {
        reject("system", "required field missing");
    } else {
        c.masses = Eigen::VectorXd::Ones(1);
    }
    if (const json* p = find(j, "potential")) c.potential = parse_potential(*p, "potential", c.dims);
    if (const json* g = find(j, "grid")) parse_grid(*g, "grid", c);
    if (const json* a = find(j, "acceleration_grid")) parse_accel_grid(*a, "acceleration_grid", c);
    if (const json* m = find(j, "model")) parse_model(*m, "model", c);
    if (const json* t = find(j, "tolerances")) {
        if (!t->is_object()) reject("tolerances", "expected an object of name -> number");
        for (const auto& [key, value] : t->items()) c.tolerances[key] = positive(value, child("tolerances", key));
    }

    const std::string section = c.kind == RunKind::rel_geodesic ? "rel_geodesic" : std::string(to_string(c.kind));
    for (const char* other : {"simulate", "extremize", "geodesic", "rel_geodesic", "complexity", "convergence", "verify"}) {
        if (section != other && find(j, other)) reject(other, fmt::format("section does not belong to a {} run", section));
    }
    static const json empty = json::object();
    const json* s = find(j, section.c_str());
    if (!s && c.kind != RunKind::verify) reject(section, "required field missing");
    const json& sec = s ? *s : empty;
    switch (c.kind) {
        case RunKind::simulate: parse_simulate(sec, section, c, c.seed); break;
        case RunKind::extremize: parse_extremize(sec, section, c); break;
        case RunKind::geodesic: parse_geodesic(sec, section, c); break;
        case RunKind::rel_geodesic: parse_rel_geodesic(sec, section, c); break;
        case RunKind::complexity: parse_complexity(sec, section, c, base_dir); break;
        case RunKind::convergence: parse_convergence(sec, section, c); break;
        case RunKind::verify: parse_verify(sec, section, c, base_dir); break;
    }
    if (c.grid) c.grid->dt = c.dt;
    return c;
}

ScenarioConfig load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError(fmt::format("{}: cannot open scenario file", path));
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ValidationError(fmt::format("{}: {}", path, e.what()));
    }
    const auto base = std::filesystem::path(path).parent_path();
    return parse_scenario(j, base.empty() ? std::string(".") : base.string());
}

}  // namespace simplicity
