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

// Declarative scenarios: a JSON config names one run kind and its inputs;
// running it yields a report plus artifact files. Artifacts are rendered in
// memory first and committed only after the run has succeeded, each through a
// temporary file and a rename.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "simplicity/complexity.hpp"
#include "simplicity/discrete_mech.hpp"
#include "simplicity/geodesic.hpp"
#include "simplicity/potential.hpp"
#include "simplicity/relativity.hpp"
#include "simplicity/statecodec.hpp"

namespace simplicity {

enum class RunKind { simulate, extremize, geodesic, rel_geodesic, complexity, convergence, verify };

std::string_view to_string(RunKind kind);
/// Accepts both "rel_geodesic" and the CLI spelling "rel-geodesic".
RunKind run_kind_from_string(std::string_view name);

struct InitialState {
    Configuration positions;   // m
    Configuration velocities;  // m/s
};

struct FrozenSource {
    Eigen::VectorXd masses;
    InitialState initial;
    PotentialSpec internal;   // interaction inside the massive subsystem
    PotentialSpec coupling;   // massive <-> light
};

struct ScenarioConfig {
    std::string name;
    RunKind kind = RunKind::simulate;
    nlohmann::json raw;       // echoed into the report
    std::uint64_t seed = 0;

    Eigen::VectorXd masses;   // kg
    Eigen::Index dims = 1;
    PotentialSpec potential;

    double dt = 0.01;         // s
    std::size_t steps = 0;
    std::optional<InitialState> initial;
    std::optional<Configuration> start;  // m
    std::optional<Configuration> end;    // m
    std::optional<double> energy;        // J
    std::vector<Eigen::VectorXd> boosts; // m/s
    std::size_t random_boosts = 0;
    std::optional<FrozenSource> frozen;

    std::size_t segments = 0;  // geodesic and rel_geodesic
    std::optional<std::size_t> resample_steps;
    Eigen::MatrixXd mass_matrix;

    StaticMetric metric;
    Event start_event = Event::Zero();
    Event end_event = Event::Zero();
    double action_scale = 0.0;  // J*s, defaults to -m c

    std::optional<GridSpec> grid;
    std::optional<AccelerationGrid> accel_grid;
    ComplexityModel model;
    LawParameterization parameterization = LawParameterization::abstract_index;
    std::optional<std::string> trajectory_csv;  // resolved path

    std::vector<double> dt_sweep;
    double duration = 0.0;  // s
    double order_lo = 1.8;
    double order_hi = 2.2;

    std::optional<std::string> mutation;
    std::optional<std::string> calibration_path;

    std::map<std::string, double> tolerances;
    double tolerance(const std::string& key, double fallback) const;
};

/// Validates everything a run needs. `base_dir` resolves relative paths.
/// Throws ValidationError with the offending field path.
ScenarioConfig parse_scenario(const nlohmann::json& j, const std::string& base_dir = ".");
ScenarioConfig load_scenario(const std::string& path);

struct CheckResult {
    std::string name;
    bool passed = false;
    double measured = 0.0;
    double tolerance = 0.0;
    std::string detail;
};

struct RunReport {
    std::string scenario;
    RunKind kind = RunKind::simulate;
    nlohmann::json echo;
    nlohmann::json results;
    std::vector<CheckResult> checks;
    std::map<std::string, std::string> artifacts;  // file name -> contents
    double wall_clock_s = 0.0;                      // not serialized

    bool passed() const;
    void add_check(std::string name, bool passed, double measured, double tolerance,
                   std::string detail = {});
    /// Deterministic JSON: scenario echo, results, checks, artifact list.
    nlohmann::json to_json() const;
};

/// Runs in memory; nothing touches the filesystem.
RunReport run_scenario(const ScenarioConfig& config);

/// Writes every artifact plus report.json into `dir` (created if missing).
/// Each file goes to a temporary name first and is renamed into place.
std::vector<std::string> commit_artifacts(const RunReport& report, const std::string& dir);

struct ConvergenceRow {
    double dt = 0.0;
    double max_error = 0.0;
    std::optional<double> order;  // log2 of successive error ratios
};

struct ConvergenceTable {
    std::vector<ConvergenceRow> rows;
    bool exact = false;           // every error at rounding level
    std::optional<double> observed_order;  // mean of the successive orders
};

/// Verlet error against the closed form over `duration` for each dt. Needs an
/// analytic oracle (free, uniform_field, harmonic); other kinds throw
/// CapabilityError. Fewer than three dt values throw ValidationError.
ConvergenceTable convergence_sweep(const PotentialSpec& V, const Eigen::VectorXd& masses,
                                   const InitialState& initial, double duration,
                                   const std::vector<double>& dt_list);

std::string convergence_csv(const ConvergenceTable& table);

/// Property suites of every module. `mutation` = "gradient_sign" flips the
/// potential gradient seen by the residual suite.
RunReport run_verify(std::uint64_t seed, const std::optional<std::string>& mutation = std::nullopt,
                     const std::optional<std::string>& calibration_path = std::nullopt);

/// Operation name -> run kinds that reach it.
const std::vector<std::pair<std::string, std::vector<RunKind>>>& operation_coverage();

/// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitConvergence = 3;
inline constexpr int kExitDomain = 4;

/// Maps a caught exception onto the exit codes above.
int exit_code_for(const std::exception& e);

}  // namespace simplicity
