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


// simplicity <kind> <config.json> [--out DIR] [--seed N]
// simplicity calibrate [--out FILE]

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "simplicity/calibration.hpp"
#include "simplicity/errors.hpp"
#include "simplicity/scenario.hpp"

namespace {

using namespace simplicity;

int run_kind(RunKind kind, const std::string& config_path, const std::string& out_dir,
             const std::optional<std::uint64_t>& seed) {
    try {
        ScenarioConfig config;
        if (config_path.empty()) {
            if (kind != RunKind::verify) throw ValidationError("a config file is required");
            config = parse_scenario(nlohmann::json{{"run", "verify"}});
        } else {
            config = load_scenario(config_path);
        }
        if (config.kind != kind) {
            throw ValidationError(fmt::format("{}: config describes a {} run, not {}", config_path,
                                              to_string(config.kind), to_string(kind)));
        }
        if (seed) config.seed = *seed;
        const RunReport report = run_scenario(config);
        const std::string dir = out_dir.empty() ? "runs/" + config.name : out_dir;
        const auto files = commit_artifacts(report, dir);
        for (const auto& c : report.checks) {
            std::cout << fmt::format("{} {} measured={:.6g} tolerance={:.6g}{}\n", c.passed ? "PASS" : "FAIL", c.name,
                                     c.measured, c.tolerance, c.detail.empty() ? "" : "  (" + c.detail + ")");
        }
        std::cout << fmt::format("wrote {} files to {}\n", files.size(), dir);
        std::cout << fmt::format("wall-clock {:.3f} s\n", report.wall_clock_s);
        return report.passed() ? kExitOk : kExitCheckFailed;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e);
    }
}

int run_calibrate(const std::string& out_file) {
    try {
        const auto start = std::chrono::steady_clock::now();
        const Calibration cal = measure_calibration();
        const std::string path = out_file.empty() ? default_calibration_path() : out_file;
        const std::string tmp = path + ".tmp";
        {
            std::ofstream out(tmp, std::ios::trunc);
            write_calibration(out, cal);
            if (!out) throw Error("cannot write " + tmp);
        }
        std::filesystem::rename(tmp, path);
        std::cout << fmt::format("c_w={} c_0={} n3_residual={} independence_p95={} V_N coupled={} uncoupled={}\n",
                                 cal.chain.c_w, cal.chain.c_0, cal.chain.n3_residual, cal.independence.p95,
                                 cal.vn_coupled, cal.vn_uncoupled);
        std::cout << fmt::format("wrote {}\nwall-clock {:.3f} s\n", path,
                                 std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
        return kExitOk;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e);
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Discrete simplicity-principle mechanics: scenario runner"};
    app.require_subcommand(1);

    struct Sub {
        RunKind kind;
        std::string config;
        std::string out;
        std::optional<std::uint64_t> seed;
    };
    std::vector<std::unique_ptr<Sub>> subs;
    std::vector<CLI::App*> apps;
    for (auto [name, kind] : std::vector<std::pair<const char*, RunKind>>{
             {"simulate", RunKind::simulate}, {"extremize", RunKind::extremize}, {"geodesic", RunKind::geodesic},
             {"rel-geodesic", RunKind::rel_geodesic}, {"complexity", RunKind::complexity},
             {"convergence", RunKind::convergence}, {"verify", RunKind::verify}}) {
        auto s = std::make_unique<Sub>();
        s->kind = kind;
        CLI::App* sub = app.add_subcommand(name, fmt::format("run a scenario of kind {}", to_string(kind)));
        auto* opt = sub->add_option("config", s->config, "scenario JSON file");
        if (kind != RunKind::verify) opt->required();
        sub->add_option("--out", s->out, "artifact directory (default runs/<name>)");
        sub->add_option("--seed", s->seed, "overrides the config seed");
        apps.push_back(sub);
        subs.push_back(std::move(s));
    }
    std::string cal_out;
    CLI::App* cal = app.add_subcommand("calibrate", "re-measure the complexity calibration fixture");
    cal->add_option("--out", cal_out, "output file (default: the shipped fixture)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitValidation;
    }
    if (cal->parsed()) return run_calibrate(cal_out);
    for (std::size_t i = 0; i < apps.size(); ++i) {
        if (apps[i]->parsed()) return run_kind(subs[i]->kind, subs[i]->config, subs[i]->out, subs[i]->seed);
    }
    return kExitValidation;
}
