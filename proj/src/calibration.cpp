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

#include "simplicity/calibration.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <random>
#include <sstream>

#include <fmt/core.h>
#include <fmt/ostream.h>

#include "simplicity/discrete_mech.hpp"
#include "simplicity/errors.hpp"
#include "simplicity/potential.hpp"

#ifndef SIMPLICITY_DATA_DIR
#define SIMPLICITY_DATA_DIR "data"
#endif

namespace simplicity {

namespace {

class BitSource {
public:
    explicit BitSource(std::uint64_t seed) : engine_(seed) {}

    char bit() {
        if (left_ == 0) {
            word_ = engine_();
            left_ = 64;
        }
        --left_;
        const char b = (word_ & 1u) ? '1' : '0';
        word_ >>= 1;
        return b;
    }

    BitString string(std::size_t n) {
        BitString s(n, '0');
        for (auto& c : s) c = bit();
        return s;
    }

    std::size_t length(std::size_t max_len) { return static_cast<std::size_t>(engine_() % (max_len + 1)); }

private:
    std::mt19937_64 engine_;
    std::uint64_t word_ = 0;
    int left_ = 0;
};

std::vector<std::int64_t> vn_series(const DiscreteTrajectory& traj, const GridSpec& grid,
                                    const AccelerationGrid& accel, const ComplexityModel& model) {
    const auto subsystems = encode_particle_trajectories(traj, grid);
    std::vector<std::int64_t> out;
    for (std::size_t t = 1; t + 1 < subsystems.front().size(); ++t) {
        out.push_back(interaction_term(subsystems, t, accel, model));
    }
    return out;
}

}  // namespace

std::vector<std::array<BitString, 3>> triple_corpus(const CorpusSpec& spec) {
    BitSource src(spec.seed);
    std::vector<std::array<BitString, 3>> out(spec.size);
    for (auto& triple : out) {
        for (auto& s : triple) s = src.string(src.length(spec.max_len));
    }
    return out;
}

std::vector<std::array<BitString, 2>> independent_pairs(std::uint64_t seed, std::size_t count,
                                                        std::size_t length) {
    BitSource src(seed);
    std::vector<std::array<BitString, 2>> out(count);
    for (auto& p : out) {
        p[0] = src.string(length);
        p[1] = src.string(length);
    }
    return out;
}

std::uint64_t corpus_fingerprint(const std::vector<std::array<BitString, 3>>& corpus) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    const auto mix = [&h](unsigned char c) {
        h ^= c;
        h *= 0x100000001b3ull;
    };
    for (const auto& triple : corpus) {
        for (const auto& s : triple) {
            for (char c : s) mix(static_cast<unsigned char>(c));
            mix('|');
        }
    }
    return h;
}

ChainStats measure_chain(const std::vector<std::array<BitString, 3>>& corpus,
                         const ComplexityModel& model) {
    ChainStats st;
    for (const auto& [a, g, b] : corpus) {
        const std::int64_t joint = khat(pair(a, g), b, model);
        const std::int64_t given = khat(a, pair(g, b), model);
        const std::int64_t single = khat(a, b, model);
        const std::int64_t rest = khat(g, b, model);
        st.c_w = std::max(st.c_w, std::abs(joint - given - rest));
        st.c_0 = std::max(st.c_0, given - single);
        st.self_info_gap = std::max(st.self_info_gap, khat(a, {}, model) - mutual_info(a, a, {}, model));
        const InfoDecomposition d = chain_decompose({a, g, b}, {}, model);
        st.n3_residual = std::max(st.n3_residual, std::abs(d.residual));
    }
    return st;
}

IndependenceStats measure_independence(const std::vector<std::array<BitString, 2>>& pairs,
                                       std::int64_t bound, const ComplexityModel& model) {
    IndependenceStats st;
    if (pairs.empty()) return st;
    std::vector<std::int64_t> mags;
    std::size_t within = 0;
    for (const auto& [a, b] : pairs) {
        const std::int64_t m = std::abs(mutual_info(a, b, {}, model));
        mags.push_back(m);
        if (m <= bound) ++within;
    }
    std::sort(mags.begin(), mags.end());
    const std::size_t idx = (mags.size() * 95 + 99) / 100 - 1;
    st.p95 = mags[std::min(idx, mags.size() - 1)];
    st.max = mags.back();
    st.fraction_within = static_cast<double>(within) / static_cast<double>(pairs.size());
    return st;
}

InteractionFixture measure_interaction_fixture(const ComplexityModel& model) {
    constexpr std::size_t J = 512;
    constexpr double dt = 0.05;     // s
    constexpr double k = 1.0;       // N/m
    Eigen::VectorXd masses(2);
    masses << 1.0, 1.0;
    Configuration r0(2, 1), v0(2, 1);
    r0 << 0.4, 0.1;
    v0 << -0.15, 0.15;

    GridSpec grid;
    grid.position = {Range{-1.0, 1.0}};
    grid.velocity = {Range{-1.0, 1.0}};
    grid.bits = 24;
    grid.dt = dt;
    // Deliberately not commensurate with the position range, so -k x / m
    // does not share cell bits with x.
    AccelerationGrid accel{{Range{-0.6, 0.6}}, 8};

    const auto run = [&](const PotentialSpec& V) {
        return simulate_verlet(r0, verlet_start(r0, v0, V, masses, dt), J, V, masses, dt);
    };
    InteractionFixture out;
    out.coupled_series = vn_series(run(pair_spring(k)), grid, accel, model);
    out.uncoupled_series = vn_series(run(harmonic(k)), grid, accel, model);
    for (auto v : out.coupled_series) out.coupled += v;
    for (auto v : out.uncoupled_series) out.uncoupled += v;
    return out;
}

Calibration measure_calibration(const ComplexityModel& model) {
    model.validate();
    Calibration cal;
    cal.model = model;
    const auto corpus = triple_corpus(cal.corpus);
    cal.fingerprint = corpus_fingerprint(corpus);
    cal.chain = measure_chain(corpus, model);
    cal.independence = measure_independence(
        independent_pairs(cal.independence_seed, cal.independence_pairs, cal.independence_length),
        cal.independence_bound, model);
    const InteractionFixture fx = measure_interaction_fixture(model);
    cal.vn_coupled = fx.coupled;
    cal.vn_uncoupled = fx.uncoupled;
    return cal;
}

void write_calibration(std::ostream& out, const Calibration& cal) {
    fmt::print(out, "# simplicity complexity-proxy calibration\n");
    fmt::print(out, "version {}\n", cal.version);
    fmt::print(out, "model.order {}\n", cal.model.order);
    fmt::print(out, "model.smoothing {}/{}\n", cal.model.smoothing.num, cal.model.smoothing.den);
    fmt::print(out, "corpus.seed {}\n", cal.corpus.seed);
    fmt::print(out, "corpus.size {}\n", cal.corpus.size);
    fmt::print(out, "corpus.max_len {}\n", cal.corpus.max_len);
    fmt::print(out, "corpus.fnv1a {:016x}\n", cal.fingerprint);
    fmt::print(out, "chain.c_w {}\n", cal.chain.c_w);
    fmt::print(out, "chain.c_0 {}\n", cal.chain.c_0);
    fmt::print(out, "chain.self_info_gap {}\n", cal.chain.self_info_gap);
    fmt::print(out, "chain.n3_residual {}\n", cal.chain.n3_residual);
    fmt::print(out, "independence.seed {}\n", cal.independence_seed);
    fmt::print(out, "independence.pairs {}\n", cal.independence_pairs);
    fmt::print(out, "independence.length {}\n", cal.independence_length);
    fmt::print(out, "independence.bound {}\n", cal.independence_bound);
    fmt::print(out, "independence.p95 {}\n", cal.independence.p95);
    fmt::print(out, "independence.max {}\n", cal.independence.max);
    fmt::print(out, "independence.fraction_within {:.17g}\n", cal.independence.fraction_within);
    fmt::print(out, "interaction.coupled {}\n", cal.vn_coupled);
    fmt::print(out, "interaction.uncoupled {}\n", cal.vn_uncoupled);
}

Calibration read_calibration(std::istream& in) {
    std::map<std::string, std::string> kv;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        const auto space = line.find(' ');
        if (space == std::string::npos) {
            throw DecodeError(fmt::format("calibration line {}: expected 'key value'", lineno));
        }
        kv[line.substr(0, space)] = line.substr(space + 1);
    }
    const auto get = [&](const std::string& key) -> const std::string& {
        const auto it = kv.find(key);
        if (it == kv.end()) throw DecodeError(fmt::format("calibration is missing '{}'", key));
        return it->second;
    };
    const auto as_int = [&](const std::string& key) -> std::int64_t {
        try {
            std::size_t used = 0;
            const std::int64_t v = std::stoll(get(key), &used);
            if (used != get(key).size()) throw std::invalid_argument(key);
            return v;
        } catch (const std::logic_error&) {
            throw DecodeError(fmt::format("calibration '{}' is not an integer", key));
        }
    };
    Calibration cal;
    cal.version = static_cast<int>(as_int("version"));
    if (cal.version != 1) throw DecodeError(fmt::format("unsupported calibration version {}", cal.version));
    cal.model.order = static_cast<int>(as_int("model.order"));
    {
        const std::string& s = get("model.smoothing");
        const auto slash = s.find('/');
        if (slash == std::string::npos) throw DecodeError("model.smoothing must be num/den");
        try {
            cal.model.smoothing = {std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1))};
        } catch (const std::logic_error&) {
            throw DecodeError("model.smoothing must be num/den");
        }
    }
    cal.corpus.seed = static_cast<std::uint64_t>(as_int("corpus.seed"));
    cal.corpus.size = static_cast<std::size_t>(as_int("corpus.size"));
    cal.corpus.max_len = static_cast<std::size_t>(as_int("corpus.max_len"));
    try {
        cal.fingerprint = std::stoull(get("corpus.fnv1a"), nullptr, 16);
    } catch (const std::logic_error&) {
        throw DecodeError("corpus.fnv1a must be hexadecimal");
    }
    cal.chain.c_w = as_int("chain.c_w");
    cal.chain.c_0 = as_int("chain.c_0");
    cal.chain.self_info_gap = as_int("chain.self_info_gap");
    cal.chain.n3_residual = as_int("chain.n3_residual");
    cal.independence_seed = static_cast<std::uint64_t>(as_int("independence.seed"));
    cal.independence_pairs = static_cast<std::size_t>(as_int("independence.pairs"));
    cal.independence_length = static_cast<std::size_t>(as_int("independence.length"));
    cal.independence_bound = as_int("independence.bound");
    cal.independence.p95 = as_int("independence.p95");
    cal.independence.max = as_int("independence.max");
    try {
        cal.independence.fraction_within = std::stod(get("independence.fraction_within"));
    } catch (const std::logic_error&) {
        throw DecodeError("independence.fraction_within must be a number");
    }
    cal.vn_coupled = as_int("interaction.coupled");
    cal.vn_uncoupled = as_int("interaction.uncoupled");
    try {
        cal.model.validate();
    } catch (const ValidationError& e) {
        throw DecodeError(fmt::format("calibration model invalid: {}", e.what()));
    }
    return cal;
}

std::string default_calibration_path() { return std::string(SIMPLICITY_DATA_DIR) + "/calibration.txt"; }

Calibration load_calibration(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError(fmt::format("cannot open calibration fixture '{}'", path));
    return read_calibration(in);
}

}  // namespace simplicity
