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

// Measured constants of the complexity proxy and the corpora they come from.
//
// The corpora are drawn from std::mt19937_64 using raw output bits only, so
// every platform with a conforming standard library sees identical strings.
// A fixture file pins the results; tests recompute and compare.

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "simplicity/complexity.hpp"

namespace simplicity {

struct CorpusSpec {
    std::uint64_t seed = 20260101;
    std::size_t size = 1000;
    std::size_t max_len = 256;
};

/// (alpha, gamma, beta) triples with lengths uniform in [0, max_len].
std::vector<std::array<BitString, 3>> triple_corpus(const CorpusSpec& spec);

/// Pairs of independent uniform strings of fixed length.
std::vector<std::array<BitString, 2>> independent_pairs(std::uint64_t seed, std::size_t count,
                                                        std::size_t length);

/// FNV-1a over the corpus strings, each followed by a separator byte.
std::uint64_t corpus_fingerprint(const std::vector<std::array<BitString, 3>>& corpus);

struct ChainStats {
    std::int64_t c_w = 0;            // max |K(<a,g>|b) - K(a|<g,b>) - K(g|b)|
    std::int64_t c_0 = 0;            // max K(a|<g,b>) - K(a|b), floored at 0
    std::int64_t self_info_gap = 0;  // max K(a) - I(a:a)
    std::int64_t n3_residual = 0;    // max |residual| of chain_decompose on triples
};

ChainStats measure_chain(const std::vector<std::array<BitString, 3>>& corpus,
                         const ComplexityModel& model = {});

struct IndependenceStats {
    std::int64_t p95 = 0;  // 95th percentile of |I(a:b)|
    std::int64_t max = 0;
    double fraction_within = 0.0;  // share with |I| <= bound
};

IndependenceStats measure_independence(const std::vector<std::array<BitString, 2>>& pairs,
                                       std::int64_t bound, const ComplexityModel& model = {});

/// Two equal masses on a line, 512 steps. The coupled system is a pure
/// pair_spring; the baseline tethers each particle to its own harmonic well
/// with the same stiffness. Both use one state grid and one acceleration
/// grid. Returns the sum of V_N over the interior steps.
struct InteractionFixture {
    std::int64_t coupled = 0;
    std::int64_t uncoupled = 0;
    std::vector<std::int64_t> coupled_series;
    std::vector<std::int64_t> uncoupled_series;
};

InteractionFixture measure_interaction_fixture(const ComplexityModel& model = {});

struct Calibration {
    int version = 1;
    ComplexityModel model;
    CorpusSpec corpus;
    std::uint64_t fingerprint = 0;
    ChainStats chain;
    std::uint64_t independence_seed = 20260102;
    std::size_t independence_pairs = 1000;
    std::size_t independence_length = 1024;
    std::int64_t independence_bound = 64;
    IndependenceStats independence;
    std::int64_t vn_coupled = 0;
    std::int64_t vn_uncoupled = 0;
};

/// Runs every measurement with the default corpora.
Calibration measure_calibration(const ComplexityModel& model = {});

void write_calibration(std::ostream& out, const Calibration& cal);
/// Throws DecodeError on malformed or unknown-version input.
Calibration read_calibration(std::istream& in);

/// Path of the fixture shipped with the sources.
std::string default_calibration_path();
Calibration load_calibration(const std::string& path);

}  // namespace simplicity
