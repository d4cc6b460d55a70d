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

// Computable stand-in for conditional prefix complexity.
//
// khat(target | condition) is the Shannon code length of `target` under a
// fixed adaptive binary predictor that has first been shown `condition`. The
// predictor is a Bayesian mixture of
//   * an order-k context model with additive smoothing, whose counts are
//     pre-trained by one pass over the condition,
//   * a match model over condition || target that predicts the bit following
//     the longest earlier repeat of the current suffix,
//   * copy/complement models aligned with the components obtained by
//     unpairing the condition (see statecodec.hpp).
// Per-bit probabilities are quantized to 16 bits so that the arithmetic coder
// below realizes exactly the modelled distribution.

#include <cstdint>
#include <string_view>
#include <vector>

#include "simplicity/statecodec.hpp"

namespace simplicity {

struct Rational {
    std::int64_t num = 1;
    std::int64_t den = 1;

    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

struct ComplexityModel {
    int order = 3;
    Rational smoothing{1, 1};

    void validate() const;
};

inline constexpr int kProbabilityBits = 16;

/// Unrounded code length in bits.
double code_length(std::string_view target, std::string_view condition,
                   const ComplexityModel& model = {});

/// ceil(code_length). khat("", anything) == 0.
std::int64_t khat(std::string_view target, std::string_view condition = {},
                  const ComplexityModel& model = {});

/// khat(a | d) - khat(a | pair(b, d)); signed.
std::int64_t mutual_info(std::string_view a, std::string_view b, std::string_view d,
                         const ComplexityModel& model = {});

/// Binary arithmetic coder driven by the same predictor as khat. The output
/// is at most khat + 2 bits long.
BitString arithmetic_encode(std::string_view target, std::string_view condition,
                            const ComplexityModel& model = {});
BitString arithmetic_decode(std::string_view code, std::size_t length,
                            std::string_view condition, const ComplexityModel& model = {});

struct InfoDecomposition {
    std::int64_t k_joint = 0;
    std::vector<std::int64_t> k_singles;
    std::vector<std::int64_t> i_terms;
    std::int64_t residual = 0;

    /// k_joint == sum(k_singles) - sum(i_terms) + residual.
    bool identity_holds() const;
};

/// K(<a1..aN> | d) against sum_n K(a_n | d) - sum_n I(a_n : <a_{n+1}..a_N> | d).
InfoDecomposition chain_decompose(const std::vector<BitString>& strings, std::string_view d,
                                  const ComplexityModel& model = {});

enum class LawParameterization { abstract_index, time };

struct LawComplexity {
    std::vector<std::int64_t> per_step;
    double mean_rate = 0.0;  // bits per step, or bits per second in time mode
    LawParameterization parameterization = LawParameterization::abstract_index;
};

/// per_step[k] = khat(state_{k+1} | state_k). The time mode divides the total
/// by tau = J * dt, with dt taken from the states' grid.
LawComplexity law_complexity(const std::vector<CoarseState>& states, LawParameterization mode,
                             const ComplexityModel& model = {});
LawComplexity law_complexity(const std::vector<BitString>& states, LawParameterization mode,
                             double dt, const ComplexityModel& model = {});

/// Acceleration quantization used by interaction_term.
struct AccelerationGrid {
    std::vector<Range> ranges;  // one per spatial dimension, m/s^2
    int bits = 8;
};

/// sum_{n=1}^{N-1} I(alpha_n : <alpha_{n+1}..alpha_N> | state).
std::int64_t interaction_term(const std::vector<BitString>& accel_codes, std::string_view state,
                              const ComplexityModel& model = {});

/// Interaction term at step t (1 <= t <= J-1) of per-particle state sequences.
/// The acceleration of particle n is the second difference of its decoded
/// positions at t-1, t, t+1; the condition is the paired system state at t.
std::int64_t interaction_term(const std::vector<std::vector<CoarseState>>& subsystems,
                              std::size_t t, const AccelerationGrid& accel,
                              const ComplexityModel& model = {});

struct KraftSum {
    double sum = 0.0;
    bool satisfied = true;  // sum <= 1
};

KraftSum kraft_sum(const std::vector<std::int64_t>& codeword_lengths);

}  // namespace simplicity
