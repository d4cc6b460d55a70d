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

#include "simplicity/complexity.hpp"

#include <bit>
#include <cmath>
#include <numeric>

#include <fmt/core.h>

#include "simplicity/errors.hpp"

namespace simplicity {

void ComplexityModel::validate() const {
    if (order < 0 || order > 16) {
        throw ValidationError(fmt::format("context order must be in [0, 16], got {}", order));
    }
    if (smoothing.num <= 0 || smoothing.den <= 0) {
        throw ValidationError("smoothing constant must be a positive rational");
    }
}

namespace {

constexpr std::uint32_t kProbOne = 1u << kProbabilityBits;
constexpr double kMatchFloor = 1.0 / 4096.0;
constexpr double kAlignedMiss = 1.0 / 64.0;
constexpr std::size_t kMaxComponents = 6;

// Online suffix automaton over {0, 1}. After every append it reports the
// longest suffix that also ends at an earlier position, and its first end.
class SuffixAutomaton {
public:
    SuffixAutomaton() { states_.push_back({0, -1, {-1, -1}, -1}); }

    void reserve(std::size_t n) { states_.reserve(2 * n + 2); }

    void append(int c, int pos) {
        const int cur = static_cast<int>(states_.size());
        states_.push_back({states_[last_].len + 1, -1, {-1, -1}, pos});
        int p = last_;
        while (p != -1 && states_[p].next[c] == -1) {
            states_[p].next[c] = cur;
            p = states_[p].link;
        }
        if (p == -1) {
            states_[cur].link = 0;
        } else {
            const int q = states_[p].next[c];
            if (states_[p].len + 1 == states_[q].len) {
                states_[cur].link = q;
            } else {
                const int clone = static_cast<int>(states_.size());
                State copy = states_[q];
                copy.len = states_[p].len + 1;
                states_.push_back(copy);
                while (p != -1 && states_[p].next[c] == q) {
                    states_[p].next[c] = clone;
                    p = states_[p].link;
                }
                states_[q].link = clone;
                states_[cur].link = clone;
            }
        }
        last_ = cur;
    }

    /// (length, first end position) of the longest repeated suffix; length 0
    /// means no repeat.
    std::pair<int, int> longest_repeat() const {
        const int s = states_[last_].link;
        if (s <= 0) return {0, -1};
        return {states_[s].len, states_[s].firstpos};
    }

private:
    struct State {
        int len;
        int link;
        int next[2];
        int firstpos;
    };
    std::vector<State> states_;
    int last_ = 0;
};

void collect_components(std::string_view s, int depth, std::vector<BitString>& out) {
    if (out.size() >= kMaxComponents || depth > 3) return;
    auto parts = try_unpair(s);
    if (!parts) return;
    out.push_back(parts->first);
    if (out.size() < kMaxComponents) out.push_back(parts->second);
    collect_components(parts->first, depth + 1, out);
}

// Mixture predictor. Call p1() then update(bit) for each target bit.
class ConditionalPredictor {
public:
    ConditionalPredictor(std::string_view condition, std::size_t target_length,
                         const ComplexityModel& model)
        : order_(model.order),
          alpha_(model.smoothing.value()),
          counts_(std::size_t{1} << model.order, {0.0, 0.0}) {
        // Order-k counts trained on the condition.
        std::uint32_t ctx = 0;
        const std::uint32_t mask = (1u << order_) - 1u;
        for (char ch : condition) {
            const int bit = ch == '1';
            counts_[ctx][static_cast<std::size_t>(bit)] += 1.0;
            ctx = order_ == 0 ? 0 : ((ctx << 1) | static_cast<std::uint32_t>(bit)) & mask;
        }

        stream_.reserve(condition.size() + target_length);
        automaton_.reserve(condition.size() + target_length);
        for (char ch : condition) push_stream(ch == '1');

        components_.push_back(BitString(condition));
        collect_components(condition, 0, components_);

        // Prior: 1/2 context model, 1/8 match model, 3/8 aligned family with
        // geometrically decaying weight per component.
        weights_.push_back(0.5);
        weights_.push_back(0.125);
        double share = 0.375;
        for (std::size_t j = 0; j < components_.size(); ++j) {
            const double w = (j + 1 == components_.size()) ? share : share / 2.0;
            weights_.push_back(w / 2.0);  // copy
            weights_.push_back(w / 2.0);  // complement
            share -= w;
        }
        expert_p1_.resize(weights_.size());
    }

    /// Quantized probability of a 1, in units of 2^-16.
    std::uint32_t p1() {
        // Context model.
        const auto& c = counts_[ctx_];
        expert_p1_[0] = (c[1] + alpha_) / (c[0] + c[1] + 2.0 * alpha_);

        // Match model.
        const auto [len, first] = automaton_.longest_repeat();
        double pm = 0.5;
        if (len > 0) {
            const int h = static_cast<int>(stream_.size());
            const int l0 = std::bit_width(static_cast<unsigned>(h)) - 1;
            if (len > l0) {
                const double miss = std::max(kMatchFloor, 0.5 * std::ldexp(1.0, -(len - l0)));
                const bool predicted = stream_[static_cast<std::size_t>(first) + 1] != 0;
                pm = predicted ? 1.0 - miss : miss;
            }
        }
        expert_p1_[1] = pm;

        // Aligned components.
        for (std::size_t j = 0; j < components_.size(); ++j) {
            const BitString& comp = components_[j];
            double copy = 0.5;
            if (index_ < comp.size()) copy = comp[index_] == '1' ? 1.0 - kAlignedMiss : kAlignedMiss;
            expert_p1_[2 + 2 * j] = copy;
            expert_p1_[3 + 2 * j] = 1.0 - copy;
        }

        double mix = 0.0;
        for (std::size_t i = 0; i < weights_.size(); ++i) mix += weights_[i] * expert_p1_[i];
        const double scaled = std::round(mix * static_cast<double>(kProbOne));
        return static_cast<std::uint32_t>(
            std::clamp(scaled, 1.0, static_cast<double>(kProbOne - 1)));
    }

    void update(int bit) {
        double total = 0.0;
        for (std::size_t i = 0; i < weights_.size(); ++i) {
            weights_[i] *= bit ? expert_p1_[i] : 1.0 - expert_p1_[i];
            total += weights_[i];
        }
        for (double& w : weights_) w /= total;

        counts_[ctx_][static_cast<std::size_t>(bit)] += 1.0;
        const std::uint32_t mask = (1u << order_) - 1u;
        ctx_ = order_ == 0 ? 0 : ((ctx_ << 1) | static_cast<std::uint32_t>(bit)) & mask;
        push_stream(bit != 0);
        ++index_;
    }

private:
    void push_stream(bool bit) {
        stream_.push_back(bit ? 1 : 0);
        automaton_.append(bit ? 1 : 0, static_cast<int>(stream_.size()) - 1);
    }

    int order_;
    double alpha_;
    std::vector<std::array<double, 2>> counts_;
    std::uint32_t ctx_ = 0;
    std::vector<std::uint8_t> stream_;
    SuffixAutomaton automaton_;
    std::vector<BitString> components_;
    std::vector<double> weights_;
    std::vector<double> expert_p1_;
    std::size_t index_ = 0;
};

void require_bits(std::string_view s, const char* what) {
    if (!is_bitstring(s)) throw ValidationError(fmt::format("{} is not a binary string", what));
}

}  // namespace

double code_length(std::string_view target, std::string_view condition,
                   const ComplexityModel& model) {
    model.validate();
    require_bits(target, "target");
    require_bits(condition, "condition");
    if (target.empty()) return 0.0;
    ConditionalPredictor predictor(condition, target.size(), model);
    double bits = 0.0;
    for (char ch : target) {
        const int bit = ch == '1';
        const std::uint32_t p1 = predictor.p1();
        const std::uint32_t p = bit ? p1 : kProbOne - p1;
        bits += static_cast<double>(kProbabilityBits) - std::log2(static_cast<double>(p));
        predictor.update(bit);
    }
    return bits;
}

std::int64_t khat(std::string_view target, std::string_view condition,
                  const ComplexityModel& model) {
    const double bits = code_length(target, condition, model);
    // Guard against log2 rounding pushing an exact integer length upward.
    return static_cast<std::int64_t>(std::ceil(bits - 1e-9));
}

std::int64_t mutual_info(std::string_view a, std::string_view b, std::string_view d,
                         const ComplexityModel& model) {
    if (a.empty()) return 0;
    return khat(a, d, model) - khat(a, pair(b, d), model);
}

namespace {

constexpr std::uint64_t kTop = 0xFFFFFFFFull;
constexpr std::uint64_t kHalf = 0x80000000ull;
constexpr std::uint64_t kQuarter = 0x40000000ull;

std::uint64_t split_point(std::uint64_t low, std::uint64_t high, std::uint32_t p1) {
    const std::uint64_t range = high - low + 1;
    const std::uint64_t p0 = kProbOne - p1;
    return low + ((range * p0) >> kProbabilityBits) - 1;
}

}  // namespace

BitString arithmetic_encode(std::string_view target, std::string_view condition,
                            const ComplexityModel& model) {
    model.validate();
    require_bits(target, "target");
    require_bits(condition, "condition");
    BitString out;
    if (target.empty()) return out;
    ConditionalPredictor predictor(condition, target.size(), model);
    std::uint64_t low = 0;
    std::uint64_t high = kTop;
    std::size_t pending = 0;
    auto emit = [&](char bit) {
        out.push_back(bit);
        out.append(pending, bit == '1' ? '0' : '1');
        pending = 0;
    };
    for (char ch : target) {
        const int bit = ch == '1';
        const std::uint64_t split = split_point(low, high, predictor.p1());
        if (bit) low = split + 1; else high = split;
        predictor.update(bit);
        while (true) {
            if (high < kHalf) {
                emit('0');
            } else if (low >= kHalf) {
                emit('1');
                low -= kHalf;
                high -= kHalf;
            } else if (low >= kQuarter && high < kHalf + kQuarter) {
                ++pending;
                low -= kQuarter;
                high -= kQuarter;
            } else {
                break;
            }
            low <<= 1;
            high = (high << 1) | 1u;
        }
    }
    ++pending;
    emit(low < kQuarter ? '0' : '1');
    return out;
}

BitString arithmetic_decode(std::string_view code, std::size_t length, std::string_view condition,
                            const ComplexityModel& model) {
    model.validate();
    require_bits(code, "code");
    require_bits(condition, "condition");
    BitString out;
    if (length == 0) return out;
    ConditionalPredictor predictor(condition, length, model);
    std::size_t pos = 0;
    auto next_bit = [&]() -> std::uint64_t {
        return pos < code.size() && code[pos++] == '1' ? 1u : 0u;
    };
    std::uint64_t value = 0;
    for (int i = 0; i < 32; ++i) value = (value << 1) | next_bit();
    std::uint64_t low = 0;
    std::uint64_t high = kTop;
    out.reserve(length);
    for (std::size_t i = 0; i < length; ++i) {
        const std::uint64_t split = split_point(low, high, predictor.p1());
        const int bit = value > split ? 1 : 0;
        if (bit) low = split + 1; else high = split;
        out.push_back(bit ? '1' : '0');
        predictor.update(bit);
        while (true) {
            if (high < kHalf) {
            } else if (low >= kHalf) {
                low -= kHalf;
                high -= kHalf;
                value -= kHalf;
            } else if (low >= kQuarter && high < kHalf + kQuarter) {
                low -= kQuarter;
                high -= kQuarter;
                value -= kQuarter;
            } else {
                break;
            }
            low <<= 1;
            high = (high << 1) | 1u;
            value = (value << 1) | next_bit();
        }
    }
    return out;
}

bool InfoDecomposition::identity_holds() const {
    const auto singles = std::accumulate(k_singles.begin(), k_singles.end(), std::int64_t{0});
    const auto infos = std::accumulate(i_terms.begin(), i_terms.end(), std::int64_t{0});
    return k_joint == singles - infos + residual;
}

namespace {

BitString tail_tuple(const std::vector<BitString>& strings, std::size_t from) {
    return pair_all(std::vector<BitString>(strings.begin() + static_cast<std::ptrdiff_t>(from),
                                           strings.end()));
}

}  // namespace

InfoDecomposition chain_decompose(const std::vector<BitString>& strings, std::string_view d,
                                  const ComplexityModel& model) {
    if (strings.empty()) throw ValidationError("chain decomposition needs at least one string");
    InfoDecomposition out;
    out.k_joint = khat(pair_all(strings), d, model);
    for (const auto& s : strings) out.k_singles.push_back(khat(s, d, model));
    for (std::size_t n = 0; n + 1 < strings.size(); ++n) {
        const BitString rest = tail_tuple(strings, n + 1);
        out.i_terms.push_back(mutual_info(strings[n], rest, d, model));
    }
    const auto singles = std::accumulate(out.k_singles.begin(), out.k_singles.end(), std::int64_t{0});
    const auto infos = std::accumulate(out.i_terms.begin(), out.i_terms.end(), std::int64_t{0});
    out.residual = out.k_joint - singles + infos;
    return out;
}

LawComplexity law_complexity(const std::vector<BitString>& states, LawParameterization mode,
                             double dt, const ComplexityModel& model) {
    if (states.size() < 2) {
        throw ValidationError(fmt::format("law complexity needs at least 2 states, got {}",
                                          states.size()));
    }
    LawComplexity out;
    out.parameterization = mode;
    out.per_step.reserve(states.size() - 1);
    for (std::size_t k = 0; k + 1 < states.size(); ++k) {
        out.per_step.push_back(khat(states[k + 1], states[k], model));
    }
    const double total = static_cast<double>(
        std::accumulate(out.per_step.begin(), out.per_step.end(), std::int64_t{0}));
    const double steps = static_cast<double>(out.per_step.size());
    if (mode == LawParameterization::time) {
        if (!(dt > 0.0)) throw ValidationError("time parameterization needs dt > 0");
        out.mean_rate = total / (steps * dt);
    } else {
        out.mean_rate = total / steps;
    }
    return out;
}

LawComplexity law_complexity(const std::vector<CoarseState>& states, LawParameterization mode,
                             const ComplexityModel& model) {
    std::vector<BitString> bits;
    bits.reserve(states.size());
    for (const auto& s : states) bits.push_back(s.bits);
    double dt = 0.0;
    if (!states.empty() && states.front().grid) dt = states.front().grid->dt;
    return law_complexity(bits, mode, dt, model);
}

std::int64_t interaction_term(const std::vector<BitString>& accel_codes, std::string_view state,
                              const ComplexityModel& model) {
    std::int64_t total = 0;
    for (std::size_t n = 0; n + 1 < accel_codes.size(); ++n) {
        total += mutual_info(accel_codes[n], tail_tuple(accel_codes, n + 1), state, model);
    }
    return total;
}

std::int64_t interaction_term(const std::vector<std::vector<CoarseState>>& subsystems,
                              std::size_t t, const AccelerationGrid& accel,
                              const ComplexityModel& model) {
    if (subsystems.size() < 2) return 0;
    const std::size_t length = subsystems.front().size();
    for (const auto& s : subsystems) {
        if (s.size() != length) {
            throw ValidationError("subsystem state sequences have mismatched lengths");
        }
    }
    if (t < 1 || t + 1 >= length) {
        throw IndexError(fmt::format("interaction step {} outside [1, {}]", t,
                                     length < 2 ? 0 : length - 2));
    }
    if (accel.bits < 1 || accel.bits > 53) throw ValidationError("acceleration bits outside [1, 53]");

    std::vector<BitString> accel_codes;
    std::vector<BitString> state_parts;
    for (std::size_t n = 0; n < subsystems.size(); ++n) {
        const auto& seq = subsystems[n];
        const StateVector prev = dequantize(seq[t - 1]);
        const StateVector curr = dequantize(seq[t]);
        const StateVector next = dequantize(seq[t + 1]);
        const double dt = seq[t].grid->dt;
        if (accel.ranges.size() != curr.r.size()) {
            throw ValidationError(fmt::format("acceleration grid has {} ranges, state has {} dims",
                                              accel.ranges.size(), curr.r.size()));
        }
        std::vector<BitString> cells;
        for (std::size_t d = 0; d < curr.r.size(); ++d) {
            const double a = (next.r[d] - 2.0 * curr.r[d] + prev.r[d]) / (dt * dt);
            const Range& range = accel.ranges[d];
            if (!(a >= range.lo && a <= range.hi)) {
                throw RangeError(fmt::format("acceleration of particle {} axis {} = {} outside [{}, {}]",
                                             n, d, a, range.lo, range.hi));
            }
            cells.push_back(cell_bits(quantize_coordinate(a, range, accel.bits), accel.bits));
        }
        accel_codes.push_back(pair_all(cells));
        state_parts.push_back(seq[t].bits);
    }
    return interaction_term(accel_codes, pair_all(state_parts), model);
}

KraftSum kraft_sum(const std::vector<std::int64_t>& codeword_lengths) {
    KraftSum out;
    long double sum = 0.0L;
    for (auto len : codeword_lengths) {
        if (len < 0) throw ValidationError(fmt::format("negative codeword length {}", len));
        sum += std::ldexp(1.0L, -static_cast<int>(std::min<std::int64_t>(len, 16000)));
    }
    out.sum = static_cast<double>(sum);
    out.satisfied = sum <= 1.0L;
    return out;
}

}  // namespace simplicity
