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


#include <doctest.h>

#include <set>
#include <sstream>

#include "simplicity/errors.hpp"
#include "simplicity/statecodec.hpp"

using namespace simplicity;

namespace {

// Every binary string of length <= n.
std::vector<BitString> all_strings(int n) {
    std::vector<BitString> out{""};
    for (int len = 1; len <= n; ++len) {
        for (std::uint64_t w = 0; w < (1u << len); ++w) out.push_back(cell_bits(w, len));
    }
    return out;
}

GridSpec unit_grid(std::size_t coords, int bits) {
    GridSpec g;
    g.position.assign(coords, Range{0.0, 1.0});
    g.bits = bits;
    return g;
}

}  // namespace

TEST_CASE("length header layout") {
    CHECK(length_header(0) == "01");
    CHECK(length_header(1) == "0001");      // m = 2 = 10b
    CHECK(length_header(2) == "1101");      // m = 3 = 11b
    CHECK(length_header(4) == "001101");    // m = 5 = 101b
    CHECK(length_header(6) == "111101");    // m = 7 = 111b
    for (std::size_t n : {0u, 1u, 2u, 5u, 14u, 255u, 1000u}) {
        const auto L = static_cast<std::size_t>(std::ceil(std::log2(static_cast<double>(n) + 2.0)));
        CHECK(length_header(n).size() == 2 * L);
    }
}

TEST_CASE("pair of empty strings is the bare header") {
    CHECK(pair("", "") == "01");
    const auto [a, b] = unpair("01");
    CHECK(a.empty());
    CHECK(b.empty());
}

TEST_CASE("pair round trip and length bound") {
    const auto [a, b] = unpair(pair("01", "1"));
    CHECK(a == "01");
    CHECK(b == "1");
    CHECK(pair("01", "1").size() <= 2 * 2 + 2 + 1);
}

TEST_CASE("pair is a bijection onto its image for all strings up to 8 bits") {
    const auto strings = all_strings(8);
    std::set<BitString> seen;
    std::size_t failures = 0;
    for (const auto& a : strings) {
        for (const auto& b : {std::string(""), std::string("1"), std::string("0110"), std::string("11111111")}) {
            const BitString p = pair(a, b);
            if (!seen.insert(p).second) ++failures;
            if (unpair(p) != std::make_pair(a, b)) ++failures;
        }
    }
    // Second component exhaustive against a few first components.
    for (const auto& a : {std::string(""), std::string("0"), std::string("10101010")}) {
        for (const auto& b : strings) {
            const BitString p = pair(a, b);
            if (unpair(p) != std::make_pair(a, b)) ++failures;
        }
    }
    CHECK(failures == 0);
}

TEST_CASE("unpair rejects strings outside the image") {
    CHECK_THROWS_AS(unpair("10"), DecodeError);
    CHECK_THROWS_AS(unpair(""), DecodeError);
    CHECK_THROWS_AS(unpair("0011010"), DecodeError);  // header says 4 bits, only 1 follows
    CHECK_FALSE(try_unpair("1").has_value());
}

TEST_CASE("tuples nest from the left") {
    CHECK(pair_all({}) == "");
    CHECK(pair_all({"101"}) == "101");
    CHECK(pair_all({"1", "0", "11"}) == pair(pair("1", "0"), "11"));
    const std::vector<BitString> parts{"", "1", "0110", ""};
    CHECK(unpair_all(pair_all(parts), 4) == parts);
}

TEST_CASE("quantize a single coordinate") {
    GridSpec g = unit_grid(1, 3);
    const auto c = quantize(StateVector{{0.3}, {}, 0.0}, g);
    CHECK(c.bits == "010");
    CHECK(quantize(StateVector{{0.0}, {}, 0.0}, g).bits == "000");
    CHECK(quantize(StateVector{{1.0}, {}, 0.0}, g).bits == "111");  // x == hi joins the top cell
    CHECK(dequantize(c).r[0] == doctest::Approx(0.3125).epsilon(1e-15));
    CHECK(dequantize(quantize(StateVector{{0.0}, {}, 0.0}, g)).r[0] == 1.0 / 16.0);
}

TEST_CASE("two coordinates on a 4-bit grid") {
    // Cells 4 and 12; header for length 4 is 00 11 01.
    const auto c = quantize(StateVector{{0.3, 0.8}, {}, 0.0}, unit_grid(2, 4));
    CHECK(c.bits == "001101" "0100" "1100");
}

TEST_CASE("quantize errors") {
    GridSpec g = unit_grid(1, 3);
    CHECK_THROWS_AS(quantize(StateVector{{1.5}, {}, 0.0}, g), RangeError);
    CHECK_THROWS_AS(quantize(StateVector{{-0.1}, {}, 0.0}, g), RangeError);
    CHECK_THROWS_AS(quantize(StateVector{{std::nan("")}, {}, 0.0}, g), ValidationError);
    try {
        quantize(StateVector{{0.5, 2.0}, {}, 0.0}, unit_grid(2, 3));
        FAIL("expected a range error");
    } catch (const RangeError& e) {
        CHECK(std::string(e.what()).find("r[1]") != std::string::npos);
    }
    GridSpec bad = unit_grid(1, 0);
    CHECK_THROWS_AS(bad.validate(), ValidationError);
    bad = unit_grid(1, 54);
    CHECK_THROWS_AS(bad.validate(), ValidationError);
    bad = unit_grid(1, 3);
    bad.position[0] = Range{1.0, 1.0};
    CHECK_THROWS_AS(bad.validate(), ValidationError);
    bad = unit_grid(1, 3);
    bad.dt = 0.0;
    CHECK_THROWS_AS(bad.validate(), ValidationError);
}

TEST_CASE("dequantize rejects malformed codes") {
    auto g = std::make_shared<const GridSpec>(unit_grid(2, 4));
    CHECK_THROWS_AS(dequantize(CoarseState{"0011010100", g}), DecodeError);
    CHECK_THROWS_AS(dequantize(CoarseState{"00110a01001100", g}), DecodeError);
    CHECK_THROWS_AS(dequantize(CoarseState{"01" "1111", g}), DecodeError);  // first cell of length 0
}

TEST_CASE("round trips and refinement") {
    GridSpec g;
    g.position = {{-2.0, 2.0}};
    g.velocity = {{-1.0, 1.0}};
    g.time = Range{0.0, 5.0};
    double worst_prev = 0.0;
    for (int b : {4, 5, 6, 7, 8}) {
        g.bits = b;
        auto grid = std::make_shared<const GridSpec>(g);
        double worst = 0.0;
        for (int i = 0; i <= 400; ++i) {
            const double u = i / 400.0;
            StateVector s{{-2.0 + 4.0 * u}, {1.0 - 2.0 * u * u}, 5.0 * u};
            const auto c = quantize(s, grid);
            const auto d = dequantize(c);
            CHECK(quantize(d, grid).bits == c.bits);
            worst = std::max(worst, std::abs(d.r[0] - s.r[0]));
        }
        CHECK(worst <= 4.0 / std::ldexp(1.0, b + 1) * (1 + 1e-12));
        if (worst_prev > 0.0) CHECK(worst == doctest::Approx(worst_prev / 2).epsilon(0.05));
        worst_prev = worst;
    }
}

TEST_CASE("codes over a fixed grid are prefix free") {
    for (int b = 1; b <= 8; ++b) {
        const auto words = all_codewords(unit_grid(1, b));
        CHECK(words.size() == (1u << b));
        std::set<BitString> sorted(words.begin(), words.end());
        CHECK(sorted.size() == words.size());
        // In sorted order a prefix would sit right before its extension.
        BitString prev;
        bool prefix = false;
        for (const auto& w : sorted) {
            if (!prev.empty() && w.compare(0, prev.size(), prev) == 0) prefix = true;
            prev = w;
        }
        CHECK_FALSE(prefix);
    }
    const auto two = all_codewords(unit_grid(2, 4));
    std::set<BitString> s(two.begin(), two.end());
    CHECK(s.size() == 256);
}

TEST_CASE("trajectory encoding") {
    DiscreteTrajectory traj;
    traj.masses = Eigen::VectorXd::Ones(1);
    traj.dt = 0.1;
    for (int k = 0; k <= 10; ++k) traj.positions.push_back(Configuration::Constant(1, 1, 0.25));
    GridSpec g;
    g.position = {{0.0, 1.0}};
    g.velocity = {{-1.0, 1.0}};
    g.bits = 8;
    g.dt = 0.1;
    const auto still = encode_trajectory(traj, g);
    CHECK(still.size() == 11);
    for (const auto& c : still) CHECK(c.bits == still.front().bits);

    // Uniform motion: position cells step by a constant amount.
    for (int k = 0; k <= 10; ++k) traj.positions[k](0, 0) = 0.0 + 0.0625 * k + 1e-3;
    g.bits = 10;
    const auto moving = encode_trajectory(traj, g);
    std::vector<std::uint64_t> cells;
    for (const auto& c : moving) cells.push_back(quantize_coordinate(dequantize(c).r[0], g.position[0], g.bits));
    for (std::size_t k = 1; k < cells.size(); ++k) CHECK(cells[k] - cells[k - 1] == 64);

    traj.positions[7](0, 0) = 3.0;
    try {
        encode_trajectory(traj, g);
        FAIL("expected a range error");
    } catch (const RangeError& e) {
        CHECK(std::string(e.what()).find("sample 7") != std::string::npos);
    }
}

TEST_CASE("state dumps round trip") {
    GridSpec g = unit_grid(1, 3);
    std::vector<CoarseState> states{quantize(StateVector{{0.1}, {}, 0}, g), quantize(StateVector{{0.9}, {}, 0}, g)};
    std::stringstream io;
    write_coarse_states(io, states);
    CHECK(io.str() == "000\n111\n");
    const auto back = read_coarse_states(io);
    CHECK(back == std::vector<BitString>{"000", "111"});
}
