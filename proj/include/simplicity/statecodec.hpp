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

// Coarse-grained state space: uniform quantization of (r, v, t) onto b-bit
// cells, and the pairing bijection used to glue finite binary strings.

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "simplicity/trajectory.hpp"

namespace simplicity {

/// Finite binary string, one '0'/'1' character per bit.
using BitString = std::string;

bool is_bitstring(std::string_view s);

/// Self-delimiting header for a length n.
///
/// Let m = n + 1 with binary expansion 1 b_1 ... b_{L-1}. The header is
/// b_1 b_1 b_2 b_2 ... b_{L-1} b_{L-1} 0 1, i.e. 2L bits, where
/// L = ceil(log2(n + 2)). The empty length encodes as "01".
BitString length_header(std::size_t n);

/// Parses a length header starting at `pos`; advances `pos` past it.
/// Returns nullopt on a malformed header ("10" pair or truncated input).
std::optional<std::size_t> read_length_header(std::string_view s, std::size_t& pos);

/// B(a, b) = header(|a|) a b. Injective; the image is prefix-free in a.
BitString pair(std::string_view a, std::string_view b);

/// Inverse of pair. Throws DecodeError when `s` is not in the image.
std::pair<BitString, BitString> unpair(std::string_view s);
std::optional<std::pair<BitString, BitString>> try_unpair(std::string_view s);

/// Left-nested tuple <a1, ..., ak> = B(<a1, ..., a_{k-1}>, ak), <a1> = a1,
/// and <> = "" for the empty tuple.
BitString pair_all(const std::vector<BitString>& parts);

/// Inverse of pair_all for a tuple of known arity k >= 1.
std::vector<BitString> unpair_all(std::string_view s, std::size_t k);

struct StateVector {
    std::vector<double> r;  // m
    std::vector<double> v;  // m/s
    double t = 0.0;         // s
};

/// Closed coordinate range [lo, hi].
struct Range {
    double lo = 0.0;
    double hi = 1.0;

    double width() const { return hi - lo; }
};

/// Uniform b-bit grid over the (r, v, t) coordinates.
///
/// Velocity ranges may be empty and the time range absent, in which case
/// those coordinates are not part of the code. Coordinates are always emitted
/// in (r, v, t) order.
struct GridSpec {
    std::vector<Range> position;
    std::vector<Range> velocity;
    std::optional<Range> time;
    int bits = 8;
    double dt = 1.0;  // s

    std::size_t coordinate_count() const {
        return position.size() + velocity.size() + (time ? 1 : 0);
    }
    /// Throws ValidationError on an empty grid, lo >= hi, bits outside
    /// [1, 53] or non-positive dt.
    void validate() const;
};

struct CoarseState {
    BitString bits;
    std::shared_ptr<const GridSpec> grid;
};

/// floor((x - lo) / w) for cell width w = (hi - lo) / 2^b; x == hi maps onto
/// the top cell.
std::uint64_t quantize_coordinate(double x, const Range& range, int bits);
double cell_center(std::uint64_t cell, const Range& range, int bits);
BitString cell_bits(std::uint64_t cell, int bits);

CoarseState quantize(const StateVector& s, const GridSpec& grid);
CoarseState quantize(const StateVector& s, std::shared_ptr<const GridSpec> grid);
StateVector dequantize(const CoarseState& c);

/// Every codeword of the grid's code, in cell-index order. Only meant for
/// small grids; throws ValidationError above 2^20 codewords.
std::vector<BitString> all_codewords(const GridSpec& grid);

/// One CoarseState per sample of the whole system. Position ranges are given
/// either per dimension (shared by all particles) or per particle coordinate
/// (N*D ranges, particle-major); likewise for velocity ranges.
std::vector<CoarseState> encode_trajectory(const DiscreteTrajectory& traj,
                                           const GridSpec& grid);

/// Per-particle state sequences; ranges cover one particle (D entries).
std::vector<std::vector<CoarseState>> encode_particle_trajectories(
    const DiscreteTrajectory& traj, const GridSpec& grid);

/// One state per line as '0'/'1' text.
void write_coarse_states(std::ostream& out, const std::vector<CoarseState>& states);
std::vector<BitString> read_coarse_states(std::istream& in);

}  // namespace simplicity
