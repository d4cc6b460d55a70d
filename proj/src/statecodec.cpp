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

#include "simplicity/statecodec.hpp"

#include <bit>
#include <cmath>
#include <istream>
#include <ostream>

#include <fmt/core.h>

#include "simplicity/errors.hpp"

namespace simplicity {

bool is_bitstring(std::string_view s) {
    for (char c : s) {
        if (c != '0' && c != '1') return false;
    }
    return true;
}

BitString length_header(std::size_t n) {
    const std::uint64_t m = static_cast<std::uint64_t>(n) + 1;
    const int width = std::bit_width(m);
    BitString out;
    out.reserve(2 * static_cast<std::size_t>(width));
    for (int i = width - 2; i >= 0; --i) {
        const char bit = ((m >> i) & 1u) ? '1' : '0';
        out.push_back(bit);
        out.push_back(bit);
    }
    out += "01";
    return out;
}

std::optional<std::size_t> read_length_header(std::string_view s, std::size_t& pos) {
    std::uint64_t m = 1;
    std::size_t p = pos;
    while (true) {
        if (p + 2 > s.size()) return std::nullopt;
        const char a = s[p];
        const char b = s[p + 1];
        p += 2;
        if (a == '0' && b == '1') break;
        if (a != b) return std::nullopt;
        if (m >> 62) return std::nullopt;
        m = (m << 1) | (a == '1' ? 1u : 0u);
    }
    pos = p;
    return static_cast<std::size_t>(m - 1);
}

BitString pair(std::string_view a, std::string_view b) {
    BitString out = length_header(a.size());
    out.reserve(out.size() + a.size() + b.size());
    out.append(a);
    out.append(b);
    return out;
}

std::optional<std::pair<BitString, BitString>> try_unpair(std::string_view s) {
    std::size_t pos = 0;
    const auto n = read_length_header(s, pos);
    if (!n || pos + *n > s.size()) return std::nullopt;
    return std::pair<BitString, BitString>{BitString(s.substr(pos, *n)),
                                           BitString(s.substr(pos + *n))};
}

std::pair<BitString, BitString> unpair(std::string_view s) {
    auto parts = try_unpair(s);
    if (!parts) {
        throw DecodeError(fmt::format("string of length {} is not a valid pairing", s.size()));
    }
    return std::move(*parts);
}

BitString pair_all(const std::vector<BitString>& parts) {
    if (parts.empty()) return {};
    BitString acc = parts.front();
    for (std::size_t i = 1; i < parts.size(); ++i) acc = pair(acc, parts[i]);
    return acc;
}

std::vector<BitString> unpair_all(std::string_view s, std::size_t k) {
    if (k == 0) throw ValidationError("tuple arity must be at least 1");
    std::vector<BitString> parts(k);
    BitString rest(s);
    for (std::size_t i = k - 1; i >= 1; --i) {
        auto [head, tail] = unpair(rest);
        parts[i] = std::move(tail);
        rest = std::move(head);
    }
    parts[0] = std::move(rest);
    return parts;
}

void GridSpec::validate() const {
    if (coordinate_count() == 0) throw ValidationError("grid has no coordinates");
    if (bits < 1 || bits > 53) {
        throw ValidationError(fmt::format("bits per coordinate must be in [1, 53], got {}", bits));
    }
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        throw ValidationError(fmt::format("grid time step must be positive, got {}", dt));
    }
    auto check = [](const Range& r, const std::string& name) {
        if (!std::isfinite(r.lo) || !std::isfinite(r.hi) || !(r.lo < r.hi)) {
            throw ValidationError(
                fmt::format("range for {} must satisfy lo < hi, got [{}, {}]", name, r.lo, r.hi));
        }
    };
    for (std::size_t i = 0; i < position.size(); ++i) check(position[i], fmt::format("r[{}]", i));
    for (std::size_t i = 0; i < velocity.size(); ++i) check(velocity[i], fmt::format("v[{}]", i));
    if (time) check(*time, "t");
}

std::uint64_t quantize_coordinate(double x, const Range& range, int bits) {
    const double cells = std::ldexp(1.0, bits);
    const double scaled = std::floor((x - range.lo) / range.width() * cells);
    const double top = cells - 1.0;
    return static_cast<std::uint64_t>(std::min(std::max(scaled, 0.0), top));
}

double cell_center(std::uint64_t cell, const Range& range, int bits) {
    const double cells = std::ldexp(1.0, bits);
    return range.lo + (static_cast<double>(cell) + 0.5) * (range.width() / cells);
}

BitString cell_bits(std::uint64_t cell, int bits) {
    BitString out(static_cast<std::size_t>(bits), '0');
    for (int i = 0; i < bits; ++i) {
        if ((cell >> (bits - 1 - i)) & 1u) out[static_cast<std::size_t>(i)] = '1';
    }
    return out;
}

namespace {

std::uint64_t parse_cell(std::string_view s) {
    std::uint64_t cell = 0;
    for (char c : s) cell = (cell << 1) | (c == '1' ? 1u : 0u);
    return cell;
}

std::uint64_t checked_cell(double x, const Range& range, int bits, const std::string& name) {
    if (!std::isfinite(x)) throw ValidationError(fmt::format("coordinate {} is not finite", name));
    if (x < range.lo || x > range.hi) {
        throw RangeError(fmt::format("coordinate {} = {} outside [{}, {}]", name, x, range.lo,
                                     range.hi));
    }
    return quantize_coordinate(x, range, bits);
}

}  // namespace

CoarseState quantize(const StateVector& s, std::shared_ptr<const GridSpec> grid) {
    const GridSpec& g = *grid;
    g.validate();
    if (s.r.size() != g.position.size()) {
        throw ValidationError(fmt::format("state has {} position coordinates, grid expects {}",
                                          s.r.size(), g.position.size()));
    }
    if (!g.velocity.empty() && s.v.size() != g.velocity.size()) {
        throw ValidationError(fmt::format("state has {} velocity coordinates, grid expects {}",
                                          s.v.size(), g.velocity.size()));
    }
    std::vector<BitString> cells;
    cells.reserve(g.coordinate_count());
    for (std::size_t i = 0; i < s.r.size(); ++i) {
        cells.push_back(cell_bits(checked_cell(s.r[i], g.position[i], g.bits,
                                               fmt::format("r[{}]", i)),
                                  g.bits));
    }
    for (std::size_t i = 0; i < g.velocity.size(); ++i) {
        cells.push_back(cell_bits(checked_cell(s.v[i], g.velocity[i], g.bits,
                                               fmt::format("v[{}]", i)),
                                  g.bits));
    }
    if (g.time) cells.push_back(cell_bits(checked_cell(s.t, *g.time, g.bits, "t"), g.bits));
    return CoarseState{pair_all(cells), std::move(grid)};
}

CoarseState quantize(const StateVector& s, const GridSpec& grid) {
    return quantize(s, std::make_shared<const GridSpec>(grid));
}

StateVector dequantize(const CoarseState& c) {
    if (!c.grid) throw ValidationError("coarse state carries no grid");
    const GridSpec& g = *c.grid;
    g.validate();
    if (!is_bitstring(c.bits)) throw DecodeError("coarse state contains non-binary characters");
    const auto parts = unpair_all(c.bits, g.coordinate_count());
    for (const auto& p : parts) {
        if (p.size() != static_cast<std::size_t>(g.bits)) {
            throw DecodeError(fmt::format("cell string of length {}, expected {}", p.size(), g.bits));
        }
    }
    StateVector s;
    std::size_t idx = 0;
    for (const auto& range : g.position) s.r.push_back(cell_center(parse_cell(parts[idx++]), range, g.bits));
    for (const auto& range : g.velocity) s.v.push_back(cell_center(parse_cell(parts[idx++]), range, g.bits));
    if (g.time) s.t = cell_center(parse_cell(parts[idx++]), *g.time, g.bits);
    return s;
}

std::vector<BitString> all_codewords(const GridSpec& grid) {
    grid.validate();
    const std::size_t total_bits = grid.coordinate_count() * static_cast<std::size_t>(grid.bits);
    if (total_bits > 20) {
        throw ValidationError(fmt::format("grid has 2^{} codewords; enumeration limited to 2^20",
                                          total_bits));
    }
    const std::uint64_t count = std::uint64_t{1} << total_bits;
    std::vector<BitString> out;
    out.reserve(count);
    const std::uint64_t mask = (std::uint64_t{1} << grid.bits) - 1;
    for (std::uint64_t code = 0; code < count; ++code) {
        std::vector<BitString> cells(grid.coordinate_count());
        for (std::size_t i = 0; i < cells.size(); ++i) {
            const auto shift = static_cast<int>((cells.size() - 1 - i) * grid.bits);
            cells[i] = cell_bits((code >> shift) & mask, grid.bits);
        }
        out.push_back(pair_all(cells));
    }
    return out;
}

namespace {

const Range& pick_range(const std::vector<Range>& ranges, Eigen::Index n, Eigen::Index d,
                        Eigen::Index dims) {
    if (static_cast<Eigen::Index>(ranges.size()) == dims) return ranges[static_cast<std::size_t>(d)];
    return ranges[static_cast<std::size_t>(n * dims + d)];
}

void check_range_count(const std::vector<Range>& ranges, Eigen::Index per_particle,
                       Eigen::Index total, const char* what, bool optional) {
    const auto size = static_cast<Eigen::Index>(ranges.size());
    if (optional && size == 0) return;
    if (size != per_particle && size != total) {
        throw ValidationError(fmt::format("grid has {} {} ranges, expected {} or {}", size, what,
                                          per_particle, total));
    }
}

}  // namespace

std::vector<CoarseState> encode_trajectory(const DiscreteTrajectory& traj, const GridSpec& grid) {
    traj.validate();
    const Eigen::Index n_particles = traj.particles();
    const Eigen::Index dims = traj.dims();
    check_range_count(grid.position, dims, n_particles * dims, "position", false);
    check_range_count(grid.velocity, dims, n_particles * dims, "velocity", true);

    // Expand per-dimension ranges to the flattened system state.
    auto flat = std::make_shared<GridSpec>(grid);
    flat->position.clear();
    flat->velocity.clear();
    for (Eigen::Index n = 0; n < n_particles; ++n) {
        for (Eigen::Index d = 0; d < dims; ++d) {
            flat->position.push_back(pick_range(grid.position, n, d, dims));
            if (!grid.velocity.empty()) flat->velocity.push_back(pick_range(grid.velocity, n, d, dims));
        }
    }
    std::shared_ptr<const GridSpec> shared = flat;

    std::vector<CoarseState> out;
    out.reserve(traj.positions.size());
    for (std::size_t k = 0; k < traj.positions.size(); ++k) {
        StateVector s;
        const Configuration vel = sample_velocity(traj, k);
        for (Eigen::Index n = 0; n < n_particles; ++n) {
            for (Eigen::Index d = 0; d < dims; ++d) {
                s.r.push_back(traj.positions[k](n, d));
                s.v.push_back(vel(n, d));
            }
        }
        if (grid.velocity.empty()) s.v.clear();
        s.t = traj.time(k);
        try {
            out.push_back(quantize(s, shared));
        } catch (const RangeError& e) {
            throw RangeError(fmt::format("sample {}: {}", k, e.what()));
        }
    }
    return out;
}

std::vector<std::vector<CoarseState>> encode_particle_trajectories(const DiscreteTrajectory& traj,
                                                                   const GridSpec& grid) {
    traj.validate();
    const Eigen::Index dims = traj.dims();
    check_range_count(grid.position, dims, dims, "position", false);
    check_range_count(grid.velocity, dims, dims, "velocity", true);
    auto shared = std::make_shared<const GridSpec>(grid);

    std::vector<std::vector<CoarseState>> out(static_cast<std::size_t>(traj.particles()));
    for (std::size_t k = 0; k < traj.positions.size(); ++k) {
        const Configuration vel = sample_velocity(traj, k);
        for (Eigen::Index n = 0; n < traj.particles(); ++n) {
            StateVector s;
            for (Eigen::Index d = 0; d < dims; ++d) {
                s.r.push_back(traj.positions[k](n, d));
                if (!grid.velocity.empty()) s.v.push_back(vel(n, d));
            }
            s.t = traj.time(k);
            try {
                out[static_cast<std::size_t>(n)].push_back(quantize(s, shared));
            } catch (const RangeError& e) {
                throw RangeError(fmt::format("sample {}, particle {}: {}", k, n, e.what()));
            }
        }
    }
    return out;
}

void write_coarse_states(std::ostream& out, const std::vector<CoarseState>& states) {
    for (const auto& s : states) out << s.bits << '\n';
}

std::vector<BitString> read_coarse_states(std::istream& in) {
    std::vector<BitString> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!is_bitstring(line)) {
            throw DecodeError(fmt::format("line {} is not a '0'/'1' string", lineno));
        }
        out.push_back(line);
    }
    return out;
}

}  // namespace simplicity
