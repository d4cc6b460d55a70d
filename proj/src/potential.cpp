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

#include "simplicity/potential.hpp"

#include <cmath>

#include <fmt/core.h>

#include "simplicity/errors.hpp"

namespace simplicity {

std::string_view to_string(PotentialKind kind) {
    switch (kind) {
        case PotentialKind::free: return "free";
        case PotentialKind::uniform_field: return "uniform_field";
        case PotentialKind::harmonic: return "harmonic";
        case PotentialKind::pair_spring: return "pair_spring";
        case PotentialKind::inverse_square: return "inverse_square";
        case PotentialKind::tabulated: return "tabulated";
    }
    return "unknown";
}

PotentialKind potential_kind_from_string(std::string_view name) {
    for (auto kind : {PotentialKind::free, PotentialKind::uniform_field, PotentialKind::harmonic,
                      PotentialKind::pair_spring, PotentialKind::inverse_square,
                      PotentialKind::tabulated}) {
        if (to_string(kind) == name) return kind;
    }
    throw ValidationError(fmt::format("unknown potential kind '{}'", name));
}

void PotentialSpec::validate(Eigen::Index dims) const {
    auto finite = [](double x, const char* what) {
        if (!std::isfinite(x)) throw ValidationError(fmt::format("{} must be finite", what));
    };
    switch (kind) {
        case PotentialKind::free:
            break;
        case PotentialKind::uniform_field:
            if (field.size() != dims) {
                throw ValidationError(fmt::format("uniform field has {} components, system has {} dims",
                                                  field.size(), dims));
            }
            if (!field.allFinite()) throw ValidationError("uniform field must be finite");
            break;
        case PotentialKind::harmonic:
            finite(stiffness, "spring constant");
            if (stiffness < 0.0) throw ValidationError("spring constant must be >= 0");
            if (center.size() != 0 && center.size() != dims) {
                throw ValidationError(fmt::format("harmonic center has {} components, system has {} dims",
                                                  center.size(), dims));
            }
            break;
        case PotentialKind::pair_spring:
            finite(stiffness, "spring constant");
            finite(rest_length, "rest length");
            if (stiffness < 0.0) throw ValidationError("spring constant must be >= 0");
            if (rest_length < 0.0) throw ValidationError("rest length must be >= 0");
            break;
        case PotentialKind::inverse_square:
            finite(strength, "coupling strength");
            if (strength < 0.0) throw ValidationError("inverse-square strength must be >= 0");
            break;
        case PotentialKind::tabulated: {
            if (!table) throw ValidationError("tabulated potential has no table");
            const auto& t = *table;
            if (t.coupling.kind != PotentialKind::pair_spring &&
                t.coupling.kind != PotentialKind::inverse_square) {
                throw ValidationError("tabulated coupling must be pair_spring or inverse_square");
            }
            t.coupling.validate(dims);
            if (t.frames.empty()) throw ValidationError("tabulated potential has no frames");
            for (const auto& f : t.frames) {
                if (f.rows() != t.source_masses.size() || f.cols() != dims) {
                    throw ValidationError("tabulated frame shape does not match its sources");
                }
            }
            if (!(t.fd_step > 0.0)) throw ValidationError("finite-difference step must be positive");
            break;
        }
    }
}

bool PotentialSpec::is_relative() const {
    return kind == PotentialKind::free || kind == PotentialKind::pair_spring ||
           kind == PotentialKind::inverse_square;
}

PotentialSpec free_potential() { return {}; }

PotentialSpec uniform_field(Eigen::VectorXd field) {
    PotentialSpec v;
    v.kind = PotentialKind::uniform_field;
    v.field = std::move(field);
    return v;
}

PotentialSpec harmonic(double stiffness, Eigen::VectorXd center) {
    PotentialSpec v;
    v.kind = PotentialKind::harmonic;
    v.stiffness = stiffness;
    v.center = std::move(center);
    return v;
}

PotentialSpec pair_spring(double stiffness, double rest_length) {
    PotentialSpec v;
    v.kind = PotentialKind::pair_spring;
    v.stiffness = stiffness;
    v.rest_length = rest_length;
    return v;
}

PotentialSpec inverse_square(double strength) {
    PotentialSpec v;
    v.kind = PotentialKind::inverse_square;
    v.strength = strength;
    return v;
}

namespace {

double pair_energy(const PotentialSpec& c, const Eigen::RowVectorXd& ri, double mi,
                   const Eigen::RowVectorXd& rj, double mj) {
    const double d = (ri - rj).norm();
    if (c.kind == PotentialKind::pair_spring) {
        const double stretch = d - c.rest_length;
        return 0.5 * c.stiffness * stretch * stretch;
    }
    return -c.strength * mi * mj / d;
}

// Gradient of the pair energy with respect to ri.
Eigen::RowVectorXd pair_gradient(const PotentialSpec& c, const Eigen::RowVectorXd& ri, double mi,
                                 const Eigen::RowVectorXd& rj, double mj) {
    const Eigen::RowVectorXd sep = ri - rj;
    if (c.kind == PotentialKind::pair_spring) {
        if (c.rest_length == 0.0) return c.stiffness * sep;
        const double d = sep.norm();
        return c.stiffness * (d - c.rest_length) / d * sep;
    }
    const double d = sep.norm();
    return c.strength * mi * mj / (d * d * d) * sep;
}

Eigen::RowVectorXd center_row(const PotentialSpec& V, Eigen::Index dims) {
    if (V.center.size() == 0) return Eigen::RowVectorXd::Zero(dims);
    return V.center.transpose();
}

const Configuration& frame_at(const TabulatedSource& t, std::size_t step) {
    if (step >= t.frames.size()) {
        throw IndexError(fmt::format("tabulated potential has {} frames, step {} requested",
                                     t.frames.size(), step));
    }
    return t.frames[step];
}

}  // namespace

double potential_value(const PotentialSpec& V, const Configuration& r,
                       const Eigen::VectorXd& masses, std::size_t step) {
    const Eigen::Index n = r.rows();
    double total = 0.0;
    switch (V.kind) {
        case PotentialKind::free:
            return 0.0;
        case PotentialKind::uniform_field:
            for (Eigen::Index i = 0; i < n; ++i) total -= masses[i] * r.row(i).dot(V.field.transpose());
            return total;
        case PotentialKind::harmonic: {
            const Eigen::RowVectorXd c = center_row(V, r.cols());
            for (Eigen::Index i = 0; i < n; ++i) total += 0.5 * V.stiffness * (r.row(i) - c).squaredNorm();
            return total;
        }
        case PotentialKind::pair_spring:
        case PotentialKind::inverse_square:
            for (Eigen::Index i = 0; i < n; ++i) {
                for (Eigen::Index j = i + 1; j < n; ++j) {
                    total += pair_energy(V, r.row(i), masses[i], r.row(j), masses[j]);
                }
            }
            return total;
        case PotentialKind::tabulated: {
            const auto& t = *V.table;
            const Configuration& src = frame_at(t, step);
            for (Eigen::Index i = 0; i < n; ++i) {
                for (Eigen::Index j = 0; j < src.rows(); ++j) {
                    total += pair_energy(t.coupling, r.row(i), masses[i], src.row(j), t.source_masses[j]);
                }
            }
            return total;
        }
    }
    return total;
}

Configuration potential_gradient(const PotentialSpec& V, const Configuration& r,
                                 const Eigen::VectorXd& masses, std::size_t step) {
    const Eigen::Index n = r.rows();
    Configuration g = Configuration::Zero(n, r.cols());
    switch (V.kind) {
        case PotentialKind::free:
            break;
        case PotentialKind::uniform_field:
            for (Eigen::Index i = 0; i < n; ++i) g.row(i) = -masses[i] * V.field.transpose();
            break;
        case PotentialKind::harmonic: {
            const Eigen::RowVectorXd c = center_row(V, r.cols());
            for (Eigen::Index i = 0; i < n; ++i) g.row(i) = V.stiffness * (r.row(i) - c);
            break;
        }
        case PotentialKind::pair_spring:
        case PotentialKind::inverse_square:
            for (Eigen::Index i = 0; i < n; ++i) {
                for (Eigen::Index j = i + 1; j < n; ++j) {
                    const Eigen::RowVectorXd gij = pair_gradient(V, r.row(i), masses[i], r.row(j), masses[j]);
                    g.row(i) += gij;
                    g.row(j) -= gij;
                }
            }
            break;
        case PotentialKind::tabulated: {
            const auto& t = *V.table;
            if (!t.differentiable) {
                throw CapabilityError("tabulated potential was declared without a gradient");
            }
            frame_at(t, step);
            Configuration probe = r;
            for (Eigen::Index i = 0; i < n; ++i) {
                for (Eigen::Index d = 0; d < r.cols(); ++d) {
                    const double x = r(i, d);
                    probe(i, d) = x + t.fd_step;
                    const double up = potential_value(V, probe, masses, step);
                    probe(i, d) = x - t.fd_step;
                    const double down = potential_value(V, probe, masses, step);
                    probe(i, d) = x;
                    g(i, d) = (up - down) / (2.0 * t.fd_step);
                }
            }
            break;
        }
    }
    return g;
}

GradientFunction gradient_function(const PotentialSpec& V, const Eigen::VectorXd& masses) {
    return [V, masses](const Configuration& r, std::size_t step) {
        return potential_gradient(V, r, masses, step);
    };
}

}  // namespace simplicity
