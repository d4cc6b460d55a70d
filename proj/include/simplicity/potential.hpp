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

#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "simplicity/trajectory.hpp"

namespace simplicity {

enum class PotentialKind { free, uniform_field, harmonic, pair_spring, inverse_square, tabulated };

std::string_view to_string(PotentialKind kind);
PotentialKind potential_kind_from_string(std::string_view name);

struct TabulatedSource;

/// Coordinate-only interaction energy V_N(r_1, ..., r_N), SI units.
///
///   free            V = 0
///   uniform_field   V = -sum_n m_n field . r_n          (field in m/s^2)
///   harmonic        V = sum_n k/2 |r_n - center|^2       (k in N/m)
///   pair_spring     V = sum_{i<j} k/2 (|r_i - r_j| - rest_length)^2
///   inverse_square  V = -sum_{i<j} strength m_i m_j / |r_i - r_j|
///   tabulated       V = sum_n sum_j coupling(r_n, s_j(step)) against frozen
///                   source positions s_j tabulated per time step
struct PotentialSpec {
    PotentialKind kind = PotentialKind::free;
    Eigen::VectorXd field;   // uniform_field
    Eigen::VectorXd center;  // harmonic; empty means the origin
    double stiffness = 0.0;  // harmonic, pair_spring
    double rest_length = 0.0;
    double strength = 0.0;   // inverse_square
    std::shared_ptr<const TabulatedSource> table;

    /// Throws ValidationError when parameters are outside their domains or
    /// incompatible with `dims`.
    void validate(Eigen::Index dims) const;

    /// True for interactions that depend on relative positions only.
    bool is_relative() const;
    bool is_time_dependent() const { return kind == PotentialKind::tabulated; }
};

/// Frozen massive subsystem seen by the remaining particles.
struct TabulatedSource {
    PotentialSpec coupling;                 // pair_spring or inverse_square
    Eigen::VectorXd source_masses;
    std::vector<Configuration> frames;      // source positions per step
    double fd_step = 1e-6;                  // m, centered-difference step
    bool differentiable = true;
    /// Effective potentials mix in kinetic contributions of the frozen
    /// subsystem, so V no longer reads as a mutual-information term.
    bool information_interpretation = false;
};

PotentialSpec free_potential();
PotentialSpec uniform_field(Eigen::VectorXd field);
PotentialSpec harmonic(double stiffness, Eigen::VectorXd center = {});
PotentialSpec pair_spring(double stiffness, double rest_length = 0.0);
PotentialSpec inverse_square(double strength);

double potential_value(const PotentialSpec& V, const Configuration& r,
                       const Eigen::VectorXd& masses, std::size_t step = 0);

/// dV/dr, one row per particle. Tabulated potentials use centered
/// differences of step fd_step; a non-differentiable table throws
/// CapabilityError.
Configuration potential_gradient(const PotentialSpec& V, const Configuration& r,
                                 const Eigen::VectorXd& masses, std::size_t step = 0);

/// Gradient callback used by the residual and stepping routines.
using GradientFunction = std::function<Configuration(const Configuration&, std::size_t)>;

GradientFunction gradient_function(const PotentialSpec& V, const Eigen::VectorXd& masses);

}  // namespace simplicity
