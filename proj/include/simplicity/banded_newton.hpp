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

// Damped Newton iteration for stacked residuals with block-tridiagonal
// coupling, shared by the action extremizer and both geodesic solvers.

#include <functional>

#include <Eigen/Dense>

namespace simplicity {

struct BandedProblem {
    Eigen::Index blocks = 0;
    Eigen::Index block_size = 1;
    /// Residual of block i. May read blocks i-1, i, i+1 of x only.
    std::function<Eigen::VectorXd(const Eigen::VectorXd& x, Eigen::Index i)> residual_block;
    /// Length scale per unknown for the difference Jacobian, whose probe is
    /// fd_step * fd_scale[j]. Empty means max(1, |x_j|).
    Eigen::VectorXd fd_scale;
};

struct NewtonOptions {
    double tolerance = 1e-10;  // on the max-norm of the residual
    int max_iterations = 60;
    double fd_step = 1e-6;     // relative step for the Jacobian
};

struct NewtonResult {
    Eigen::VectorXd x;
    double residual_norm = 0.0;
    int iterations = 0;
    bool converged = false;
    /// Whether the symmetrized Jacobian at the solution is negative definite,
    /// i.e. the objective whose gradient is -residual has a strict minimum.
    bool negative_definite = false;
    bool positive_definite = false;
};

Eigen::VectorXd banded_residual(const BandedProblem& problem, const Eigen::VectorXd& x);

/// Runs Newton with backtracking on the residual max-norm from x0. Never
/// throws on non-convergence; callers inspect `converged`.
NewtonResult solve_banded(const BandedProblem& problem, Eigen::VectorXd x0,
                          const NewtonOptions& options = {});

}  // namespace simplicity
