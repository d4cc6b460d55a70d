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

#include "simplicity/banded_newton.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

namespace simplicity {

namespace {

using SparseMatrix = Eigen::SparseMatrix<double>;

SparseMatrix banded_jacobian(const BandedProblem& p, const Eigen::VectorXd& x, double rel_step) {
    const Eigen::Index bs = p.block_size;
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(static_cast<std::size_t>(p.blocks * bs * bs * 3));
    Eigen::VectorXd probe = x;
    for (Eigen::Index b = 0; b < p.blocks; ++b) {
        for (Eigen::Index c = 0; c < bs; ++c) {
            const Eigen::Index col = b * bs + c;
            const double h = rel_step * (p.fd_scale.size() != 0 ? p.fd_scale[col]
                                                                : std::max(1.0, std::abs(x[col])));
            for (Eigen::Index row_block = std::max<Eigen::Index>(0, b - 1);
                 row_block <= std::min(p.blocks - 1, b + 1); ++row_block) {
                probe[col] = x[col] + h;
                const Eigen::VectorXd up = p.residual_block(probe, row_block);
                probe[col] = x[col] - h;
                const Eigen::VectorXd down = p.residual_block(probe, row_block);
                probe[col] = x[col];
                const Eigen::VectorXd column = (up - down) / (2.0 * h);
                for (Eigen::Index r = 0; r < bs; ++r) {
                    if (column[r] != 0.0) triplets.emplace_back(row_block * bs + r, col, column[r]);
                }
            }
        }
    }
    SparseMatrix jac(p.blocks * bs, p.blocks * bs);
    jac.setFromTriplets(triplets.begin(), triplets.end());
    return jac;
}

bool solve_linear(const SparseMatrix& jac, const Eigen::VectorXd& rhs, Eigen::VectorXd& out) {
    Eigen::SparseLU<SparseMatrix> lu;
    lu.compute(jac);
    if (lu.info() == Eigen::Success) {
        out = lu.solve(rhs);
        if (lu.info() == Eigen::Success && out.allFinite()) return true;
    }
    // Levenberg-style regularization for (near-)singular systems.
    double scale = 0.0;
    for (Eigen::Index k = 0; k < jac.outerSize(); ++k) {
        for (SparseMatrix::InnerIterator it(jac, k); it; ++it) scale = std::max(scale, std::abs(it.value()));
    }
    SparseMatrix normal = SparseMatrix(jac.transpose()) * jac;
    for (double lambda = 1e-12 * scale * scale; lambda < 1e6 * scale * scale + 1.0; lambda *= 100.0) {
        SparseMatrix reg = normal;
        for (Eigen::Index i = 0; i < reg.rows(); ++i) reg.coeffRef(i, i) += lambda;
        Eigen::SimplicialLDLT<SparseMatrix> ldlt;
        ldlt.compute(reg);
        if (ldlt.info() != Eigen::Success) continue;
        out = ldlt.solve(SparseMatrix(jac.transpose()) * rhs);
        if (out.allFinite()) return true;
    }
    return false;
}

bool definite(const SparseMatrix& jac, double sign) {
    SparseMatrix sym = (SparseMatrix(jac.transpose()) + jac) * (0.5 * sign);
    Eigen::SimplicialLDLT<SparseMatrix> ldlt;
    ldlt.compute(sym);
    if (ldlt.info() != Eigen::Success) return false;
    return (ldlt.vectorD().array() > 0.0).all();
}

}  // namespace

Eigen::VectorXd banded_residual(const BandedProblem& problem, const Eigen::VectorXd& x) {
    Eigen::VectorXd r(problem.blocks * problem.block_size);
    for (Eigen::Index b = 0; b < problem.blocks; ++b) {
        r.segment(b * problem.block_size, problem.block_size) = problem.residual_block(x, b);
    }
    return r;
}

NewtonResult solve_banded(const BandedProblem& problem, Eigen::VectorXd x0,
                          const NewtonOptions& options) {
    NewtonResult result;
    result.x = std::move(x0);
    if (problem.blocks == 0) {
        result.converged = true;
        return result;
    }
    Eigen::VectorXd residual = banded_residual(problem, result.x);
    double norm = residual.lpNorm<Eigen::Infinity>();
    for (int it = 0; it < options.max_iterations; ++it) {
        result.iterations = it;
        if (norm <= options.tolerance) break;
        const SparseMatrix jac = banded_jacobian(problem, result.x, options.fd_step);
        Eigen::VectorXd step;
        if (!solve_linear(jac, -residual, step)) break;

        double alpha = 1.0;
        bool accepted = false;
        for (int halving = 0; halving < 40; ++halving, alpha *= 0.5) {
            const Eigen::VectorXd trial = result.x + alpha * step;
            const Eigen::VectorXd trial_residual = banded_residual(problem, trial);
            const double trial_norm = trial_residual.lpNorm<Eigen::Infinity>();
            if (std::isfinite(trial_norm) && trial_norm < norm) {
                result.x = trial;
                residual = trial_residual;
                norm = trial_norm;
                accepted = true;
                break;
            }
        }
        result.iterations = it + 1;
        // At the rounding floor no step decreases the norm.
        if (!accepted) break;
    }
    result.residual_norm = norm;
    result.converged = norm <= options.tolerance;
    if (result.converged) {
        const SparseMatrix jac = banded_jacobian(problem, result.x, options.fd_step);
        result.negative_definite = definite(jac, -1.0);
        result.positive_definite = definite(jac, 1.0);
    }
    return result;
}

}  // namespace simplicity
