#pragma once

#include <optional>

#include "pcadc/solvers.hpp"

namespace pcadc {

/// Solver configuration plus the denominator regularizer. Leaving epsilon
/// unset picks 1e-8 times the largest row norm of the data.
struct RobustConfig : SolverConfig {
  std::optional<double> epsilon;
};

/// Sum of row-wise Euclidean reconstruction errors, sum_i ||X_i - W W^T X_i||.
/// Requires ||W||_{S_inf} <= 1 (within 1e-9).
double robust_primal_objective(const Matrix& x, const Matrix& w);

/// Kernelized least-absolute-deviation dual:
///   sum_i sqrt(K_ii (1 + ||H_i||^2)) - trace(sqrt(H^T K H)).
double robust_dual_objective(const Matrix& k, const Matrix& h);

/// Resolved epsilon for a data matrix (1e-8 * max row norm) unless the
/// config pins one.
double resolve_robust_epsilon(const RobustConfig& cfg, const Vector& row_norms);

/// Row-reweighted DCA in coefficient space. Each iteration rescales row i of
/// XW by 1/sqrt(||X_i||^2 - ||(XW)_i||^2 + eps^2), then takes the polar
/// factor of X^T Y. Rows with zero projection keep a zero subgradient. The
/// trace holds the eps-regularized objective.
SolverReport solve_robust_primal(const Matrix& x, const RobustConfig& cfg,
                                 const std::optional<Matrix>& init = std::nullopt);

/// Kernelized dual DCA: whiten K H by the inner eigendecomposition, then
/// rescale row i by 1/sqrt(K_ii - ||Y_i||^2 + eps^2). Throws
/// SingularInnerMatrix when H^T K H loses rank.
SolverReport solve_robust_dual(const Matrix& k, const RobustConfig& cfg,
                               const std::optional<Matrix>& init = std::nullopt);

/// Iteratively reweighted least squares: weights beta_i = max(residual_i, eps),
/// inner problem solved exactly by the dense eigendecomposition of
/// X^T diag(1/beta) X. The trace holds the eps-floored (Huber) surrogate,
/// which the scheme decreases exactly.
SolverReport solve_robust_irls(const Matrix& x, const RobustConfig& cfg,
                               const std::optional<Matrix>& init = std::nullopt);

}  // namespace pcadc
