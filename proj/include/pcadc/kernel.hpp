#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "pcadc/linalg.hpp"

namespace pcadc {

struct KernelSpec {
  enum class Kind { Linear, Rbf };

  Kind kind = Kind::Linear;
  double gamma = 0.0;  // Rbf length-scale parameter, > 0

  static KernelSpec linear() { return {}; }
  static KernelSpec rbf(double gamma);
};

/// Dense Gram matrix. Linear gives X X^T; Rbf gives exp(-gamma ||x_i - x_j||^2).
Matrix kernel_matrix(const Matrix& x, const KernelSpec& spec);

/// Low-rank kernel approximation K ~ F F^T from a seeded pivot subset.
/// A singular pivot core is regularized with a small jitter and flagged.
struct NystromFactor {
  Matrix factor;               // N x m, K_hat = factor * factor^T
  std::vector<Index> pivots;   // selected row indices
  bool jittered = false;
  double jitter = 0.0;

  Matrix apply(const Matrix& h) const { return factor * (factor.transpose() * h); }
  Matrix materialize() const { return factor * factor.transpose(); }
};

NystromFactor nystrom(const Matrix& x, const KernelSpec& spec, Index pivots, std::uint64_t seed);

/// Subgradient selection mu in dg*(sqrt(lambda)) used by the projector.
using MuRule = std::function<Vector(const Vector&)>;

/// The l1-norm selection (all ones at positive arguments): the rule for every
/// spectral-ball-constrained formulation, robust included.
Vector nuclear_mu_rule(const Vector& sqrt_lambda);

/// Precomputed out-of-sample map: scores of a new point x are
/// coeffs * (k(X_1, x), ..., k(X_N, x))^T, where
/// coeffs = V diag(mu .* lambda^(-1/2)) V^T H*^T is built once from a dual
/// minimizer H* with nonsingular H*^T K H*.
struct OosProjector {
  Matrix coeffs;  // s x N
  KernelSpec spec;
  Matrix train;   // retained training rows for kernel evaluations

  /// For linear kernels, folds coeffs * X into an s x d matrix so the
  /// training data can be dropped.
  Matrix linear_fold() const;
};

OosProjector build_oos_projector(const Matrix& h_star, const Matrix& k, const MuRule& mu_rule,
                                 const KernelSpec& spec, const Matrix& x,
                                 double rank_tol = kDefaultRankTol);

/// Length-s feature vector of one new point.
Vector project_point(const OosProjector& projector, const Vector& x_new);

/// Scores of many points at once, one row per input row.
Matrix project_rows(const OosProjector& projector, const Matrix& x_new);

/// Subtracts the per-column mean (optional preprocessing, off by default
/// everywhere).
Matrix center_columns(const Matrix& x);

}  // namespace pcadc
