#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "pcadc/linalg.hpp"

namespace pcadc {

/// The catalogued DC formulations. L through Q are the three dual pairs
/// (spectral-ball variance pair, the norm pair, and the squared-norm pair);
/// the Hoelder pair trades the fourth Schatten power against the variance
/// term. L, N, P and HolderPrimal live in coefficient space (variable W,
/// d x s); the rest live in sample space (variable H, N x s).
enum class Formulation {
  L,             // min -(1/2)||XW||_F^2         s.t. ||W||_{S_inf} <= 1
  M,             // min (1/2)||H||_F^2 - ||X^T H||_{S_1}
  N,             // min -||XW||_F                s.t. ||W||_{S_inf} <= 1
  O,             // min -||X^T H||_{S_1}         s.t. ||H||_F <= 1
  P,             // min (1/2)||W||_{S_inf}^2 - ||XW||_F
  Q,             // min -(1/2)||X^T H||_{S_1}^2  s.t. ||H||_F <= 1
  HolderPrimal,  // min (1/4)||W||_{S_4}^4 - (1/2)||XW||_F^2
  HolderDual,    // min (1/2)||H||_F^2 - (3/4)||X^T H||_{S_{4/3}}^{4/3}
};

enum class Stopping {
  RelObjChange,     // |f_k - f_{k-1}| / max(1, |f_{k-1}|) < tol
  SubspaceAngle,    // largest principal angle between consecutive spans < tol
  RelErrToReference // |f_k - ref| / max(1e-300, |ref|) < tol
};

enum class Termination { Converged, MaxIters };

struct SolverConfig {
  int components = 1;      // s
  double tol = 1e-8;
  int max_iters = 500;
  std::uint64_t seed = 0;
  double stepsize = 1.0;   // proximal gradient only; any positive value is valid
  Stopping stopping = Stopping::RelObjChange;
  double reference = std::numeric_limits<double>::quiet_NaN();  // RelErrToReference target
};

struct SolverReport {
  Matrix variable;                     // converged W (d x s) or H (N x s)
  std::vector<double> objective_trace; // nonincreasing for every DC solver
  int iterations = 0;
  double wall_time_s = 0.0;
  Termination termination = Termination::MaxIters;

  double final_objective() const { return objective_trace.back(); }
};

// -- Objective catalogue ------------------------------------------------

/// DC objective of the named formulation evaluated from the data matrix.
/// Constraint violations return +infinity.
double objective(Formulation form, const Matrix& x, const Matrix& variable);

/// Kernelized objective for the sample-space formulations (M, O, Q,
/// HolderDual): singular values of X^T H are read off H^T K H.
double objective_kernel(Formulation form, const Matrix& k, const Matrix& h);

/// -(1/2) * sum of the top-s squared singular values: the optimal value of
/// the spectral-ball variance formulation.
double optimal_value_reference(const Matrix& x, int components);

/// Optimal value of any catalogued formulation, from the top-s spectrum.
double formulation_optimum(Formulation form, const Matrix& x, int components);

struct DensePcaSolution {
  Matrix basis;   // d x s orthonormal top eigenvectors of X^T X
  Vector values;  // top-s squared singular values, nonincreasing
};

/// Exact reference solution by full symmetric eigendecomposition of X^T X.
DensePcaSolution dense_pca_oracle(const Matrix& x, int components);

/// Maps a primal optimizer through the subgradient of the concave part,
/// H* in dF(X W*), producing a dual optimizer of the paired formulation.
Matrix dual_from_primal(Formulation primal_form, const Matrix& x, const Matrix& w);

/// Maps a dual optimizer back, W* in dG*(X^T H*).
Matrix primal_from_dual(Formulation primal_form, const Matrix& x, const Matrix& h);

// -- Single iterate updates (exposed for per-iteration invariants) ------

/// Variance-maximization DCA update: polar factor of M * V. Serves both the
/// coefficient-space iteration (M = X^T X) and the kernel iteration (M = K).
Matrix dca_variance_step(const Matrix& m, const Matrix& v);

/// Hoelder-pair primal update: U * Sigma^(1/3) * V^T of X^T X W.
Matrix dca_holder_primal_step(const Matrix& xtx, const Matrix& w);

/// Hoelder-pair dual update: K H V Lambda^(-1/3) V^T from the s x s
/// eigendecomposition of H^T K H. Throws SingularInnerMatrix on rank loss.
Matrix dca_holder_dual_step(const Matrix& k, const Matrix& h);

/// One kernelized DCA update for the named formulation (the six catalogued
/// sample-space iterations).
Matrix kernel_dual_step(Formulation form, const Matrix& k, const Matrix& h);

// -- Solvers -------------------------------------------------------------

using SymmetricMap = std::function<Matrix(const Matrix&)>;

SolverReport solve_dca_variance_primal(const Matrix& x, const SolverConfig& cfg,
                                       const std::optional<Matrix>& init = std::nullopt);

SolverReport solve_dca_variance_dual(const Matrix& k, const SolverConfig& cfg,
                                     const std::optional<Matrix>& init = std::nullopt);

SolverReport solve_dca_holder_primal(const Matrix& x, const SolverConfig& cfg,
                                     const std::optional<Matrix>& init = std::nullopt);

SolverReport solve_dca_holder_dual(const Matrix& k, const SolverConfig& cfg,
                                   const std::optional<Matrix>& init = std::nullopt);

/// Kernelized DCA for formulations L through Q. Each run descends the
/// sample-space DC objective its iteration targets; the traced objective
/// converges to formulation_optimum of the same formulation.
SolverReport kernel_dual_iteration(Formulation form, const Matrix& k, const SolverConfig& cfg,
                                   const std::optional<Matrix>& init = std::nullopt);

/// Block power method with QR re-orthonormalization applied to a symmetric
/// operator of the given dimension. Traces the Rayleigh objective
/// -(1/2) tr(Q^T M Q).
SolverReport simultaneous_iteration(const SymmetricMap& apply, Index dim, const SolverConfig& cfg,
                                    const std::optional<Matrix>& init = std::nullopt);

/// Projected subgradient ascent on the concave part of the indicator-
/// constrained formulations L, N, O, Q. Any positive stepsize descends.
SolverReport proximal_gradient(Formulation form, const Matrix& x, const SolverConfig& cfg,
                               const std::optional<Matrix>& init = std::nullopt);

/// Kernel-side proximal gradient for the sample-space formulations O and Q.
SolverReport proximal_gradient_kernel(Formulation form, const Matrix& k, const SolverConfig& cfg,
                                      const std::optional<Matrix>& init = std::nullopt);

// -- Projections and postprocessing --------------------------------------

/// Nearest matrix in the spectral unit ball: singular values clipped at one.
Matrix project_spectral_ball(const Matrix& w);

/// Nearest matrix in the Frobenius unit ball.
Matrix project_frobenius_ball(const Matrix& h);

/// Rotates an orthonormal W into eigenvector order by an s x s
/// eigendecomposition of W^T X^T X W.
Matrix rotate_to_eigenbasis(const Matrix& x, const Matrix& w);

/// Seeded Gaussian matrix used for solver initialization.
Matrix gaussian_init(Index rows, Index cols, std::uint64_t seed);

}  // namespace pcadc
