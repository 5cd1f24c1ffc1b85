#pragma once

#include <functional>

#include "pcadc/linalg.hpp"

namespace pcadc {

/// Closed-form catalogue of the convex matrix functions the DC solvers are
/// built from. All kinds except the two rowwise penalties are unitarily
/// invariant (functions of the singular values alone).
enum class SpectralKind {
  IndicatorSpectralBall,     // indicator of { sigma_max(A) <= 1 }
  SchattenNorm,              // ||A||_{S_p}, p in [1, inf]
  SchattenPowerScaled,       // (1/p) ||A||_{S_p}^p, p in (1, inf)
  SpectralNormSqHalf,        // (1/2) sigma_max(A)^2
  NuclearNormSqHalf,         // (1/2) ||A||_{S_1}^2
  FrobeniusSqHalf,           // (1/2) ||A||_F^2
  FrobeniusNorm,             // ||A||_F
  IndicatorFrobeniusBall,    // indicator of { ||A||_F <= 1 }
  RowwiseBallPenalty,        // sum_i -sqrt(c_i^2 + eps^2 - ||A_i||^2) on its row-ball domain
  RowwiseHyperbolicPenalty,  // sum_i sqrt(c_i^2 + eps^2) * sqrt(1 + ||A_i||^2)
  RowwiseSqrtPenalty,        // sum_i sqrt(max(c_i^2 - ||A_i||^2, 0)); objective evaluator only
};

/// Symbolic descriptor of one catalogue entry. Immutable once built.
struct SpectralFunction {
  SpectralKind kind{};
  double p = 0.0;            // SchattenNorm / SchattenPowerScaled only
  double coefficient = 0.0;  // 1/p for SchattenPowerScaled
  Vector row_norms;          // rowwise kinds only; all positive
  double epsilon = 0.0;      // rowwise regularizer, >= 0

  static SpectralFunction indicator_spectral_ball();
  static SpectralFunction schatten_norm(double p);
  static SpectralFunction schatten_power_scaled(double p);
  static SpectralFunction spectral_norm_sq_half();
  static SpectralFunction nuclear_norm_sq_half();
  static SpectralFunction frobenius_sq_half();
  static SpectralFunction frobenius_norm();
  static SpectralFunction indicator_frobenius_ball();
  static SpectralFunction rowwise_ball_penalty(Vector row_norms, double epsilon);
  static SpectralFunction rowwise_hyperbolic_penalty(Vector row_norms, double epsilon);
  static SpectralFunction rowwise_sqrt_penalty(Vector row_norms);

  bool operator==(const SpectralFunction& other) const;
};

/// Function value; +infinity when A violates an indicator domain
/// (constraint tolerance 1e-9).
double evaluate(const SpectralFunction& fn, const Matrix& a);

/// Closed-form convex conjugate. Throws NotInTable outside the catalogue.
SpectralFunction conjugate(const SpectralFunction& fn);

/// One deterministic element of the subdifferential at `a`. Selections:
/// nuclear norm takes the orthonormal polar factor, norms vanish to zero at
/// the origin, powered Schatten norms take U * Sigma^(p-1) * V^T, and the
/// rowwise ball penalty divides each row by its regularized residual.
Matrix subgradient(const SpectralFunction& fn, const Matrix& a, double rank_tol = kDefaultRankTol);

/// evaluate(fn, A) + evaluate(fn*, H) - <A, H>. Nonnegative, and zero exactly
/// when H is a subgradient of fn at A.
double fenchel_young_gap(const SpectralFunction& fn, const Matrix& a, const Matrix& h);

using LinearMap = std::function<Matrix(const Matrix&)>;

/// One difference-of-convex step for min G(W) - F(XW):
///   H = subgradient(F, X W),  W' = subgradient(G*, X^T H).
/// The linear map and its adjoint are passed as callables so the same step
/// serves the data matrix, its transpose, and factored kernel operators.
Matrix dca_step(const SpectralFunction& g_fn, const SpectralFunction& f_fn,
                const LinearMap& apply_x, const LinearMap& apply_xt, const Matrix& w,
                double rank_tol = kDefaultRankTol);

}  // namespace pcadc
