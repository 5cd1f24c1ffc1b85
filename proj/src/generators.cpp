#include "pcadc/generators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "pcadc/rng.hpp"

namespace pcadc {

namespace {

Matrix gaussian_matrix(Index rows, Index cols, Rng& rng) {
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) m(i, j) = rng.normal();
  }
  return m;
}

// Orthonormal basis from the QR of a Gaussian draw, diag(R) > 0 so the
// distribution is Haar.
Matrix random_orthonormal(Index rows, Index cols, Rng& rng) {
  Matrix g = gaussian_matrix(rows, cols, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    if (qr.matrixQR()(j, j) < 0.0) q.col(j) = -q.col(j);
  }
  return q;
}

}  // namespace

DataMatrix gen_gaussian(Index n_samples, Index n_features, std::uint64_t seed) {
  if (n_samples < 1 || n_features < 1) throw InvalidInput("gen_gaussian: empty shape");
  Rng rng(Rng::derive(seed, 0x6A55));
  return DataMatrix{gaussian_matrix(n_samples, n_features, rng)};
}

DataMatrix gen_fixed_spectrum(Index n_samples, Index n_features, const Vector& spectrum,
                              std::uint64_t seed) {
  if (n_samples < 1 || n_features < 1) throw InvalidInput("gen_fixed_spectrum: empty shape");
  const Index r = spectrum.size();
  if (r < 1 || r > std::min(n_samples, n_features)) {
    throw InvalidInput("gen_fixed_spectrum: spectrum length must be in [1, min(N, d)]");
  }
  for (Index i = 0; i < r; ++i) {
    if (!(spectrum(i) > 0.0)) throw InvalidInput("gen_fixed_spectrum: spectrum must be positive");
    if (i > 0 && spectrum(i) > spectrum(i - 1)) {
      throw InvalidInput("gen_fixed_spectrum: spectrum must be nonincreasing");
    }
  }
  Rng rng(Rng::derive(seed, 0xF1E0));
  const Matrix u = random_orthonormal(n_samples, r, rng);
  const Matrix v = random_orthonormal(n_features, r, rng);
  return DataMatrix{u * spectrum.asDiagonal() * v.transpose()};
}

std::pair<DataMatrix, std::vector<bool>> contaminate(const DataMatrix& x, double fraction,
                                                     double noise_sigma, std::uint64_t seed) {
  if (!(fraction >= 0.0 && fraction <= 1.0)) {
    throw InvalidInput("contaminate: fraction must be in [0, 1]");
  }
  if (!(noise_sigma > 0.0)) throw InvalidInput("contaminate: noise_sigma must be positive");

  const Index n = x.n_samples();
  const Index count = static_cast<Index>(std::floor(fraction * static_cast<double>(n)));
  std::vector<bool> mask(static_cast<std::size_t>(n), false);
  DataMatrix out{x.values};
  if (count == 0) return {std::move(out), std::move(mask)};

  Rng rng(Rng::derive(seed, 0xC047));
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  for (Index i = 0; i < count; ++i) {
    const Index j = i + static_cast<Index>(rng.next_u64() % static_cast<std::uint64_t>(n - i));
    std::swap(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(j)]);
  }
  for (Index i = 0; i < count; ++i) {
    const Index row = order[static_cast<std::size_t>(i)];
    mask[static_cast<std::size_t>(row)] = true;
    for (Index j = 0; j < out.values.cols(); ++j) {
      out.values(row, j) += noise_sigma * rng.normal();
    }
  }
  return {std::move(out), std::move(mask)};
}

}  // namespace pcadc
