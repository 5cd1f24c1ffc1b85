#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "pcadc/linalg.hpp"

namespace pcadc {

/// N x d matrix of independent standard normal entries. Deterministic for a
/// fixed seed (xoshiro256** / Box-Muller, row-major fill).
DataMatrix gen_gaussian(Index n_samples, Index n_features, std::uint64_t seed);

/// A = U diag(spectrum) V^T for seeded random orthonormal U, V. The spectrum
/// must be positive and nonincreasing, with length at most min(N, d).
DataMatrix gen_fixed_spectrum(Index n_samples, Index n_features, const Vector& spectrum,
                              std::uint64_t seed);

/// Adds Gaussian noise of the given sigma to floor(fraction * N) seeded-random
/// rows. The mask flags contaminated rows.
std::pair<DataMatrix, std::vector<bool>> contaminate(const DataMatrix& x, double fraction,
                                                     double noise_sigma, std::uint64_t seed);

}  // namespace pcadc
