#pragma once

#include <string>

#include "pcadc/kernel.hpp"
#include "pcadc/linalg.hpp"

namespace pcadc {

/// Reads a headerless CSV of decimal floats, one sample per row. Throws
/// InvalidInput with line/column context on malformed content.
Matrix read_matrix_csv(const std::string& path);

/// Writes a matrix as headerless CSV with round-trip precision.
void write_matrix_csv(const std::string& path, const Matrix& m);

/// Serialized out-of-sample projector: little-endian binary starting with the
/// magic "PCADC" and a version byte of 1, then kernel kind, gamma, the three
/// dimensions (s, N, d) and the row-major coefficient and training matrices.
void save_oos_projector(const std::string& path, const OosProjector& projector);
OosProjector load_oos_projector(const std::string& path);

}  // namespace pcadc
