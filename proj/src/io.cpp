#include "pcadc/io.hpp"

#include <cctype>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <vector>

namespace pcadc {

namespace {

constexpr char kMagic[5] = {'P', 'C', 'A', 'D', 'C'};
constexpr std::uint8_t kVersion = 1;

void write_u32(std::ofstream& out, std::uint32_t v) {
  unsigned char buf[4];
  for (int i = 0; i < 4; ++i) buf[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xFF);
  out.write(reinterpret_cast<const char*>(buf), 4);
}

std::uint32_t read_u32(std::ifstream& in) {
  unsigned char buf[4];
  in.read(reinterpret_cast<char*>(buf), 4);
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(buf[i]) << (8 * i);
  return v;
}

void write_f64(std::ofstream& out, double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, 8);
  unsigned char buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<unsigned char>((bits >> (8 * i)) & 0xFF);
  out.write(reinterpret_cast<const char*>(buf), 8);
}

double read_f64(std::ifstream& in) {
  unsigned char buf[8];
  in.read(reinterpret_cast<char*>(buf), 8);
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
  double v;
  std::memcpy(&v, &bits, 8);
  return v;
}

void write_row_major(std::ofstream& out, const Matrix& m) {
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) write_f64(out, m(i, j));
  }
}

Matrix read_row_major(std::ifstream& in, Index rows, Index cols) {
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) m(i, j) = read_f64(in);
  }
  return m;
}

}  // namespace

Matrix read_matrix_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("read_matrix_csv: cannot open " + path);

  std::vector<std::vector<double>> rows;
  std::string line;
  Index line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<double> row;
    std::size_t pos = 0;
    while (pos <= line.size()) {
      const std::size_t next = line.find(',', pos);
      const std::string cell =
          line.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
      std::size_t used = 0;
      double value = 0.0;
      try {
        value = std::stod(cell, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      // trailing whitespace is fine, anything else is a parse error
      while (used < cell.size() && std::isspace(static_cast<unsigned char>(cell[used]))) ++used;
      if (used != cell.size() || cell.empty()) {
        throw InvalidInput("read_matrix_csv: parse error at line " + std::to_string(line_no) +
                           ", column " + std::to_string(pos + 1) + " of " + path);
      }
      row.push_back(value);
      if (next == std::string::npos) break;
      pos = next + 1;
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw InvalidInput("read_matrix_csv: ragged row at line " + std::to_string(line_no) +
                         " of " + path);
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw InvalidInput("read_matrix_csv: " + path + " is empty");

  Matrix m(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  }
  return m;
}

void write_matrix_csv(const std::string& path, const Matrix& m) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("write_matrix_csv: cannot open " + path);
  char buf[40];
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", m(i, j));
      out << buf;
      if (j + 1 < m.cols()) out << ',';
    }
    out << '\n';
  }
  if (!out) throw InvalidInput("write_matrix_csv: write failed for " + path);
}

void save_oos_projector(const std::string& path, const OosProjector& projector) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("save_oos_projector: cannot open " + path);
  out.write(kMagic, 5);
  out.put(static_cast<char>(kVersion));
  out.put(projector.spec.kind == KernelSpec::Kind::Linear ? '\0' : '\1');
  write_f64(out, projector.spec.gamma);
  write_u32(out, static_cast<std::uint32_t>(projector.coeffs.rows()));
  write_u32(out, static_cast<std::uint32_t>(projector.coeffs.cols()));
  write_u32(out, static_cast<std::uint32_t>(projector.train.cols()));
  write_row_major(out, projector.coeffs);
  write_row_major(out, projector.train);
  if (!out) throw InvalidInput("save_oos_projector: write failed for " + path);
}

OosProjector load_oos_projector(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("load_oos_projector: cannot open " + path);
  char magic[5];
  in.read(magic, 5);
  if (!in || std::memcmp(magic, kMagic, 5) != 0) {
    throw InvalidInput("load_oos_projector: bad magic in " + path);
  }
  const int version = in.get();
  if (version != kVersion) throw InvalidInput("load_oos_projector: unsupported version");
  const int kind = in.get();
  const double gamma = read_f64(in);
  const auto s = static_cast<Index>(read_u32(in));
  const auto n = static_cast<Index>(read_u32(in));
  const auto d = static_cast<Index>(read_u32(in));
  if (!in || s < 1 || n < 1 || d < 1) throw InvalidInput("load_oos_projector: corrupt header");

  OosProjector projector;
  projector.spec = kind == 0 ? KernelSpec::linear() : KernelSpec::rbf(gamma);
  projector.coeffs = read_row_major(in, s, n);
  projector.train = read_row_major(in, n, d);
  if (!in) throw InvalidInput("load_oos_projector: truncated file " + path);
  return projector;
}

}  // namespace pcadc
