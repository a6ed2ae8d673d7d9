#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>

#include "projrip/matops.hpp"
#include "projrip/random.hpp"

namespace projrip {

enum class OperatorKind : std::uint8_t { Orthoprojector = 0, Gaussian = 1 };

const char* to_string(OperatorKind kind) noexcept;
OperatorKind parse_operator_kind(const std::string& name);

/// Column-major stacking: entry (i, j) goes to position j * N + i.
Vector vectorize(const Matrix& m);

/// Linear map R^{N x N} -> R^m stored as m rows over vectorize(M).
class CompressionOperator {
 public:
  CompressionOperator(OperatorKind kind, Eigen::Index n, Matrix rows, Seed seed);

  OperatorKind kind() const { return kind_; }
  Eigen::Index m() const { return rows_.rows(); }
  Eigen::Index n() const { return n_; }
  const Matrix& rows() const { return rows_; }
  const Seed& seed() const { return seed_; }

  /// rows * vectorize(M).
  Vector apply(const Matrix& m) const;

  /// sqrt(m) / N: the centering of ||A(Z)||_2 for unit-Frobenius Z.
  double centering() const;

 private:
  OperatorKind kind_;
  Eigen::Index n_;
  Matrix rows_;
  Seed seed_;
};

/// m orthonormal rows: QR of an N^2 x m Gaussian block, transposed.
/// Requires 1 <= m < N^2 (BadDimensions otherwise).
CompressionOperator random_orthoprojector(Eigen::Index m, Eigen::Index n, const Seed& seed);

/// i.i.d. N(0, 1/N^2) entries, so E||A(Z)||^2 = (m / N^2) ||Z||_F^2.
CompressionOperator gaussian_ensemble(Eigen::Index m, Eigen::Index n, const Seed& seed);

CompressionOperator make_operator(OperatorKind kind, Eigen::Index m, Eigen::Index n, const Seed& seed);

// Binary layout, all integers and floats little-endian:
//   "PRJRIP01" | kind (1 byte) | m (u64) | n (u64) | seed (4 x u64) | rows, row-major f64
void write_operator(std::ostream& out, const CompressionOperator& op);
CompressionOperator read_operator(std::istream& in);
void save_operator(const std::filesystem::path& path, const CompressionOperator& op);
CompressionOperator load_operator(const std::filesystem::path& path);

}  // namespace projrip
