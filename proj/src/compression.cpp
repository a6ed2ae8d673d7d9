#include "projrip/compression.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

namespace projrip {

namespace {

constexpr std::array<char, 8> kMagic{'P', 'R', 'J', 'R', 'I', 'P', '0', '1'};

void put_u64(std::ostream& out, std::uint64_t v) {
  std::array<char, 8> bytes;
  for (int i = 0; i < 8; ++i) bytes[static_cast<std::size_t>(i)] = static_cast<char>((v >> (8 * i)) & 0xFF);
  out.write(bytes.data(), bytes.size());
}

std::uint64_t get_u64(std::istream& in) {
  std::array<unsigned char, 8> bytes{};
  if (!in.read(reinterpret_cast<char*>(bytes.data()), bytes.size()))
    throw Error(ErrorCode::BadFormat, "truncated operator file");
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | bytes[static_cast<std::size_t>(i)];
  return v;
}

}  // namespace

const char* to_string(OperatorKind kind) noexcept {
  return kind == OperatorKind::Orthoprojector ? "orthoprojector" : "gaussian";
}

OperatorKind parse_operator_kind(const std::string& name) {
  if (name == "orthoprojector") return OperatorKind::Orthoprojector;
  if (name == "gaussian") return OperatorKind::Gaussian;
  throw Error(ErrorCode::BadFormat, "unknown operator kind '" + name + "'");
}

Vector vectorize(const Matrix& m) {
  if (m.rows() != m.cols()) throw Error(ErrorCode::ShapeMismatch, "vectorize needs a square matrix");
  return m.reshaped();
}

CompressionOperator::CompressionOperator(OperatorKind kind, Eigen::Index n, Matrix rows, Seed seed)
    : kind_(kind), n_(n), rows_(std::move(rows)), seed_(seed) {
  if (n_ < 1 || rows_.cols() != n_ * n_ || rows_.rows() < 1)
    throw Error(ErrorCode::ShapeMismatch, "operator rows must be m x N^2");
  require_finite(rows_, "operator rows");
}

Vector CompressionOperator::apply(const Matrix& m) const {
  if (m.rows() != n_ || m.cols() != n_)
    throw Error(ErrorCode::ShapeMismatch, "operand must be N x N");
  return rows_ * m.reshaped();
}

double CompressionOperator::centering() const {
  return std::sqrt(static_cast<double>(m())) / static_cast<double>(n_);
}

CompressionOperator random_orthoprojector(Eigen::Index m, Eigen::Index n, const Seed& seed) {
  if (n < 1 || m < 1 || m >= n * n)
    throw Error(ErrorCode::BadDimensions, "orthoprojector needs 1 <= m < N^2");
  Rng rng(seed);
  Matrix q = qr_orthonormalize(rng.gaussian(n * n, m));
  return CompressionOperator(OperatorKind::Orthoprojector, n, q.transpose(), seed);
}

CompressionOperator gaussian_ensemble(Eigen::Index m, Eigen::Index n, const Seed& seed) {
  if (n < 1 || m < 1) throw Error(ErrorCode::BadDimensions, "gaussian ensemble needs m, N >= 1");
  Rng rng(seed);
  return CompressionOperator(OperatorKind::Gaussian, n,
                             rng.gaussian(m, n * n, 1.0 / static_cast<double>(n)), seed);
}

CompressionOperator make_operator(OperatorKind kind, Eigen::Index m, Eigen::Index n, const Seed& seed) {
  return kind == OperatorKind::Orthoprojector ? random_orthoprojector(m, n, seed)
                                              : gaussian_ensemble(m, n, seed);
}

void write_operator(std::ostream& out, const CompressionOperator& op) {
  out.write(kMagic.data(), kMagic.size());
  const char kind = static_cast<char>(op.kind());
  out.write(&kind, 1);
  put_u64(out, static_cast<std::uint64_t>(op.m()));
  put_u64(out, static_cast<std::uint64_t>(op.n()));
  for (auto w : op.seed().words) put_u64(out, w);
  for (Eigen::Index i = 0; i < op.rows().rows(); ++i)
    for (Eigen::Index j = 0; j < op.rows().cols(); ++j)
      put_u64(out, std::bit_cast<std::uint64_t>(op.rows()(i, j)));
  if (!out) throw Error(ErrorCode::BadFormat, "failed writing operator");
}

CompressionOperator read_operator(std::istream& in) {
  std::array<char, 8> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != kMagic)
    throw Error(ErrorCode::BadFormat, "bad operator magic");
  char kind_byte = 0;
  if (!in.read(&kind_byte, 1) || (kind_byte != 0 && kind_byte != 1))
    throw Error(ErrorCode::BadFormat, "bad operator kind byte");
  const auto m = get_u64(in);
  const auto n = get_u64(in);
  if (m == 0 || n == 0 || n > (1u << 16) || m > (1u << 24))
    throw Error(ErrorCode::BadFormat, "implausible operator dimensions");
  Seed seed;
  for (auto& w : seed.words) w = get_u64(in);
  const auto cols = static_cast<Eigen::Index>(n * n);
  Matrix rows(static_cast<Eigen::Index>(m), cols);
  for (Eigen::Index i = 0; i < rows.rows(); ++i)
    for (Eigen::Index j = 0; j < cols; ++j) rows(i, j) = std::bit_cast<double>(get_u64(in));
  return CompressionOperator(static_cast<OperatorKind>(kind_byte), static_cast<Eigen::Index>(n),
                             std::move(rows), seed);
}

void save_operator(const std::filesystem::path& path, const CompressionOperator& op) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::BadFormat, "cannot open " + path.string());
  write_operator(out, op);
}

CompressionOperator load_operator(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::BadFormat, "cannot open " + path.string());
  return read_operator(in);
}

}  // namespace projrip
