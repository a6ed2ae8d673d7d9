#include "projrip/matops.hpp"

#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

namespace projrip {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::NotSymmetric: return "NotSymmetric";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::BadDimensions: return "BadDimensions";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::DegeneratePair: return "DegeneratePair";
    case ErrorCode::Unsatisfiable: return "Unsatisfiable";
    case ErrorCode::BadFormat: return "BadFormat";
    case ErrorCode::NotProjection: return "NotProjection";
  }
  return "Unknown";
}

void require_finite(const Matrix& a, const char* what) {
  if (!a.allFinite()) throw Error(ErrorCode::NonFinite, std::string(what) + " has NaN/Inf entries");
}

Matrix qr_orthonormalize(const Matrix& a) {
  require_finite(a, "qr_orthonormalize input");
  const auto n = a.rows();
  const auto s = a.cols();
  if (s == 0 || s > n)
    throw Error(ErrorCode::RankDeficient,
                "cannot orthonormalize " + std::to_string(n) + "x" + std::to_string(s));

  Eigen::HouseholderQR<Matrix> qr(a);
  const Matrix r = qr.matrixQR().topRows(s).triangularView<Eigen::Upper>();
  const double floor = tol::rank * std::max(1.0, a.norm());
  Matrix q = qr.householderQ() * Matrix::Identity(n, s);
  for (Eigen::Index j = 0; j < s; ++j) {
    const double d = r(j, j);
    if (std::abs(d) <= floor)
      throw Error(ErrorCode::RankDeficient, "column " + std::to_string(j) + " is dependent");
    if (d < 0) q.col(j) *= -1.0;
  }
  return q;
}

Matrix orthonormal_completion(const Matrix& a) {
  const auto n = a.rows();
  const auto s = a.cols();
  Eigen::HouseholderQR<Matrix> qr(a);
  Matrix full = qr.householderQ();
  return full.rightCols(n - s);
}

SymEig sym_eig(const Matrix& s) {
  require_finite(s, "sym_eig input");
  if (s.rows() != s.cols())
    throw Error(ErrorCode::ShapeMismatch, "sym_eig needs a square matrix");
  if (!is_symmetric(s))
    throw Error(ErrorCode::NotSymmetric, "asymmetry exceeds tolerance");

  // Eigen reads only the lower triangle; feed it the symmetric part.
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym_part(s));
  const auto n = s.rows();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index i, Eigen::Index j) {
    return solver.eigenvalues()(i) > solver.eigenvalues()(j);
  });

  SymEig out{Vector(n), Matrix(n, n)};
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values(k) = solver.eigenvalues()(order[static_cast<std::size_t>(k)]);
    out.vectors.col(k) = solver.eigenvectors().col(order[static_cast<std::size_t>(k)]);
  }
  return out;
}

double frobenius_norm(const Matrix& a) { return a.norm(); }

double frobenius_inner(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw Error(ErrorCode::ShapeMismatch, "frobenius_inner operands differ in shape");
  return a.cwiseProduct(b).sum();
}

bool is_symmetric(const Matrix& a, double rel_tol) {
  if (a.rows() != a.cols()) return false;
  return (a - a.transpose()).norm() <= rel_tol * a.norm();
}

}  // namespace projrip
