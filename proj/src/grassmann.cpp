#include "projrip/grassmann.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace projrip {

void check_dimensions(Eigen::Index n, Eigen::Index s) {
  if (s < 1 || s >= n)
    throw Error(ErrorCode::BadDimensions,
                "need 1 <= s < N, got N=" + std::to_string(n) + " s=" + std::to_string(s));
}

Subspace Subspace::from_orthonormal(Matrix basis) {
  require_finite(basis, "subspace basis");
  check_dimensions(basis.rows(), basis.cols());
  const auto s = basis.cols();
  const double err = (basis.transpose() * basis - Matrix::Identity(s, s)).norm();
  if (err > tol::ortho)
    throw Error(ErrorCode::BadDimensions, "basis is not orthonormal (error " + std::to_string(err) + ")");
  return Subspace(std::move(basis));
}

Subspace Subspace::span_of(const Matrix& x) {
  check_dimensions(x.rows(), x.cols());
  return Subspace(qr_orthonormalize(x));
}

ProjectionMatrix::ProjectionMatrix(const Subspace& subspace)
    : mat_(sym_part(subspace.basis() * subspace.basis().transpose())), rank_(subspace.s()) {}

ProjectionMatrix ProjectionMatrix::from_matrix(const Matrix& p) {
  require_finite(p, "projection matrix");
  if (p.rows() != p.cols()) throw Error(ErrorCode::ShapeMismatch, "projection must be square");
  const auto rank = static_cast<Eigen::Index>(std::lround(p.trace()));
  check_dimensions(p.rows(), rank);
  const auto res = projection_residuals(p, rank);
  if (res.worst() > tol::eig)
    throw Error(ErrorCode::NotProjection, "matrix violates projection identities by " +
                                              std::to_string(res.worst()));
  return ProjectionMatrix(sym_part(p), rank);
}

Subspace sample_uniform_subspace(Eigen::Index n, Eigen::Index s, Rng& rng) {
  check_dimensions(n, s);
  return Subspace::span_of(rng.gaussian(n, s));
}

Subspace sample_uniform_subspace(Eigen::Index n, Eigen::Index s, const Seed& seed) {
  Rng rng(seed);
  return sample_uniform_subspace(n, s, rng);
}

Subspace orthonormal_complement(const Subspace& subspace) {
  return Subspace::from_orthonormal(orthonormal_completion(subspace.basis()));
}

double projection_distance(const ProjectionMatrix& p, const ProjectionMatrix& q) {
  if (p.n() != q.n() || p.s() != q.s())
    throw Error(ErrorCode::ShapeMismatch, "projection_distance needs matching N and s");
  return std::sqrt(0.5) * (p.mat() - q.mat()).norm();
}

double circle_characterization_check(const ProjectionMatrix& p) {
  if (p.n() != 2 || p.s() != 1)
    throw Error(ErrorCode::BadDimensions, "circle characterization applies to P_{2,1} only");
  return (p.mat() - 0.5 * Matrix::Identity(2, 2)).norm();
}

double ProjectionResiduals::worst() const {
  return std::max({symmetry, idempotence, trace, eigenvalues, norm});
}

ProjectionResiduals projection_residuals(const Matrix& p, Eigen::Index s) {
  ProjectionResiduals r{};
  r.symmetry = (p - p.transpose()).norm();
  r.idempotence = (p * p - p).norm();
  r.trace = std::abs(p.trace() - static_cast<double>(s));
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym_part(p), Eigen::EigenvaluesOnly);
  r.eigenvalues = 0.0;
  for (double lambda : solver.eigenvalues())
    r.eigenvalues = std::max(r.eigenvalues, std::min(std::abs(lambda), std::abs(lambda - 1.0)));
  r.norm = std::abs(p.norm() - std::sqrt(static_cast<double>(s)));
  return r;
}

}  // namespace projrip
