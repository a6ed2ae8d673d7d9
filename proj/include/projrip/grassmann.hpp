#pragma once

#include "projrip/matops.hpp"
#include "projrip/random.hpp"

namespace projrip {

/// A point on Gr_{N,s}, represented by an orthonormal N x s basis.
class Subspace {
 public:
  /// Adopts `basis` as is; it must satisfy basis^T basis = I within tol::ortho.
  static Subspace from_orthonormal(Matrix basis);
  /// Orthonormalizes the columns of any full-column-rank X.
  static Subspace span_of(const Matrix& x);

  Eigen::Index n() const { return basis_.rows(); }
  Eigen::Index s() const { return basis_.cols(); }
  const Matrix& basis() const { return basis_; }

 private:
  explicit Subspace(Matrix basis) : basis_(std::move(basis)) {}
  Matrix basis_;
};

/// Throws BadDimensions unless 1 <= s < n.
void check_dimensions(Eigen::Index n, Eigen::Index s);

/// Symmetric idempotent N x N matrix of rank s.
class ProjectionMatrix {
 public:
  explicit ProjectionMatrix(const Subspace& subspace);

  /// Validates an arbitrary matrix against the projection invariants
  /// (throws NotProjection) and infers its rank from the trace.
  static ProjectionMatrix from_matrix(const Matrix& p);

  Eigen::Index n() const { return mat_.rows(); }
  Eigen::Index s() const { return rank_; }
  const Matrix& mat() const { return mat_; }

 private:
  ProjectionMatrix(Matrix mat, Eigen::Index rank) : mat_(std::move(mat)), rank_(rank) {}
  Matrix mat_;
  Eigen::Index rank_;
};

/// Haar-uniform subspace: QR of an N x s standard Gaussian draw.
Subspace sample_uniform_subspace(Eigen::Index n, Eigen::Index s, const Seed& seed);
Subspace sample_uniform_subspace(Eigen::Index n, Eigen::Index s, Rng& rng);

inline ProjectionMatrix projection_matrix(const Subspace& subspace) {
  return ProjectionMatrix(subspace);
}

/// X_perp with [X, X_perp] orthogonal.
Subspace orthonormal_complement(const Subspace& subspace);

/// d_p = sqrt(0.5 * ||P - Q||_F^2).
double projection_distance(const ProjectionMatrix& p, const ProjectionMatrix& q);

/// ||P - I/2||_F for a point of P_{2,1}; every such point sits at 1/sqrt(2).
double circle_characterization_check(const ProjectionMatrix& p);

/// Deviations of P from each projection-matrix identity.
struct ProjectionResiduals {
  double symmetry;       // ||P - P^T||_F
  double idempotence;    // ||P^2 - P||_F
  double trace;          // |tr P - s|
  double eigenvalues;    // max distance of an eigenvalue from {0, 1}
  double norm;           // | ||P||_F - sqrt(s) |

  double worst() const;
};

ProjectionResiduals projection_residuals(const Matrix& p, Eigen::Index s);

}  // namespace projrip
