#pragma once

// Dense linear-algebra substrate. Storage is Eigen; the contracts below
// (sign conventions, tolerances, error conditions) are what the rest of the
// library relies on.

#include <Eigen/Dense>

#include "projrip/error.hpp"

namespace projrip {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

namespace tol {
inline constexpr double ortho = 1e-10;
inline constexpr double rank = 1e-10;
inline constexpr double sym = 1e-12;
inline constexpr double eig = 1e-9;
}  // namespace tol

/// Throws NonFinite if any entry is NaN or infinite.
void require_finite(const Matrix& a, const char* what);

/// Orthonormal basis of span(A) with the R-diagonal made nonnegative, so the
/// output is a deterministic function of A. Throws RankDeficient when some
/// |R_ii| falls below tol::rank * max(1, ||A||_F).
Matrix qr_orthonormalize(const Matrix& a);

/// Orthonormal completion: columns s..N-1 of the full Householder Q of A.
/// A must already have orthonormal columns.
Matrix orthonormal_completion(const Matrix& a);

struct SymEig {
  Vector values;   // descending
  Matrix vectors;  // columns match `values`
};

/// Symmetric eigendecomposition with eigenvalues sorted descending.
/// Throws NotSymmetric if ||S - S^T||_F > tol::sym * ||S||_F.
SymEig sym_eig(const Matrix& s);

double frobenius_norm(const Matrix& a);
double frobenius_inner(const Matrix& a, const Matrix& b);

inline Matrix sym_part(const Matrix& a) { return 0.5 * (a + a.transpose()); }

bool is_symmetric(const Matrix& a, double rel_tol = tol::sym);

}  // namespace projrip
