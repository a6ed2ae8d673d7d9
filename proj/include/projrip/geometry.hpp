#pragma once

#include <cstddef>

#include "projrip/grassmann.hpp"

namespace projrip {

/// Base point X together with its orthonormal complement X_perp.
struct TangentFrame {
  Subspace base;
  Subspace complement;

  static TangentFrame at(const Subspace& x);
};

/// Element X_perp K X^T + X K^T X_perp^T of the tangent space at P_X.
struct TangentVector {
  TangentFrame frame;
  Matrix coeff;    // (N - s) x s
  Matrix ambient;  // N x N, symmetric
};

TangentVector tangent_lift(const TangentFrame& frame, const Matrix& k);
TangentVector tangent_lift(const Subspace& x, const Matrix& k);

/// Frobenius-orthogonal projection onto the tangent space: K = X_perp^T sym(M) X.
TangentVector project_to_tangent(const TangentFrame& frame, const Matrix& m);
TangentVector project_to_tangent(const Subspace& x, const Matrix& m);

/// M minus its tangent component.
Matrix project_to_normal(const TangentFrame& frame, const Matrix& m);
Matrix project_to_normal(const Subspace& x, const Matrix& m);

/// Membership in the orthogonal complement of the tangent space:
/// ||K(M)||_F <= 1e-9 * max(1, ||M||_F).
bool normal_membership_check(const TangentFrame& frame, const Matrix& m);
bool normal_membership_check(const Subspace& x, const Matrix& m);

/// Numerical rank of the lifts of the s(N - s) coordinate matrices E_ij.
Eigen::Index tangent_dimension(const Subspace& x);

/// Canonical pair of subspaces whose normal spaces meet at distance 1/sqrt(2).
struct ReachWitness {
  Subspace x;
  Subspace y;
  ProjectionMatrix px;
  ProjectionMatrix py;
  Matrix phi;
  double dist_x;
  double dist_y;
};

/// X = span(e_1..e_s), Y = span(e_1..e_{s-1}, e_{s+1}),
/// phi = diag(1, .., 1, 1/2, 1/2, 0, .., 0) with the halves at s and s+1.
ReachWitness reach_witness(Eigen::Index n, Eigen::Index s);

/// Minimum over symmetric phi in both normal spaces of
/// max(||phi - P_X||_F, ||phi - P_Y||_F) for one pair.
struct PairProbe {
  double value;
  Matrix phi;
  std::size_t sweeps;
  bool used_fallback;
};

/// Throws NoConvergence when neither the aligned coordinate descent nor the
/// alternating-projection fallback reaches a point in both normal spaces.
PairProbe probe_pair(const Subspace& x, const Subspace& y);

struct ReachProbeResult {
  double minimum;        // smallest per-trial value; the contract is >= 1/sqrt(2) - 1e-6
  std::size_t trials;    // trials attempted
  std::size_t skipped;   // trials that threw NoConvergence
  std::size_t fallbacks; // trials resolved by the fallback path
};

inline constexpr Eigen::Index kReachProbeMaxN = 8;

/// Random-pair search for a normal-bundle intersection closer than 1/sqrt(2).
/// Trial i draws its pair from seed.derive(i).
ReachProbeResult reach_probe(Eigen::Index n, Eigen::Index s, std::size_t trials, const Seed& seed);

}  // namespace projrip
