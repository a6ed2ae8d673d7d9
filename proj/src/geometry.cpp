#include "projrip/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "projrip/parallel.hpp"

namespace projrip {

TangentFrame TangentFrame::at(const Subspace& x) { return {x, orthonormal_complement(x)}; }

TangentVector tangent_lift(const TangentFrame& frame, const Matrix& k) {
  const auto& x = frame.base.basis();
  const auto& xp = frame.complement.basis();
  if (k.rows() != xp.cols() || k.cols() != x.cols())
    throw Error(ErrorCode::ShapeMismatch, "K must be (N - s) x s");
  const Matrix half = xp * k * x.transpose();
  return {frame, k, half + half.transpose()};
}

TangentVector tangent_lift(const Subspace& x, const Matrix& k) {
  return tangent_lift(TangentFrame::at(x), k);
}

TangentVector project_to_tangent(const TangentFrame& frame, const Matrix& m) {
  const auto n = frame.base.n();
  if (m.rows() != n || m.cols() != n) throw Error(ErrorCode::ShapeMismatch, "M must be N x N");
  const Matrix k = frame.complement.basis().transpose() * sym_part(m) * frame.base.basis();
  return tangent_lift(frame, k);
}

TangentVector project_to_tangent(const Subspace& x, const Matrix& m) {
  return project_to_tangent(TangentFrame::at(x), m);
}

Matrix project_to_normal(const TangentFrame& frame, const Matrix& m) {
  return m - project_to_tangent(frame, m).ambient;
}

Matrix project_to_normal(const Subspace& x, const Matrix& m) {
  return project_to_normal(TangentFrame::at(x), m);
}

bool normal_membership_check(const TangentFrame& frame, const Matrix& m) {
  const double k = project_to_tangent(frame, m).coeff.norm();
  return k <= 1e-9 * std::max(1.0, m.norm());
}

bool normal_membership_check(const Subspace& x, const Matrix& m) {
  return normal_membership_check(TangentFrame::at(x), m);
}

Eigen::Index tangent_dimension(const Subspace& x) {
  const auto frame = TangentFrame::at(x);
  const auto n = x.n();
  const auto s = x.s();
  Matrix span(n * n, (n - s) * s);
  Eigen::Index col = 0;
  for (Eigen::Index j = 0; j < s; ++j) {
    for (Eigen::Index i = 0; i < n - s; ++i) {
      Matrix k = Matrix::Zero(n - s, s);
      k(i, j) = 1.0;
      span.col(col++) = tangent_lift(frame, k).ambient.reshaped();
    }
  }
  Eigen::JacobiSVD<Matrix> svd(span);
  const auto& sv = svd.singularValues();
  const double floor = tol::rank * std::max(1.0, sv.size() ? sv(0) : 0.0);
  return static_cast<Eigen::Index>((sv.array() > floor).count());
}

ReachWitness reach_witness(Eigen::Index n, Eigen::Index s) {
  if (n < 2) throw Error(ErrorCode::BadDimensions, "reach witness needs N >= 2");
  check_dimensions(n, s);

  Matrix xb = Matrix::Zero(n, s);
  Matrix yb = Matrix::Zero(n, s);
  for (Eigen::Index j = 0; j + 1 < s; ++j) {
    xb(j, j) = 1.0;
    yb(j, j) = 1.0;
  }
  xb(s - 1, s - 1) = 1.0;
  yb(s, s - 1) = 1.0;

  Vector eig = Vector::Zero(n);
  for (Eigen::Index j = 0; j + 1 < s; ++j) eig(j) = 1.0;
  eig(s - 1) = 0.5;
  eig(s) = 0.5;

  auto x = Subspace::from_orthonormal(xb);
  auto y = Subspace::from_orthonormal(yb);
  ProjectionMatrix px(x);
  ProjectionMatrix py(y);
  Matrix phi = eig.asDiagonal();
  const double dx = (phi - px.mat()).norm();
  const double dy = (phi - py.mat()).norm();
  return {std::move(x), std::move(y), std::move(px), std::move(py), std::move(phi), dx, dy};
}

namespace {

constexpr double kAngleTol = 1e-7;
constexpr std::size_t kMaxSweeps = 200;
constexpr double kSweepTol = 1e-10;

double pair_value(const Matrix& phi, const Matrix& px, const Matrix& py) {
  return std::max((phi - px).norm(), (phi - py).norm());
}

// Exact minimizer of max(q1, q2) for q_i(t) = a t^2 + 2 b_i t + c_i, a > 0.
double argmin_max_quadratics(double a, double b1, double c1, double b2, double c2) {
  auto q = [&](double t) {
    return std::max(a * t * t + 2 * b1 * t + c1, a * t * t + 2 * b2 * t + c2);
  };
  std::vector<double> candidates{-b1 / a, -b2 / a};
  const double slope = 2 * (b1 - b2);
  if (std::abs(slope) > std::numeric_limits<double>::min()) candidates.push_back(-(c1 - c2) / slope);
  double best = candidates.front();
  for (double t : candidates)
    if (q(t) < q(best)) best = t;
  return best;
}

// Shared eigenstructure of P_X and P_Y. Symmetric matrices commuting with
// both are scalar on each principal plane and free on the common and
// mutually orthogonal directions; each group below carries one scalar.
std::vector<Matrix> aligned_groups(const Subspace& x, const Subspace& y) {
  const auto n = x.n();
  Eigen::JacobiSVD<Matrix> svd(x.basis().transpose() * y.basis(),
                               Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Matrix xv = x.basis() * svd.matrixU();
  const Matrix yv = y.basis() * svd.matrixV();

  std::vector<Matrix> groups;
  Matrix collected(n, 0);
  auto append = [&](const Vector& v) {
    collected.conservativeResize(Eigen::NoChange, collected.cols() + 1);
    collected.col(collected.cols() - 1) = v;
  };

  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) {
    const double c = std::clamp(svd.singularValues()(i), 0.0, 1.0);
    const double theta = std::acos(c);
    const Vector xi = xv.col(i);
    const Vector yi = yv.col(i);
    if (theta < kAngleTol) {
      groups.push_back(xi * xi.transpose());
      append(xi);
    } else if (theta > std::numbers::pi / 2 - kAngleTol) {
      groups.push_back(xi * xi.transpose());
      groups.push_back(yi * yi.transpose());
      append(xi);
      append(yi);
    } else {
      const Vector w = (yi - c * xi).normalized();
      groups.push_back(xi * xi.transpose() + w * w.transpose());
      append(xi);
      append(w);
    }
  }

  if (collected.cols() < n) {
    const Matrix rest = orthonormal_completion(collected);
    for (Eigen::Index j = 0; j < rest.cols(); ++j) {
      const Vector v = rest.col(j);
      groups.push_back(v * v.transpose());
    }
  }
  return groups;
}

}  // namespace

PairProbe probe_pair(const Subspace& x, const Subspace& y) {
  const ProjectionMatrix px(x);
  const ProjectionMatrix py(y);
  const auto fx = TangentFrame::at(x);
  const auto fy = TangentFrame::at(y);
  const auto n = x.n();

  const auto groups = aligned_groups(x, y);
  std::vector<double> lambda(groups.size());
  Matrix phi = Matrix::Zero(n, n);
  for (std::size_t g = 0; g < groups.size(); ++g) {
    const double size = groups[g].trace();
    lambda[g] = 0.5 * (frobenius_inner(groups[g], px.mat()) + frobenius_inner(groups[g], py.mat())) / size;
    phi += lambda[g] * groups[g];
  }

  double value = pair_value(phi, px.mat(), py.mat());
  std::size_t sweep = 0;
  for (; sweep < kMaxSweeps; ++sweep) {
    for (std::size_t g = 0; g < groups.size(); ++g) {
      const Matrix& gm = groups[g];
      const Matrix rest = phi - lambda[g] * gm;
      const Matrix rx = rest - px.mat();
      const Matrix ry = rest - py.mat();
      const double a = gm.squaredNorm();
      const double t = argmin_max_quadratics(a, frobenius_inner(rx, gm), rx.squaredNorm(),
                                             frobenius_inner(ry, gm), ry.squaredNorm());
      phi = rest + t * gm;
      lambda[g] = t;
    }
    const double next = pair_value(phi, px.mat(), py.mat());
    const double gain = value - next;
    value = std::min(value, next);
    if (gain < kSweepTol) break;
  }

  if (normal_membership_check(fx, phi) && normal_membership_check(fy, phi))
    return {value, phi, sweep + 1, false};

  // Fallback: alternating projections of the midpoint onto the two normal
  // spaces; the limit is the midpoint's projection onto their intersection.
  Matrix alt = 0.5 * (px.mat() + py.mat());
  for (std::size_t it = 0; it < 5000; ++it) {
    const Matrix next = project_to_normal(fy, project_to_normal(fx, alt));
    const double change = (next - alt).norm();
    alt = next;
    if (change < 1e-13) break;
  }
  if (normal_membership_check(fx, alt) && normal_membership_check(fy, alt))
    return {pair_value(alt, px.mat(), py.mat()), alt, 0, true};
  throw Error(ErrorCode::NoConvergence, "no point found in both normal spaces");
}

ReachProbeResult reach_probe(Eigen::Index n, Eigen::Index s, std::size_t trials, const Seed& seed) {
  check_dimensions(n, s);
  if (n > kReachProbeMaxN)
    throw Error(ErrorCode::BadDimensions, "reach probe is limited to N <= 8");
  if (trials < 1) throw Error(ErrorCode::BadDimensions, "reach probe needs at least one trial");

  struct Outcome {
    double value = std::numeric_limits<double>::infinity();
    bool skipped = false;
    bool fallback = false;
  };
  std::vector<Outcome> outcomes(trials);
  parallel_for(trials, [&](std::size_t t) {
    const Seed trial = seed.derive(t);
    const auto x = sample_uniform_subspace(n, s, trial.derive(0));
    const auto y = sample_uniform_subspace(n, s, trial.derive(1));
    try {
      const auto probe = probe_pair(x, y);
      outcomes[t] = {probe.value, false, probe.used_fallback};
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NoConvergence) throw;
      outcomes[t].skipped = true;
    }
  });

  ReachProbeResult result{std::numeric_limits<double>::infinity(), trials, 0, 0};
  for (const auto& o : outcomes) {
    if (o.skipped) {
      ++result.skipped;
      continue;
    }
    result.fallbacks += o.fallback ? 1 : 0;
    result.minimum = std::min(result.minimum, o.value);
  }
  return result;
}

}  // namespace projrip
