#include "projrip/rip.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "projrip/parallel.hpp"

namespace projrip {

namespace {

constexpr double kDegenerate = 1e-8;
constexpr std::size_t kMaxResample = 100;

// Normalized squared ratio ||A d||^2 / ||d||^2 * N^2 / m for d = P_X - P_Y,
// plus the pieces needed for its gradient.
struct ChordValue {
  double value;
  Vector d;
  Vector image;
  double norm2;
};

ChordValue chord_value(const CompressionOperator& op, const Matrix& x, const Matrix& y) {
  const Matrix diff = x * x.transpose() - y * y.transpose();
  ChordValue v;
  v.d = diff.reshaped();
  v.norm2 = v.d.squaredNorm();
  v.image = op.rows() * v.d;
  const double scale = static_cast<double>(op.n() * op.n()) / static_cast<double>(op.m());
  v.value = v.norm2 > kDegenerate * kDegenerate ? v.image.squaredNorm() / v.norm2 * scale
                                                : std::numeric_limits<double>::quiet_NaN();
  return v;
}

// Riemannian gradient steps on Gr x Gr that push the squared ratio up
// (direction = +1) or down (direction = -1), with backtracking. Every
// iterate is a genuine chord, so the result stays a lower bound on the
// uniform deviation.
double refine_chord(const CompressionOperator& op, Matrix x, Matrix y, double direction,
                    std::size_t steps) {
  const auto n = op.n();
  const double scale = static_cast<double>(n * n) / static_cast<double>(op.m());
  auto current = chord_value(op, x, y);
  for (std::size_t it = 0; it < steps; ++it) {
    const double raw = current.image.squaredNorm() / current.norm2;
    const Vector grad = (op.rows().transpose() * current.image - raw * current.d) * (2.0 * scale / current.norm2);
    const Matrix g = sym_part(grad.reshaped(n, n));
    Matrix gx = 2.0 * g * x;
    Matrix gy = -2.0 * g * y;
    gx -= x * (x.transpose() * gx);
    gy -= y * (y.transpose() * gy);

    bool moved = false;
    for (double t = 1.0; t > 1e-6; t *= 0.5) {
      Matrix x2, y2;
      try {
        x2 = qr_orthonormalize(x + direction * t * gx);
        y2 = qr_orthonormalize(y + direction * t * gy);
      } catch (const Error&) {
        continue;
      }
      auto next = chord_value(op, x2, y2);
      if (std::isfinite(next.value) && direction * next.value > direction * current.value) {
        x = std::move(x2);
        y = std::move(y2);
        current = std::move(next);
        moved = true;
        break;
      }
    }
    if (!moved) break;
  }
  return std::sqrt(std::max(current.value, 0.0));
}

}  // namespace

Matrix chord_between(const Subspace& x, const Subspace& y) {
  const Matrix diff = ProjectionMatrix(x).mat() - ProjectionMatrix(y).mat();
  const double norm = diff.norm();
  if (norm < kDegenerate) throw Error(ErrorCode::DegeneratePair, "P_X equals P_Y");
  return diff / norm;
}

Chord sample_chord(Eigen::Index n, Eigen::Index s, const Seed& seed) {
  check_dimensions(n, s);
  for (std::size_t attempt = 0; attempt < kMaxResample; ++attempt) {
    auto x = sample_uniform_subspace(n, s, seed.derive(2 * attempt));
    auto y = sample_uniform_subspace(n, s, seed.derive(2 * attempt + 1));
    const Matrix diff = ProjectionMatrix(x).mat() - ProjectionMatrix(y).mat();
    const double norm = diff.norm();
    if (norm >= kDegenerate) return {diff / norm, std::move(x), std::move(y), seed, attempt};
  }
  throw Error(ErrorCode::DegeneratePair, "no distinct pair after 100 draws");
}

RipEstimate rip_estimate(const CompressionOperator& op, Eigen::Index s, std::size_t trials,
                         const Seed& seed, const RipOptions& options) {
  if (trials < 1) throw Error(ErrorCode::BadDimensions, "rip_estimate needs at least one trial");
  const auto n = op.n();
  check_dimensions(n, s);

  std::vector<double> ratios(trials);
  std::vector<Matrix> xs(options.refine > 0 ? trials : 0);
  std::vector<Matrix> ys(xs.size());
  const double centering = op.centering();
  parallel_for(trials, [&](std::size_t t) {
    auto chord = sample_chord(n, s, seed.derive(t));
    ratios[t] = op.apply(chord.diff).norm() / centering;
    if (!xs.empty()) {
      xs[t] = chord.x.basis();
      ys[t] = chord.y.basis();
    }
  });

  RipEstimate est;
  est.n = n;
  est.s = s;
  est.m = op.m();
  est.kind = op.kind();
  est.trials = trials;
  est.seed = seed;
  est.operator_seed = op.seed();

  double sum = 0, sum_sq = 0, sum_quad = 0;
  for (double r : ratios) {
    sum += r;
    sum_sq += r * r;
    sum_quad += r * r * r * r;
  }
  const double count = static_cast<double>(trials);
  est.ratio_mean = sum / count;
  est.ratio_mean_square = sum_sq / count;
  est.ratio_mean_square_se =
      trials > 1 ? std::sqrt(std::max(0.0, sum_quad / count - est.ratio_mean_square * est.ratio_mean_square) /
                             (count - 1.0))
                 : 0.0;
  const auto [lo, hi] = std::minmax_element(ratios.begin(), ratios.end());
  est.ratio_min = *lo;
  est.ratio_max = *hi;
  est.eps_hat_sampled = std::max(1.0 - est.ratio_min, est.ratio_max - 1.0);

  if (options.refine > 0) {
    std::vector<std::size_t> order(trials);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return ratios[a] < ratios[b]; });
    const std::size_t k = std::min(options.refine, trials);
    std::vector<double> refined(2 * k);
    parallel_for(2 * k, [&](std::size_t j) {
      const bool low = j < k;
      const std::size_t idx = low ? order[j] : order[trials - 1 - (j - k)];
      refined[j] = refine_chord(op, xs[idx], ys[idx], low ? -1.0 : 1.0, options.refine_steps);
    });
    for (std::size_t j = 0; j < 2 * k; ++j) {
      est.ratio_min = std::min(est.ratio_min, refined[j]);
      est.ratio_max = std::max(est.ratio_max, refined[j]);
    }
    est.refined = 2 * k;
  }
  est.eps_hat = std::max({0.0, 1.0 - est.ratio_min, est.ratio_max - 1.0});
  est.ratios = std::move(ratios);
  return est;
}

namespace {

struct Evaluation {
  bool all_pass;
  bool conflict;
  double worst;
};

Evaluation evaluate(Eigen::Index n, Eigen::Index s, Eigen::Index m, double eps, std::size_t trials,
                    const Seed& seed, const SearchOptions& options) {
  std::size_t passed = 0;
  double worst = 0;
  for (std::size_t j = 0; j < options.operators; ++j) {
    const Seed stream = seed.derive(j);
    const auto op = make_operator(options.kind, m, n, stream.derive(0));
    const auto est = rip_estimate(op, s, trials, stream.derive(1), options.rip);
    worst = std::max(worst, est.eps_hat);
    if (est.eps_hat <= eps) ++passed;
  }
  return {passed == options.operators, passed > 0 && passed < options.operators, worst};
}

}  // namespace

MinimalMResult minimal_m_search(Eigen::Index n, Eigen::Index s, double eps_target,
                                std::size_t confidence_trials, const Seed& seed,
                                const SearchOptions& options) {
  check_dimensions(n, s);
  if (!(eps_target > 0.0 && eps_target < 1.0))
    throw Error(ErrorCode::BadDimensions, "eps_target must lie in (0, 1)");
  if (confidence_trials < 1 || options.operators < 1)
    throw Error(ErrorCode::BadDimensions, "search needs trials and operators >= 1");

  MinimalMResult result{0, {}};
  auto predicate = [&](Eigen::Index m) {
    const Seed at_m = seed.derive(static_cast<std::uint64_t>(m));
    const auto first = evaluate(n, s, m, eps_target, confidence_trials, at_m.derive(0), options);
    PredicateRecord record{m, first.all_pass, 1, first.worst};
    if (first.conflict) {
      // first evaluation already counts as a failure
      const auto second = evaluate(n, s, m, eps_target, confidence_trials, at_m.derive(1), options);
      const auto third = evaluate(n, s, m, eps_target, confidence_trials, at_m.derive(2), options);
      record.pass = second.all_pass && third.all_pass;
      record.evaluations = 3;
    }
    result.probes.push_back(record);
    return record.pass;
  };

  Eigen::Index lo = 1;
  Eigen::Index hi = n * n - 1;
  if (!predicate(hi))
    throw Error(ErrorCode::Unsatisfiable, "eps_hat target not met even at m = N^2 - 1");
  while (lo < hi) {
    const Eigen::Index mid = lo + (hi - lo) / 2;
    if (predicate(mid))
      hi = mid;
    else
      lo = mid + 1;
  }
  result.m_min = lo;
  return result;
}

std::vector<GridPoint> default_scaling_grid() {
  return {{8, 1}, {8, 2}, {8, 4}, {12, 1}, {12, 2}, {12, 3}, {12, 6}, {16, 2}, {16, 4}};
}

ScalingFit fit_scaling(std::vector<ScalingPoint> points) {
  ScalingFit fit;
  fit.points = std::move(points);
  const auto count = static_cast<double>(fit.points.size());
  double mx = 0, my = 0;
  for (const auto& p : fit.points) {
    mx += p.x;
    my += static_cast<double>(p.m_min);
  }
  mx /= count;
  my /= count;
  double sxx = 0, sxy = 0, syy = 0;
  for (const auto& p : fit.points) {
    const double dx = p.x - mx;
    const double dy = static_cast<double>(p.m_min) - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (fit.points.size() < 2 || sxx <= 0.0) {
    fit.underdetermined = true;
    fit.slope = mx > 0 ? my / mx : 0.0;
    fit.intercept = 0.0;
    fit.r_squared = 1.0;
    fit.note = "underdetermined";
    return fit;
  }
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss_res = 0;
  for (const auto& p : fit.points) {
    const double r = static_cast<double>(p.m_min) - (fit.slope * p.x + fit.intercept);
    ss_res += r * r;
  }
  fit.r_squared = syy > 0 ? std::clamp(1.0 - ss_res / syy, 0.0, 1.0) : 1.0;
  return fit;
}

ScalingFit scaling_experiment(const std::vector<GridPoint>& grid, double eps_target,
                              std::size_t trials, const Seed& seed, const SearchOptions& options) {
  if (grid.empty()) throw Error(ErrorCode::BadDimensions, "scaling grid is empty");
  for (const auto& g : grid) {
    check_dimensions(g.n, g.s);
    if (g.n > 24) throw Error(ErrorCode::BadDimensions, "scaling grid is limited to N <= 24");
  }

  std::vector<ScalingPoint> points;
  for (const auto& g : grid) {
    const Seed point_seed = seed.derive(static_cast<std::uint64_t>(1000 * g.n + g.s));
    const auto found = minimal_m_search(g.n, g.s, eps_target, trials, point_seed, options);
    const double x = static_cast<double>(g.s * (g.n - g.s)) * std::log(static_cast<double>(g.n));
    points.push_back({g.n, g.s, eps_target, found.m_min, x});
  }
  auto fit = fit_scaling(std::move(points));
  const std::string fixed_eps =
      "fit uses x = s(N-s)log N at fixed eps; the log(N/eps) dependence on eps is not separated";
  fit.note = fit.note.empty() ? fixed_eps : fit.note + "; " + fixed_eps;
  return fit;
}

void check_covering_dimensions(Eigen::Index n, Eigen::Index s) {
  check_dimensions(n, s);
  if (n > 8 || s * (n - s) > 6)
    throw Error(ErrorCode::BadDimensions, "covering estimate needs N <= 8 and s(N-s) <= 6");
}

std::vector<double> greedy_insertion_radii(Eigen::Index n, Eigen::Index s, double stop_radius,
                                           std::size_t samples, const Seed& seed) {
  check_covering_dimensions(n, s);
  if (samples < 1) return {};

  const auto dim = n * n;
  Matrix points(dim, static_cast<Eigen::Index>(samples));
  Rng rng(seed);
  for (std::size_t i = 0; i < samples; ++i)
    points.col(static_cast<Eigen::Index>(i)) =
        ProjectionMatrix(sample_uniform_subspace(n, s, rng)).mat().reshaped();

  const double half = std::sqrt(0.5);
  Vector nearest = Vector::Constant(static_cast<Eigen::Index>(samples), std::numeric_limits<double>::infinity());
  std::vector<double> radii{std::numeric_limits<double>::infinity()};
  Eigen::Index center = 0;
  for (;;) {
    nearest = nearest.cwiseMin(
        ((points.colwise() - points.col(center)).colwise().norm() * half).transpose());
    Eigen::Index far = 0;
    const double radius = nearest.maxCoeff(&far);
    if (!(radius > stop_radius)) break;
    radii.push_back(radius);
    center = far;
  }
  return radii;
}

std::size_t covering_estimate(Eigen::Index n, Eigen::Index s, double radius, std::size_t samples,
                              const Seed& seed) {
  if (!(radius > 0.0)) throw Error(ErrorCode::BadDimensions, "covering radius must be positive");
  return greedy_insertion_radii(n, s, radius, samples, seed).size();
}

}  // namespace projrip
