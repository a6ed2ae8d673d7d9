#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "projrip/rip.hpp"

using namespace projrip;

namespace {

template <class F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::BadFormat;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const auto mid = v.size() / 2;
  return v.size() % 2 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

}  // namespace

TEST(SampleChord, UnitSymmetricTraceless) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const Eigen::Index n = 2 + static_cast<Eigen::Index>(seed % 9);
    const Eigen::Index s = 1 + static_cast<Eigen::Index>(seed % static_cast<std::uint64_t>(n - 1));
    const auto chord = sample_chord(n, s, Seed::from_u64(seed));
    EXPECT_NEAR(chord.diff.norm(), 1.0, 1e-12);
    EXPECT_NEAR(chord.diff.trace(), 0.0, 1e-10);
    EXPECT_TRUE(is_symmetric(chord.diff));
    const auto e = sym_eig(chord.diff);
    EXPECT_LE(e.values(0), 1.0 + 1e-12);
    EXPECT_GE(e.values(n - 1), -1.0 - 1e-12);
  }
}

TEST(SampleChord, Deterministic) {
  const auto a = sample_chord(6, 2, Seed::from_u64(3));
  const auto b = sample_chord(6, 2, Seed::from_u64(3));
  EXPECT_TRUE(a.diff == b.diff);
  EXPECT_EQ(a.attempt, 0u);
}

TEST(ChordBetween, RejectsEqualPoints) {
  const auto x = sample_uniform_subspace(4, 2, Seed::from_u64(1));
  EXPECT_EQ(code_of([&] { chord_between(x, x); }), ErrorCode::DegeneratePair);
}

TEST(RipEstimate, SingleTrialBound) {
  const auto op = random_orthoprojector(10, 5, Seed::from_u64(1));
  const auto est = rip_estimate(op, 2, 1, Seed::from_u64(2));
  const double bound = 5.0 / std::sqrt(10.0);
  EXPECT_GE(est.ratios[0], 0.0);
  EXPECT_LE(est.ratios[0], bound + 1e-12);
  const auto chord = sample_chord(5, 2, Seed::from_u64(2).derive(0));
  EXPECT_DOUBLE_EQ(est.ratios[0], 5.0 * op.apply(chord.diff).norm() / std::sqrt(10.0));
}

TEST(RipEstimate, MeanRatioNearOne) {
  const auto op = random_orthoprojector(32, 8, Seed::from_u64(7));
  const auto est = rip_estimate(op, 1, 2000, Seed::from_u64(8));
  EXPECT_GE(est.ratio_mean, 0.9);
  EXPECT_LE(est.ratio_mean, 1.1);
}

TEST(RipEstimate, StatisticsInvariants) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Eigen::Index m = 10 + static_cast<Eigen::Index>(seed * 5);
    const auto op = random_orthoprojector(m, 8, Seed::from_u64(seed));
    const auto est = rip_estimate(op, 3, 300, Seed::from_u64(100 + seed), RipOptions{5, 20});
    EXPECT_LE(est.ratio_min, est.ratio_mean);
    EXPECT_LE(est.ratio_mean, est.ratio_max);
    EXPECT_GE(est.eps_hat, est.eps_hat_sampled);
    EXPECT_DOUBLE_EQ(est.eps_hat, std::max(1 - est.ratio_min, est.ratio_max - 1));
    EXPECT_EQ(est.refined, 10u);
    const double bound = 8.0 / std::sqrt(static_cast<double>(m));
    EXPECT_LE(est.ratio_max, bound + 1e-9);
    for (double r : est.ratios) {
      EXPECT_TRUE(std::isfinite(r));
      EXPECT_GE(r, 0.0);
    }
  }
}

TEST(RipEstimate, ConcentrationImprovesWithMeasurements) {
  std::vector<double> small, large;
  for (std::uint64_t k = 0; k < 20; ++k) {
    const Seed base = Seed::from_u64(500).derive(k);
    small.push_back(rip_estimate(random_orthoprojector(16, 8, base.derive(0)), 2, 2000, base.derive(1)).eps_hat);
    large.push_back(rip_estimate(random_orthoprojector(48, 8, base.derive(2)), 2, 2000, base.derive(3)).eps_hat);
  }
  EXPECT_LT(median(large), median(small));
}

TEST(RipEstimate, RefinementFindsLargerDeviation) {
  const auto op = random_orthoprojector(40, 10, Seed::from_u64(31));
  const auto plain = rip_estimate(op, 3, 500, Seed::from_u64(32));
  const auto refined = rip_estimate(op, 3, 500, Seed::from_u64(32), RipOptions{10, 30});
  EXPECT_EQ(plain.ratios, refined.ratios);
  EXPECT_DOUBLE_EQ(plain.ratio_mean, refined.ratio_mean);
  EXPECT_GT(refined.eps_hat, plain.eps_hat);
}

TEST(RipEstimate, ResultIndependentOfThreadCount) {
  const auto op = random_orthoprojector(20, 6, Seed::from_u64(3));
  setenv("PROJRIP_THREADS", "1", 1);
  const auto a = rip_estimate(op, 2, 400, Seed::from_u64(4), RipOptions{4, 10});
  setenv("PROJRIP_THREADS", "4", 1);
  const auto b = rip_estimate(op, 2, 400, Seed::from_u64(4), RipOptions{4, 10});
  unsetenv("PROJRIP_THREADS");
  EXPECT_EQ(a.ratios, b.ratios);
  EXPECT_EQ(a.eps_hat, b.eps_hat);
}

TEST(RipEstimate, FreshOperatorMeanSquareIsOne) {
  // E[r^2] = 1 when both the operator and the chord are redrawn each trial.
  const int trials = 2000;
  double sum = 0, sum_sq = 0;
  for (int t = 0; t < trials; ++t) {
    const Seed seed = Seed::from_u64(77).derive(static_cast<std::uint64_t>(t));
    const auto op = random_orthoprojector(48, 8, seed.derive(0));
    const double r = rip_estimate(op, 2, 1, seed.derive(1)).ratios[0];
    sum += r * r;
    sum_sq += r * r * r * r;
  }
  const double mean = sum / trials;
  const double se = std::sqrt((sum_sq / trials - mean * mean) / (trials - 1));
  EXPECT_LE(std::abs(mean - 1.0), 5 * se);
}

TEST(MinimalMSearch, LooseTargetNeedsFewMeasurements) {
  const auto loose = minimal_m_search(6, 2, 0.99, 200, Seed::from_u64(1));
  const auto tight = minimal_m_search(6, 2, 0.5, 200, Seed::from_u64(1));
  EXPECT_GE(loose.m_min, 1);
  EXPECT_LT(loose.m_min, tight.m_min);
  EXPECT_LT(loose.m_min, 18);
}

TEST(MinimalMSearch, LargerManifoldNeedsMoreMeasurements) {
  const auto one = minimal_m_search(8, 1, 0.5, 2000, Seed::from_u64(2)).m_min;
  const auto four = minimal_m_search(8, 4, 0.5, 2000, Seed::from_u64(2)).m_min;
  EXPECT_GT(four, one);
  EXPECT_LE(four, 63);
}

TEST(MinimalMSearch, Reproducible) {
  const auto a = minimal_m_search(6, 2, 0.6, 300, Seed::from_u64(9));
  const auto b = minimal_m_search(6, 2, 0.6, 300, Seed::from_u64(9));
  EXPECT_EQ(a.m_min, b.m_min);
  ASSERT_EQ(a.probes.size(), b.probes.size());
  for (std::size_t i = 0; i < a.probes.size(); ++i) EXPECT_EQ(a.probes[i].worst_eps_hat, b.probes[i].worst_eps_hat);
}

TEST(MinimalMSearch, NonIncreasingInTarget) {
  Eigen::Index previous = 36;
  for (double eps : {0.45, 0.5, 0.55, 0.6, 0.7, 0.8, 0.95}) {
    const auto m = minimal_m_search(6, 2, eps, 300, Seed::from_u64(4)).m_min;
    EXPECT_LE(m, previous) << "eps=" << eps;
    EXPECT_LE(m, 35);
    previous = m;
  }
}

TEST(MinimalMSearch, Errors) {
  EXPECT_EQ(code_of([] { minimal_m_search(3, 1, 1e-6, 200, Seed::from_u64(0)); }), ErrorCode::Unsatisfiable);
  EXPECT_EQ(code_of([] { minimal_m_search(4, 1, 1.5, 10, Seed::from_u64(0)); }), ErrorCode::BadDimensions);
  EXPECT_EQ(code_of([] { minimal_m_search(4, 4, 0.5, 10, Seed::from_u64(0)); }), ErrorCode::BadDimensions);
}

TEST(FitScaling, ExactLine) {
  std::vector<ScalingPoint> pts;
  for (double x : {1.0, 2.0, 5.0}) pts.push_back({4, 1, 0.5, static_cast<Eigen::Index>(3 * x + 2), x});
  const auto fit = fit_scaling(pts);
  EXPECT_NEAR(fit.slope, 3.0, 1e-12);
  EXPECT_NEAR(fit.intercept, 2.0, 1e-12);
  EXPECT_NEAR(fit.r_squared, 1.0, 1e-12);
  EXPECT_FALSE(fit.underdetermined);
}

TEST(FitScaling, UncorrelatedPointsHaveLowRSquared) {
  const auto fit = fit_scaling({{4, 1, 0.5, 10, 1.0}, {4, 1, 0.5, 20, 2.0}, {4, 1, 0.5, 10, 3.0}, {4, 1, 0.5, 20, 4.0}});
  EXPECT_GE(fit.r_squared, 0.0);
  EXPECT_LT(fit.r_squared, 0.3);
}

TEST(ScalingExperiment, SinglePointIsUnderdetermined) {
  const auto fit = scaling_experiment({{6, 2}}, 0.5, 200, Seed::from_u64(1));
  EXPECT_TRUE(fit.underdetermined);
  EXPECT_EQ(fit.r_squared, 1.0);
  EXPECT_NE(fit.note.find("underdetermined"), std::string::npos);
  ASSERT_EQ(fit.points.size(), 1u);
  EXPECT_NEAR(fit.points[0].x, 8 * std::log(6.0), 1e-12);
}

TEST(ScalingExperiment, PointResultDoesNotDependOnGridPosition) {
  const auto a = scaling_experiment({{6, 1}, {6, 2}}, 0.5, 200, Seed::from_u64(3));
  const auto b = scaling_experiment({{6, 2}}, 0.5, 200, Seed::from_u64(3));
  EXPECT_EQ(a.points[1].m_min, b.points[0].m_min);
}

TEST(ScalingExperiment, DoublingTrialsIsStable) {
  const std::vector<GridPoint> grid{{8, 2}, {12, 3}};
  const auto base = scaling_experiment(grid, 0.5, 1000, Seed::from_u64(5));
  const auto doubled = scaling_experiment(grid, 0.5, 2000, Seed::from_u64(5));
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double a = static_cast<double>(base.points[i].m_min);
    const double b = static_cast<double>(doubled.points[i].m_min);
    EXPECT_LE(std::abs(b - a), 0.2 * a) << "N=" << grid[i].n << " s=" << grid[i].s;
  }
}

TEST(ScalingExperiment, RejectsBadGrid) {
  EXPECT_EQ(code_of([] { scaling_experiment({}, 0.5, 10, Seed::from_u64(0)); }), ErrorCode::BadDimensions);
  EXPECT_EQ(code_of([] { scaling_experiment({{25, 2}}, 0.5, 10, Seed::from_u64(0)); }), ErrorCode::BadDimensions);
}

TEST(CoveringEstimate, RadiusBeyondDiameterGivesOne) {
  EXPECT_EQ(covering_estimate(2, 1, 1.0, 2000, Seed::from_u64(1)), 1u);
  EXPECT_EQ(covering_estimate(4, 2, std::sqrt(2.0), 2000, Seed::from_u64(1)), 1u);
  EXPECT_EQ(covering_estimate(5, 1, 1.5, 2000, Seed::from_u64(1)), 1u);
}

TEST(CoveringEstimate, CircleArcLengthOracle) {
  for (double t : {0.2, 0.4}) {
    const double oracle = std::numbers::pi * (1 / std::sqrt(2.0)) / t;
    const auto est = static_cast<double>(covering_estimate(2, 1, t, 100000, Seed::from_u64(2)));
    EXPECT_GE(est, oracle / 2) << "T=" << t;
    EXPECT_LE(est, oracle * 2) << "T=" << t;
  }
}

TEST(CoveringEstimate, MonotoneInRadius) {
  std::size_t previous = std::numeric_limits<std::size_t>::max();
  for (double t : {0.15, 0.2, 0.3, 0.5, 0.8}) {
    const auto est = covering_estimate(4, 1, t, 5000, Seed::from_u64(3));
    EXPECT_LE(est, previous);
    previous = est;
  }
}

TEST(CoveringEstimate, PackingIsSeparated) {
  const auto radii = greedy_insertion_radii(3, 1, 0.3, 3000, Seed::from_u64(4));
  ASSERT_GT(radii.size(), 2u);
  for (std::size_t i = 1; i < radii.size(); ++i) {
    EXPECT_GT(radii[i], 0.3);
    EXPECT_LE(radii[i], radii[i - 1]);
  }
}

TEST(CoveringEstimate, GrowsWithDimension) {
  // log-cardinality increases with s(N-s) log(1/T)
  const auto small = covering_estimate(3, 1, 0.3, 4000, Seed::from_u64(5));
  const auto large = covering_estimate(4, 2, 0.3, 4000, Seed::from_u64(5));
  EXPECT_GT(large, small);
}

TEST(CoveringEstimate, Errors) {
  EXPECT_EQ(code_of([] { covering_estimate(9, 1, 0.3, 10, Seed::from_u64(0)); }), ErrorCode::BadDimensions);
  EXPECT_EQ(code_of([] { covering_estimate(6, 3, 0.3, 10, Seed::from_u64(0)); }), ErrorCode::BadDimensions);
  EXPECT_EQ(code_of([] { covering_estimate(3, 1, 0.0, 10, Seed::from_u64(0)); }), ErrorCode::BadDimensions);
}
