#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "projrip/compression.hpp"
#include "projrip/grassmann.hpp"

namespace projrip {

/// Unit-Frobenius difference of two distinct projection matrices.
struct Chord {
  Matrix diff;
  Subspace x;
  Subspace y;
  Seed seed;            // stream the pair was drawn from
  std::size_t attempt;  // resample count before a non-degenerate pair appeared
};

/// Draws X, Y independently from seed.derive(2a), seed.derive(2a + 1) for
/// attempt a, resampling while ||P_X - P_Y||_F < 1e-8 (DegeneratePair after 100).
Chord sample_chord(Eigen::Index n, Eigen::Index s, const Seed& seed);

/// Chord (P_X - P_Y) / ||P_X - P_Y||_F of a given pair.
Matrix chord_between(const Subspace& x, const Subspace& y);

struct RipOptions {
  // Number of lowest- and highest-ratio sampled chords that are pushed
  // further by Riemannian gradient steps over (X, Y). Zero keeps the plain
  // Monte Carlo estimator.
  std::size_t refine = 0;
  std::size_t refine_steps = 30;
};

/// Isometry-ratio statistics, ratios normalized by sqrt(m) / N.
/// eps_hat is a sampled lower bound on the uniform deviation over all
/// chords, not the RIP constant itself.
struct RipEstimate {
  Eigen::Index n = 0;
  Eigen::Index s = 0;
  Eigen::Index m = 0;
  OperatorKind kind = OperatorKind::Orthoprojector;
  std::size_t trials = 0;
  std::size_t refined = 0;
  double ratio_min = 0;   // over sampled and refined chords
  double ratio_max = 0;   // over sampled and refined chords
  double ratio_mean = 0;  // over sampled chords only
  double ratio_mean_square = 0;
  double ratio_mean_square_se = 0;
  double eps_hat = 0;
  double eps_hat_sampled = 0;  // deviation before refinement
  Seed seed;
  Seed operator_seed;
  std::vector<double> ratios;  // per sampled trial, in trial order
};

/// Trial t uses chord seed.derive(t); results do not depend on scheduling.
RipEstimate rip_estimate(const CompressionOperator& op, Eigen::Index s, std::size_t trials,
                         const Seed& seed, const RipOptions& options = {});

struct SearchOptions {
  OperatorKind kind = OperatorKind::Orthoprojector;
  std::size_t operators = 5;
  RipOptions rip{10, 30};
};

struct PredicateRecord {
  Eigen::Index m;
  bool pass;
  std::size_t evaluations;  // 1, or 3 when the operators disagreed
  double worst_eps_hat;     // over the first evaluation's operators
};

struct MinimalMResult {
  Eigen::Index m_min;
  std::vector<PredicateRecord> probes;  // in evaluation order
};

/// Smallest m in [1, N^2 - 1] at which every one of `operators` independent
/// operators gets eps_hat <= eps_target. Predicate seeds depend on (seed, m)
/// only, never on eps_target, which makes the result non-increasing in
/// eps_target. When the operators disagree at some m the predicate is
/// re-drawn twice with fresh seeds and decided by majority of three.
/// Throws Unsatisfiable if m = N^2 - 1 fails.
MinimalMResult minimal_m_search(Eigen::Index n, Eigen::Index s, double eps_target,
                                std::size_t confidence_trials, const Seed& seed,
                                const SearchOptions& options = {});

struct GridPoint {
  Eigen::Index n;
  Eigen::Index s;
};

std::vector<GridPoint> default_scaling_grid();

struct ScalingPoint {
  Eigen::Index n;
  Eigen::Index s;
  double eps_target;
  Eigen::Index m_min;
  double x;  // s (N - s) log N
};

struct ScalingFit {
  std::vector<ScalingPoint> points;
  double slope = 0;
  double intercept = 0;
  double r_squared = 0;
  bool underdetermined = false;
  std::string note;
};

/// Ordinary least squares of y against x with r^2 clamped to [0, 1]. Fewer
/// than two distinct x values is flagged underdetermined with r^2 = 1.
ScalingFit fit_scaling(std::vector<ScalingPoint> points);

/// Grid point (N, s) is searched with seed.derive(1000 * N + s), so a point's
/// m_min does not depend on its position in the grid.
ScalingFit scaling_experiment(const std::vector<GridPoint>& grid, double eps_target,
                              std::size_t trials, const Seed& seed,
                              const SearchOptions& options = {});

/// Farthest-point insertion radii in projection distance over `samples` Haar
/// points, non-increasing. radii[0] is +inf for the first point.
std::vector<double> greedy_insertion_radii(Eigen::Index n, Eigen::Index s, double stop_radius,
                                           std::size_t samples, const Seed& seed);

/// Size of the greedy T-separated packing (a lower bound on the covering
/// number at radius T). Restricted to N <= 8 and s (N - s) <= 6.
std::size_t covering_estimate(Eigen::Index n, Eigen::Index s, double radius, std::size_t samples,
                              const Seed& seed);

void check_covering_dimensions(Eigen::Index n, Eigen::Index s);

}  // namespace projrip
