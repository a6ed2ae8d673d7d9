#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <string>

#include <Eigen/Dense>

namespace projrip {

/// 256-bit seed. Every random stream in the library is derived from one of
/// these; derivation is a splitmix64 mix of the parent words and the stream
/// index, so a single user-facing 64-bit seed reproduces a whole experiment.
struct Seed {
  std::array<std::uint64_t, 4> words{};

  static Seed from_u64(std::uint64_t value);

  /// Child seed for an indexed sub-stream (trial, operator, grid point, ...).
  Seed derive(std::uint64_t stream) const;

  std::string hex() const;

  friend bool operator==(const Seed&, const Seed&) = default;
};

std::uint64_t splitmix64(std::uint64_t& state);

class Rng {
 public:
  explicit Rng(const Seed& seed);

  double normal() { return normal_(engine_); }

  /// rows x cols matrix of i.i.d. N(0, stddev^2) entries, filled column by column.
  Eigen::MatrixXd gaussian(Eigen::Index rows, Eigen::Index cols, double stddev = 1.0);

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace projrip
