#include "projrip/random.hpp"

#include <cstdio>

namespace projrip {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

Seed Seed::from_u64(std::uint64_t value) {
  Seed seed;
  std::uint64_t state = value;
  for (auto& w : seed.words) w = splitmix64(state);
  return seed;
}

Seed Seed::derive(std::uint64_t stream) const {
  std::uint64_t state = stream * 0xD1B54A32D192ED03ULL;
  for (auto w : words) {
    state ^= w;
    splitmix64(state);
  }
  Seed child;
  for (auto& w : child.words) w = splitmix64(state);
  return child;
}

std::string Seed::hex() const {
  std::string out;
  char buf[17];
  for (auto w : words) {
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(w));
    out += buf;
  }
  return out;
}

Rng::Rng(const Seed& seed) {
  std::seed_seq seq{
      static_cast<std::uint32_t>(seed.words[0]), static_cast<std::uint32_t>(seed.words[0] >> 32),
      static_cast<std::uint32_t>(seed.words[1]), static_cast<std::uint32_t>(seed.words[1] >> 32),
      static_cast<std::uint32_t>(seed.words[2]), static_cast<std::uint32_t>(seed.words[2] >> 32),
      static_cast<std::uint32_t>(seed.words[3]), static_cast<std::uint32_t>(seed.words[3] >> 32)};
  engine_.seed(seq);
}

Eigen::MatrixXd Rng::gaussian(Eigen::Index rows, Eigen::Index cols, double stddev) {
  Eigen::MatrixXd out(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) out(i, j) = stddev * normal();
  return out;
}

}  // namespace projrip
