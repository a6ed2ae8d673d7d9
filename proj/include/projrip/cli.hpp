#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "projrip/rip.hpp"

namespace projrip::cli {

enum class Subcommand { VerifyGeometry, Reach, Rip, Scaling, Covering };
enum class Format { Json, Csv };

struct RunConfig {
  Subcommand subcommand = Subcommand::VerifyGeometry;
  long n = 0;
  long s = 0;
  long m = 0;
  double eps = 0.5;
  long trials = 0;
  long samples = 10000;
  double t = 0;
  std::string grid = "default";
  std::uint64_t seed = 0;
  std::string out_path;
  Format format = Format::Json;
  std::string ensemble = "orthoprojector";
  long refine = 0;
  long operators = 5;
};

/// Parses "default" or a comma-separated list of N:s pairs.
std::vector<GridPoint> parse_grid(const std::string& spec);

/// Exit codes: 0 success, 1 failed check or Unsatisfiable, 2 bad config.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace projrip::cli
