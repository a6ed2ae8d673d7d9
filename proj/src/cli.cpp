#include "projrip/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include "projrip/compression.hpp"
#include "projrip/geometry.hpp"
#include "projrip/report.hpp"

namespace projrip::cli {

namespace {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

const char* kCsvHelp =
    "Output files embed the version and full config (JSON: top-level keys; CSV: leading '#' lines).\n"
    "CSV columns:\n"
    "  verify-geometry  check,pass,value\n"
    "  reach            quantity,value\n"
    "  rip              trial,ratio   (ratio = ||A(Z)||_2 / (sqrt(m)/N), one row per sampled chord)\n"
    "  scaling          n,s,eps_target,m_min,x   (x = s(N-s)log N)\n"
    "  covering         t,samples,estimate\n"
    "PROJRIP_THREADS caps worker threads (0 or unset = all cores); results do not depend on it.";

const char* subcommand_name(Subcommand c) {
  switch (c) {
    case Subcommand::VerifyGeometry: return "verify-geometry";
    case Subcommand::Reach: return "reach";
    case Subcommand::Rip: return "rip";
    case Subcommand::Scaling: return "scaling";
    case Subcommand::Covering: return "covering";
  }
  return "?";
}

Json config_json(const RunConfig& c) {
  Json j;
  j["subcommand"] = subcommand_name(c.subcommand);
  switch (c.subcommand) {
    case Subcommand::VerifyGeometry:
    case Subcommand::Reach:
      j["n"] = c.n;
      j["s"] = c.s;
      j["trials"] = c.trials;
      break;
    case Subcommand::Rip:
      j["n"] = c.n;
      j["s"] = c.s;
      j["m"] = c.m;
      j["trials"] = c.trials;
      j["ensemble"] = c.ensemble;
      j["refine"] = c.refine;
      break;
    case Subcommand::Scaling:
      j["grid"] = c.grid;
      j["eps"] = c.eps;
      j["trials"] = c.trials;
      j["ensemble"] = c.ensemble;
      j["refine"] = c.refine;
      j["operators"] = c.operators;
      break;
    case Subcommand::Covering:
      j["n"] = c.n;
      j["s"] = c.s;
      j["t"] = c.t;
      j["samples"] = c.samples;
      break;
  }
  j["seed"] = c.seed;
  j["format"] = c.format == Format::Json ? "json" : "csv";
  return j;
}

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

void validate(const RunConfig& c) {
  const bool has_ns = c.subcommand != Subcommand::Scaling;
  if (has_ns) {
    require(c.n >= 2, "--n must be at least 2");
    require(c.s >= 1 && c.s < c.n, "need 1 <= s < n");
  }
  switch (c.subcommand) {
    case Subcommand::VerifyGeometry:
      require(c.n <= 64, "verify-geometry supports n <= 64");
      require(c.trials >= 1, "--trials must be positive");
      break;
    case Subcommand::Reach:
      require(c.n <= kReachProbeMaxN, "reach probe is limited to n <= 8");
      require(c.trials >= 1, "--trials must be positive");
      break;
    case Subcommand::Rip:
      require(c.n <= 24, "rip supports n <= 24");
      require(c.m >= 1, "--m must be positive");
      require(c.ensemble != "orthoprojector" || c.m < c.n * c.n, "orthoprojector needs m < n^2");
      require(c.trials >= 1, "--trials must be positive");
      require(c.refine >= 0, "--refine must be non-negative");
      break;
    case Subcommand::Scaling:
      require(c.eps > 0 && c.eps < 1, "--eps must lie in (0, 1)");
      require(c.trials >= 1, "--trials must be positive");
      require(c.refine >= 0, "--refine must be non-negative");
      require(c.operators >= 1, "--operators must be positive");
      break;
    case Subcommand::Covering:
      require(c.n <= 8 && c.s * (c.n - c.s) <= 6, "covering needs n <= 8 and s(n-s) <= 6");
      require(c.t > 0, "--t must be positive");
      require(c.samples >= 1, "--samples must be positive");
      break;
  }
  if (c.subcommand == Subcommand::Rip || c.subcommand == Subcommand::Scaling)
    require(c.ensemble == "orthoprojector" || c.ensemble == "gaussian",
            "--ensemble must be orthoprojector or gaussian");
}

class Output {
 public:
  explicit Output(const RunConfig& c) : config_(c), json_config_(config_json(c)) {}

  const Json& config() const { return json_config_; }

  template <class JsonFn, class CsvFn>
  void write(JsonFn&& json_result, CsvFn&& csv_body) const {
    if (config_.out_path.empty()) return;
    std::ofstream file(config_.out_path, std::ios::binary);
    if (!file) throw ConfigError("cannot open output file " + config_.out_path);
    if (config_.format == Format::Json) {
      file << provenance_document(json_config_, json_result()).dump(2) << '\n';
    } else {
      write_csv_preamble(file, json_config_);
      csv_body(file);
    }
  }

 private:
  const RunConfig& config_;
  Json json_config_;
};

struct Check {
  std::string name;
  bool pass;
  double value;
};

int cmd_verify_geometry(const RunConfig& c, std::ostream& out) {
  const auto n = static_cast<Eigen::Index>(c.n);
  const auto s = static_cast<Eigen::Index>(c.s);
  const auto trials = static_cast<std::size_t>(c.trials);
  const Seed root = Seed::from_u64(c.seed);
  std::vector<Check> checks;

  double worst = 0;
  double invariance = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    Rng rng(root.derive(0).derive(t));
    const auto x = sample_uniform_subspace(n, s, rng);
    const ProjectionMatrix p(x);
    worst = std::max(worst, projection_residuals(p.mat(), s).worst());
    const Matrix r = qr_orthonormalize(rng.gaussian(s, s));
    const ProjectionMatrix rotated(Subspace::from_orthonormal(x.basis() * r));
    invariance = std::max(invariance, (rotated.mat() - p.mat()).norm());
  }
  checks.push_back({"projection_identities", worst <= 1e-9, worst});
  checks.push_back({"basis_invariance", invariance <= 1e-10, invariance});

  const auto base = sample_uniform_subspace(n, s, root.derive(1));
  const auto dim = tangent_dimension(base);
  checks.push_back({"tangent_dimension", dim == s * (n - s), static_cast<double>(dim)});

  double ortho = 0;
  double pythagoras = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    Rng rng(root.derive(2).derive(t));
    const auto frame = TangentFrame::at(sample_uniform_subspace(n, s, rng));
    const auto tangent = tangent_lift(frame, rng.gaussian(n - s, s));
    const Matrix reflect = ProjectionMatrix(frame.base).mat() - ProjectionMatrix(frame.complement).mat();
    const Matrix normal = sym_part(reflect * sym_part(rng.gaussian(n, n)));
    const double scale = tangent.ambient.norm() * normal.norm();
    ortho = std::max(ortho, std::abs(frobenius_inner(tangent.ambient, normal)) / std::max(scale, 1e-300));

    const Matrix m = rng.gaussian(n, n);
    const double tn = project_to_tangent(frame, m).ambient.squaredNorm();
    const double nn = project_to_normal(frame, m).squaredNorm();
    pythagoras = std::max(pythagoras, std::abs(m.squaredNorm() - tn - nn) / m.squaredNorm());
  }
  checks.push_back({"tangent_normal_orthogonality", ortho <= 1e-10, ortho});
  checks.push_back({"pythagorean_decomposition", pythagoras <= 1e-9, pythagoras});

  if (n == 2 && s == 1) {
    double dev = 0;
    double radius = 0;
    for (std::size_t t = 0; t < trials; ++t) {
      radius = circle_characterization_check(ProjectionMatrix(sample_uniform_subspace(2, 1, root.derive(3).derive(t))));
      dev = std::max(dev, std::abs(radius - std::numbers::sqrt2 / 2));
    }
    checks.push_back({"circle_radius", dev <= 1e-10, radius});
  }

  bool all = true;
  for (const auto& ch : checks) {
    out << (ch.pass ? "PASS " : "FAIL ") << ch.name << ' ' << format_double(ch.value) << '\n';
    all = all && ch.pass;
  }
  out << "tangent_dim=" << dim << " expected=" << s * (n - s) << '\n';

  Output(c).write(
      [&] {
        Json arr = Json::array();
        for (const auto& ch : checks) arr.push_back({{"name", ch.name}, {"pass", ch.pass}, {"value", ch.value}});
        return Json{{"checks", arr}, {"tangent_dimension", dim}, {"all_pass", all}};
      },
      [&](std::ostream& f) {
        f << "check,pass,value\n";
        for (const auto& ch : checks) f << ch.name << ',' << (ch.pass ? 1 : 0) << ',' << format_double(ch.value) << '\n';
      });
  return all ? 0 : 1;
}

int cmd_reach(const RunConfig& c, std::ostream& out) {
  const auto n = static_cast<Eigen::Index>(c.n);
  const auto s = static_cast<Eigen::Index>(c.s);
  const double tau = std::numbers::sqrt2 / 2;
  const auto witness = reach_witness(n, s);
  const bool normal_x = normal_membership_check(witness.x, witness.phi);
  const bool normal_y = normal_membership_check(witness.y, witness.phi);
  const bool witness_ok = std::abs(witness.dist_x - tau) <= 1e-9 && std::abs(witness.dist_y - tau) <= 1e-9 &&
                          normal_x && normal_y;
  const auto probe = reach_probe(n, s, static_cast<std::size_t>(c.trials), Seed::from_u64(c.seed));
  const bool probe_ok = probe.minimum >= tau - 1e-6;

  out.precision(12);
  out << "witness dist_x=" << witness.dist_x << " dist_y=" << witness.dist_y
      << " normal_at_x=" << normal_x << " normal_at_y=" << normal_y << '\n';
  out << "probe minimum=" << probe.minimum << " trials=" << probe.trials << " skipped=" << probe.skipped
      << " fallbacks=" << probe.fallbacks << '\n';
  out << (witness_ok && probe_ok ? "PASS" : "FAIL") << " tau=1/sqrt(2)=" << tau << '\n';

  Output(c).write(
      [&] {
        auto w = to_json(witness);
        w["normal_at_x"] = normal_x;
        w["normal_at_y"] = normal_y;
        return Json{{"witness", w}, {"probe", to_json(probe)}, {"pass", witness_ok && probe_ok}};
      },
      [&](std::ostream& f) {
        f << "quantity,value\n";
        f << "witness_dist_x," << format_double(witness.dist_x) << '\n';
        f << "witness_dist_y," << format_double(witness.dist_y) << '\n';
        f << "probe_minimum," << format_double(probe.minimum) << '\n';
        f << "probe_trials," << probe.trials << '\n';
        f << "probe_skipped," << probe.skipped << '\n';
      });
  return witness_ok && probe_ok ? 0 : 1;
}

int cmd_rip(const RunConfig& c, std::ostream& out) {
  const Seed root = Seed::from_u64(c.seed);
  const auto op = make_operator(parse_operator_kind(c.ensemble), c.m, c.n, root.derive(0));
  const auto est = rip_estimate(op, c.s, static_cast<std::size_t>(c.trials), root.derive(1),
                                RipOptions{static_cast<std::size_t>(c.refine), 30});
  out << "rip n=" << est.n << " s=" << est.s << " m=" << est.m << " kind=" << to_string(est.kind)
      << " trials=" << est.trials << " ratio_min=" << format_double(est.ratio_min)
      << " ratio_mean=" << format_double(est.ratio_mean) << " ratio_max=" << format_double(est.ratio_max)
      << " eps_hat=" << format_double(est.eps_hat) << '\n';
  Output(c).write([&] { return to_json(est); }, [&](std::ostream& f) { write_rip_csv(f, est); });
  return 0;
}

int cmd_scaling(const RunConfig& c, std::ostream& out) {
  SearchOptions options;
  options.kind = parse_operator_kind(c.ensemble);
  options.operators = static_cast<std::size_t>(c.operators);
  options.rip.refine = static_cast<std::size_t>(c.refine);
  const auto grid = parse_grid(c.grid);
  const auto fit = scaling_experiment(grid, c.eps, static_cast<std::size_t>(c.trials), Seed::from_u64(c.seed), options);
  for (const auto& p : fit.points)
    out << "point n=" << p.n << " s=" << p.s << " x=" << format_double(p.x) << " m_min=" << p.m_min << '\n';
  out << "fit slope=" << format_double(fit.slope) << " intercept=" << format_double(fit.intercept)
      << " r2=" << format_double(fit.r_squared) << (fit.underdetermined ? " underdetermined" : "") << '\n';
  Output(c).write([&] { return to_json(fit); }, [&](std::ostream& f) { write_scaling_csv(f, fit); });
  return 0;
}

int cmd_covering(const RunConfig& c, std::ostream& out) {
  const auto estimate = covering_estimate(c.n, c.s, c.t, static_cast<std::size_t>(c.samples), Seed::from_u64(c.seed));
  out << "covering n=" << c.n << " s=" << c.s << " t=" << format_double(c.t) << " samples=" << c.samples
      << " estimate=" << estimate << '\n';
  Output(c).write([&] { return Json{{"estimate", estimate}}; },
                  [&](std::ostream& f) {
                    f << "t,samples,estimate\n" << format_double(c.t) << ',' << c.samples << ',' << estimate << '\n';
                  });
  return 0;
}

}  // namespace

std::vector<GridPoint> parse_grid(const std::string& spec) {
  if (spec == "default") return default_scaling_grid();
  std::vector<GridPoint> grid;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw ConfigError("grid entries look like N:s, got '" + item + "'");
    try {
      grid.push_back({std::stol(item.substr(0, colon)), std::stol(item.substr(colon + 1))});
    } catch (const std::logic_error&) {
      throw ConfigError("bad grid entry '" + item + "'");
    }
    const auto& g = grid.back();
    if (g.s < 1 || g.s >= g.n || g.n > 24) throw ConfigError("grid entry '" + item + "' needs 1 <= s < N <= 24");
  }
  if (grid.empty()) throw ConfigError("grid is empty");
  return grid;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  std::string format;

  CLI::App app{"Subspace projection matrices: geometry, reach, and RIP experiments", "projrip"};
  app.footer(kCsvHelp);
  app.require_subcommand(1);
  app.set_version_flag("--version", version());

  auto common = [&](CLI::App* sub) {
    sub->add_option("--seed", cfg.seed, "64-bit seed; expands to every internal random stream");
    sub->add_option("--out", cfg.out_path, "output file");
    sub->add_option("--format", format, "json or csv (default: from --out extension, else json)")
        ->check(CLI::IsMember({"json", "csv"}));
  };
  auto dims = [&](CLI::App* sub) {
    sub->add_option("--n", cfg.n, "ambient dimension N")->required();
    sub->add_option("--s", cfg.s, "subspace dimension s")->required();
  };

  auto* geo = app.add_subcommand("verify-geometry", "projection identities, tangent/normal structure, circle check");
  dims(geo);
  long geo_trials = 100;
  geo->add_option("--trials", geo_trials, "random samples per check");
  common(geo);

  auto* reach = app.add_subcommand("reach", "reach witness and numerical reach probe (n <= 8)");
  dims(reach);
  long reach_trials = 50;
  reach->add_option("--trials", reach_trials, "random pairs probed");
  common(reach);

  auto* rip = app.add_subcommand("rip", "Monte Carlo isometry-ratio statistics for one operator");
  dims(rip);
  rip->add_option("--m", cfg.m, "measurement count")->required();
  long rip_trials = 2000;
  rip->add_option("--trials", rip_trials, "sampled chords");
  rip->add_option("--ensemble", cfg.ensemble, "orthoprojector or gaussian");
  long rip_refine = 0;
  rip->add_option("--refine", rip_refine, "extreme chords refined by gradient steps (each side)");
  common(rip);

  auto* scaling = app.add_subcommand("scaling", "minimal-m sweep and fit against s(N-s)log N");
  scaling->add_option("--grid", cfg.grid, "'default' or N:s,N:s,...");
  scaling->add_option("--eps", cfg.eps, "target eps_hat");
  long scaling_trials = 2000;
  scaling->add_option("--trials", scaling_trials, "chords per operator");
  scaling->add_option("--ensemble", cfg.ensemble, "orthoprojector or gaussian");
  long scaling_refine = 10;
  scaling->add_option("--refine", scaling_refine, "extreme chords refined per side");
  scaling->add_option("--operators", cfg.operators, "independent operators that must all pass");
  common(scaling);

  auto* covering = app.add_subcommand("covering", "greedy packing estimate of the covering number");
  dims(covering);
  covering->add_option("--t", cfg.t, "radius in projection distance")->required();
  covering->add_option("--samples", cfg.samples, "Haar sample count");
  common(covering);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForVersion&) {
    out << version() << '\n';
    return 0;
  } catch (const CLI::Success&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }

  if (geo->parsed()) {
    cfg.subcommand = Subcommand::VerifyGeometry;
    cfg.trials = geo_trials;
  } else if (reach->parsed()) {
    cfg.subcommand = Subcommand::Reach;
    cfg.trials = reach_trials;
  } else if (rip->parsed()) {
    cfg.subcommand = Subcommand::Rip;
    cfg.trials = rip_trials;
    cfg.refine = rip_refine;
  } else if (scaling->parsed()) {
    cfg.subcommand = Subcommand::Scaling;
    cfg.trials = scaling_trials;
    cfg.refine = scaling_refine;
  } else {
    cfg.subcommand = Subcommand::Covering;
  }
  if (!format.empty())
    cfg.format = format == "csv" ? Format::Csv : Format::Json;
  else
    cfg.format = std::filesystem::path(cfg.out_path).extension() == ".csv" ? Format::Csv : Format::Json;

  try {
    validate(cfg);
    if (cfg.subcommand == Subcommand::Scaling) parse_grid(cfg.grid);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }

  try {
    switch (cfg.subcommand) {
      case Subcommand::VerifyGeometry: return cmd_verify_geometry(cfg, out);
      case Subcommand::Reach: return cmd_reach(cfg, out);
      case Subcommand::Rip: return cmd_rip(cfg, out);
      case Subcommand::Scaling: return cmd_scaling(cfg, out);
      case Subcommand::Covering: return cmd_covering(cfg, out);
    }
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    if (e.code() == ErrorCode::BadDimensions) return 2;
    return 1;
  }
  return 1;
}

int run(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, std::cout, std::cerr);
}

}  // namespace projrip::cli
