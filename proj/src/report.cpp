#include "projrip/report.hpp"

#include <charconv>
#include <cmath>
#include <ostream>

#ifndef PROJRIP_VERSION
#define PROJRIP_VERSION "0.0.0"
#endif

namespace projrip {

const char* version() { return "projrip " PROJRIP_VERSION; }

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

Json to_json(const Seed& seed) { return seed.hex(); }

Json to_json(const RipEstimate& est, bool include_ratios) {
  Json j;
  j["n"] = est.n;
  j["s"] = est.s;
  j["m"] = est.m;
  j["kind"] = to_string(est.kind);
  j["trials"] = est.trials;
  j["refined"] = est.refined;
  j["ratio_min"] = est.ratio_min;
  j["ratio_max"] = est.ratio_max;
  j["ratio_mean"] = est.ratio_mean;
  j["ratio_mean_square"] = est.ratio_mean_square;
  j["ratio_mean_square_se"] = est.ratio_mean_square_se;
  j["eps_hat"] = est.eps_hat;
  j["eps_hat_sampled"] = est.eps_hat_sampled;
  j["eps_hat_is"] = "sampled lower bound of the uniform deviation over the chord set";
  j["seeds"] = {{"chords", to_json(est.seed)}, {"operator", to_json(est.operator_seed)}};
  if (include_ratios) j["ratios"] = est.ratios;
  return j;
}

Json to_json(const ScalingFit& fit) {
  Json points = Json::array();
  for (const auto& p : fit.points)
    points.push_back({{"n", p.n}, {"s", p.s}, {"eps_target", p.eps_target}, {"m_min", p.m_min}, {"x", p.x}});
  Json j;
  j["points"] = std::move(points);
  j["slope"] = fit.slope;
  j["intercept"] = fit.intercept;
  j["r_squared"] = fit.r_squared;
  j["underdetermined"] = fit.underdetermined;
  j["note"] = fit.note;
  return j;
}

Json to_json(const ReachWitness& w) {
  Json phi = Json::array();
  for (Eigen::Index i = 0; i < w.phi.rows(); ++i) phi.push_back(w.phi(i, i));
  return {{"n", w.px.n()}, {"s", w.px.s()}, {"phi_diagonal", phi}, {"dist_x", w.dist_x}, {"dist_y", w.dist_y}};
}

Json to_json(const ReachProbeResult& p) {
  return {{"minimum", p.minimum}, {"trials", p.trials}, {"skipped", p.skipped}, {"fallbacks", p.fallbacks}};
}

Json provenance_document(const Json& config, Json result) {
  Json doc;
  doc["version"] = version();
  doc["config"] = config;
  doc["result"] = std::move(result);
  return doc;
}

void write_csv_preamble(std::ostream& out, const Json& config) {
  out << "# " << version() << '\n';
  out << "# config " << config.dump() << '\n';
}

void write_rip_csv(std::ostream& out, const RipEstimate& est) {
  out << "trial,ratio\n";
  for (std::size_t t = 0; t < est.ratios.size(); ++t) out << t << ',' << format_double(est.ratios[t]) << '\n';
}

void write_scaling_csv(std::ostream& out, const ScalingFit& fit) {
  out << "n,s,eps_target,m_min,x\n";
  for (const auto& p : fit.points)
    out << p.n << ',' << p.s << ',' << format_double(p.eps_target) << ',' << p.m_min << ','
        << format_double(p.x) << '\n';
}

}  // namespace projrip
