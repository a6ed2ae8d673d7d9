#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "projrip/geometry.hpp"
#include "projrip/rip.hpp"

namespace projrip {

using Json = nlohmann::ordered_json;

const char* version();

/// Shortest round-trip decimal form, identical across runs.
std::string format_double(double v);

Json to_json(const Seed& seed);
Json to_json(const RipEstimate& est, bool include_ratios = true);
Json to_json(const ScalingFit& fit);
Json to_json(const ReachWitness& witness);
Json to_json(const ReachProbeResult& probe);

/// Wraps a result with the artifact version and the full run config.
Json provenance_document(const Json& config, Json result);

// CSV files start with "# version" and "# config <json>" comment lines.
void write_csv_preamble(std::ostream& out, const Json& config);

/// Columns: trial,ratio
void write_rip_csv(std::ostream& out, const RipEstimate& est);
/// Columns: n,s,eps_target,m_min,x
void write_scaling_csv(std::ostream& out, const ScalingFit& fit);

}  // namespace projrip
