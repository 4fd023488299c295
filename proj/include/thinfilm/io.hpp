#pragma once

#include <string>

#include "json.hpp"
#include "thinfilm/trajectory.hpp"

namespace thinfilm::io {

/// Provenance block embedded in every JSON output (and accompanying every
/// CSV). Identical manifests reproduce identical outputs bit-for-bit at a
/// fixed tool version; pass a fixed timestamp (flag or THINFILM_TIMESTAMP)
/// for byte-stable regression runs.
struct RunManifest {
  std::string command;
  std::string tool_version;
  std::string timestamp;
  nlohmann::json parameters;   // full effective parameter set
  nlohmann::json tolerances;   // full effective tolerance set
};

nlohmann::json manifest_json(const RunManifest& m);

/// UTF-8, LF line endings, header `r,h,dh,e1,e2`, %.17g fields, radii
/// strictly increasing.
void write_trajectory_csv(const std::string& path, const Trajectory& traj);

/// Summary JSON with {format_version, manifest, results}.
void write_summary_json(const std::string& path, const RunManifest& m,
                        const nlohmann::json& results);

/// Ready-to-run gnuplot script for a trajectory CSV.
void write_gnuplot_script(const std::string& path,
                          const std::string& csv_path,
                          const std::string& title);

/// $THINFILM_OUT_DIR or "." when unset.
std::string default_out_dir();

/// Current UTC time, ISO-8601; $THINFILM_TIMESTAMP overrides.
std::string timestamp_now();

}  // namespace thinfilm::io
