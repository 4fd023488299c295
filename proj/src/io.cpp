#include "thinfilm/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <stdexcept>

#include "thinfilm/analysis.hpp"
#include "thinfilm/version.hpp"

namespace thinfilm::io {

nlohmann::json manifest_json(const RunManifest& m) {
  return nlohmann::json{{"command", m.command},
                        {"tool_version", m.tool_version},
                        {"timestamp", m.timestamp},
                        {"parameters", m.parameters},
                        {"tolerances", m.tolerances}};
}

void write_trajectory_csv(const std::string& path, const Trajectory& traj) {
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  std::fputs("r,h,dh,e1,e2\n", f);
  const EnergySeries es = energy_series(traj);
  const auto& samples = traj.samples();
  std::size_t ei = 0;
  for (const State& s : samples) {
    // energy_series skips nothing for valid trajectories; keep indices in step
    double e1 = 0.0, e2 = 0.0;
    if (ei < es.r.size() && es.r[ei] == s.r) {
      e1 = es.e1[ei];
      e2 = es.e2[ei];
      ++ei;
    }
    std::fprintf(f, "%.17g,%.17g,%.17g,%.17g,%.17g\n", s.r, s.h, s.dh, e1,
                 e2);
  }
  std::fclose(f);
}

void write_summary_json(const std::string& path, const RunManifest& m,
                        const nlohmann::json& results) {
  nlohmann::json j{{"format_version", kFormatVersion},
                   {"manifest", manifest_json(m)},
                   {"results", results}};
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << j.dump(2) << "\n";
}

void write_gnuplot_script(const std::string& path, const std::string& csv_path,
                          const std::string& title) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << "set datafile separator ','\n"
      << "set key autotitle columnhead\n"
      << "set xlabel 'r'\n"
      << "set title '" << title << "'\n"
      << "plot '" << csv_path << "' using 1:2 with lines title 'h(r)', \\\n"
      << "     '" << csv_path << "' using 1:3 with lines title \"h'(r)\"\n"
      << "pause -1\n";
}

std::string default_out_dir() {
  const char* dir = std::getenv("THINFILM_OUT_DIR");
  return dir ? dir : ".";
}

std::string timestamp_now() {
  if (const char* fixed = std::getenv("THINFILM_TIMESTAMP")) return fixed;
  std::time_t t = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

}  // namespace thinfilm::io
