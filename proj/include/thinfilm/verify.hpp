#pragma once

#include <string>
#include <vector>

#include "thinfilm/model.hpp"

namespace thinfilm::verify {

struct Check {
  std::string name;
  bool pass = false;
  double value = 0.0;      ///< measured quantity
  double threshold = 0.0;  ///< bound it was compared against
  std::string note;
};

struct SuiteResult {
  std::string suite;
  std::vector<Check> checks;
  bool pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

struct Options {
  /// Fault-injection: constant added to f only (F untouched), so a nonzero
  /// value corrupts the model and the suites must fail.
  double f_shift = 0.0;
};

/// energies | oscillation | scaling | rupture | asymptotics
const std::vector<std::string>& suite_names();

/// Runs one named suite against the base parameter triple.
SuiteResult run_suite(const std::string& name, const Params& base,
                      const Options& opt = {});

}  // namespace thinfilm::verify
