#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "reicqed/cli/scenario.hpp"
#include "reicqed/errors.hpp"

namespace reicqed::cli {

// A --verify oracle disagreed beyond its tolerance.
class VerificationError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

const char* tool_version();

struct RunOptions {
  std::string out_dir = ".";
  bool verify = false;
  bool plot = false;
};

struct OutputFile {
  std::string path;  // relative to out_dir
  std::uintmax_t bytes = 0;
  std::string fnv1a;
};

struct VerifyCheck {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  bool diagnostic = false;  // reported, never fails the run
};

struct RunManifest {
  std::string tool_version;
  std::string scenario_name;
  std::string task;
  std::string scenario_hash;
  std::string unit_convention;
  std::map<std::string, double> calibration;
  std::vector<std::string> overrides;
  std::vector<VerifyCheck> checks;
  double wall_clock_s = 0.0;
  std::vector<OutputFile> outputs;
};

std::string scenario_hash(const Scenario& s);

// Runs the scenario's task, writes its outputs and manifest.json into
// out_dir, and prints a short summary to out. Diagnostics go to log.
RunManifest run(const Scenario& s, const RunOptions& options, std::ostream& out, std::ostream& log);

}  // namespace reicqed::cli
