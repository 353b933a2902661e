#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "manybody.hpp"

namespace twpk {

// Thrown on malformed configs and bad CLI parameters; the CLI maps it to
// exit code 2 before any computation starts.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Flat key=value experiment configuration. Unknown keys are errors.
//
// Keys: dim, box_length, points, mass, temperature, split_fraction,
//       particles, statistics (boson|fermion), suites (comma list or "all"),
//       out_dir, seed, parallel (true|false),
//       tol.<suite>.<check> = <value>  (tolerance overrides)
struct RunConfig {
  int dim = 1;
  double box_length = 10.0;
  int points = 64;
  double mass = 1.0;
  double temperature = 1.0;
  double split_fraction = 0.5;
  int particles = 2;
  Statistics statistics = Statistics::boson;
  std::vector<std::string> suites{"all"};
  std::string out_dir = ".";
  std::uint64_t seed = 1;
  bool parallel = false;
  std::map<std::string, double> tol_overrides; // key "suite.check"

  // validates module preconditions up front
  void validate() const;
};

RunConfig parse_config_text(const std::string& text);
RunConfig parse_config_file(const std::string& path);

} // namespace twpk
