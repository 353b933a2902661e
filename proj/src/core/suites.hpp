#pragma once

#include <string>
#include <vector>

#include "config.hpp"
#include "types.hpp"

namespace twpk {

// One verification check: an identity or property with its measured error,
// the tolerance it is held to, and the regime flags of every inverse
// temperature involved. A check passes iff measured <= tolerance; a regime
// violation is recorded as the failure reason when present.
struct CheckResult {
  std::string name; // "suite.check"
  double measured = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  bool regime_ok = true;
  std::string note;
};

struct SuiteResult {
  std::string name;
  std::vector<CheckResult> checks;
  bool passed() const {
    for (const auto& c : checks)
      if (!c.passed) return false;
    return true;
  }
};

struct VerifyReport {
  RunConfig config;
  std::vector<SuiteResult> suites; // sorted by suite name
  bool all_passed = false;
  std::string to_json() const; // schema 1, deterministic for fixed config+seed
};

const std::vector<std::string>& all_suite_names();
bool is_known_suite(const std::string& name);
bool is_known_check(const std::string& dotted_name);
double default_tolerance(const std::string& dotted_name);

SuiteResult run_suite(const std::string& name, const RunConfig& cfg);
VerifyReport run_verify(const RunConfig& cfg);

// data dumps behind the CLI verbs; each returns a summary JSON string and
// writes CSV files under the given location
std::string run_wavefunction_dump(const RunConfig& cfg, const Vec3& center,
                                  const Idx3& k_numbers,
                                  const std::vector<double>& temps,
                                  const std::string& out_dir);
std::string run_kernel_dump(const RunConfig& cfg, const std::string& out_path);
std::string run_spectrum_dump(const RunConfig& cfg,
                              const std::string& operator_kind,
                              const std::string& out_path);
std::string run_sweep(const RunConfig& cfg, const std::string& parameter,
                      const std::vector<double>& values,
                      const std::string& out_path);

} // namespace twpk
