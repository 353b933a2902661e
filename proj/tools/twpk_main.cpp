// twpk command line: configuration-driven verification suites, wave-function
// and kernel dumps, spectra, and parameter sweeps. All numerics run behind
// the C API of the shared library; this binary only parses flags, moves
// files, and prints summaries.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "twpk.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitConfigError = 2;

struct CommonOpts {
  std::string config_path;
  std::string out_dir;
  std::vector<std::string> suites;
  std::uint64_t seed = 0;
  bool seed_set = false;
  bool parallel = false;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--config", o.config_path, "configuration file (key = value)");
  cmd->add_option("--out", o.out_dir, "output directory");
  cmd->add_option("--suite", o.suites, "suite selection (repeatable)");
  cmd->add_option("--seed", o.seed, "seed for random-operator checks")
      ->each([&o](const std::string&) { o.seed_set = true; });
  cmd->add_flag("--parallel", o.parallel, "run suites concurrently");
}

std::string read_config_text(const CommonOpts& o) {
  std::string text;
  if (!o.config_path.empty()) {
    std::ifstream in(o.config_path);
    if (!in) {
      std::cerr << "error: cannot open config '" << o.config_path << "'\n";
      std::exit(kExitConfigError);
    }
    std::stringstream buf;
    buf << in.rdbuf();
    text = buf.str();
  }
  // flag overrides append after the file body; later assignments win
  std::ostringstream extra;
  extra << "\n";
  if (!o.out_dir.empty()) extra << "out_dir = " << o.out_dir << "\n";
  if (!o.suites.empty()) {
    extra << "suites = ";
    for (std::size_t i = 0; i < o.suites.size(); ++i)
      extra << (i ? "," : "") << o.suites[i];
    extra << "\n";
  }
  if (o.seed_set) extra << "seed = " << o.seed << "\n";
  if (o.parallel) extra << "parallel = true\n";
  return text + extra.str();
}

std::string effective_out_dir(const CommonOpts& o, const std::string& cfg_text) {
  // the config may set out_dir; flags already appended last, so scan from the end
  std::istringstream in(cfg_text);
  std::string line, dir = ".";
  while (std::getline(in, line)) {
    const auto pos = line.find('=');
    if (pos == std::string::npos) continue;
    std::string key = line.substr(0, pos);
    key.erase(0, key.find_first_not_of(" \t"));
    key.erase(key.find_last_not_of(" \t") + 1);
    if (key == "out_dir") {
      dir = line.substr(pos + 1);
      dir.erase(0, dir.find_first_not_of(" \t"));
      dir.erase(dir.find_last_not_of(" \t\r") + 1);
    }
  }
  return dir;
}

int fail_with(twpk_status st) {
  std::cerr << "error: " << twpk_last_error() << "\n";
  return st == TWPK_EFAIL ? kExitCheckFailed : kExitConfigError;
}

std::vector<double> parse_values(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    out.push_back(std::stod(item));
  }
  return out;
}

int cmd_verify(const CommonOpts& opts) {
  const std::string text = read_config_text(opts);
  char* json = nullptr;
  int all_passed = 0;
  const twpk_status st = twpk_verify_run(text.c_str(), &json, &all_passed);
  if (st != TWPK_OK) return fail_with(st);

  const std::string dir = effective_out_dir(opts, text);
  std::filesystem::create_directories(dir);
  const std::string report_path = dir + "/verify_report.json";
  {
    std::ofstream out(report_path, std::ios::binary);
    out << json;
  }

  const auto report = nlohmann::json::parse(json);
  twpk_string_free(json);
  for (const auto& suite : report["suites"]) {
    std::cout << (suite["passed"].get<bool>() ? "[PASS] " : "[FAIL] ")
              << suite["name"].get<std::string>() << "\n";
    for (const auto& check : suite["checks"]) {
      if (check["passed"].get<bool>()) continue;
      std::cout << "       " << check["name"].get<std::string>()
                << ": measured " << check["measured"].dump() << " vs tolerance "
                << check["tolerance"].dump();
      const std::string note = check["note"].get<std::string>();
      if (!note.empty()) std::cout << " (" << note << ")";
      std::cout << "\n";
    }
  }
  std::cout << "report: " << report_path << "\n";
  return all_passed ? kExitOk : kExitCheckFailed;
}

int cmd_wavefunction(const CommonOpts& opts, double center, int kindex,
                     const std::string& temps_csv) {
  const std::string text = read_config_text(opts);
  const std::vector<double> temps = parse_values(temps_csv);
  const std::string dir = effective_out_dir(opts, text);
  std::filesystem::create_directories(dir);
  const double c[3] = {center, center, center};
  const int k[3] = {kindex, kindex, kindex};
  char* json = nullptr;
  int all_passed = 0;
  const twpk_status st = twpk_wavefunction_run(
      text.c_str(), c, k, temps.data(), temps.size(), dir.c_str(), &json,
      &all_passed);
  if (st != TWPK_OK) return fail_with(st);
  std::cout << json;
  twpk_string_free(json);
  return all_passed ? kExitOk : kExitCheckFailed;
}

int cmd_kernel(const CommonOpts& opts) {
  const std::string text = read_config_text(opts);
  const std::string dir = effective_out_dir(opts, text);
  std::filesystem::create_directories(dir);
  const std::string path = dir + "/kernel.csv";
  char* json = nullptr;
  const twpk_status st = twpk_kernel_run(text.c_str(), path.c_str(), &json);
  if (st != TWPK_OK) return fail_with(st);
  std::cout << json;
  twpk_string_free(json);
  return kExitOk;
}

int cmd_spectrum(const CommonOpts& opts, const std::string& op_kind) {
  const std::string text = read_config_text(opts);
  const std::string dir = effective_out_dir(opts, text);
  std::filesystem::create_directories(dir);
  const std::string path = dir + "/spectrum.csv";
  char* json = nullptr;
  const twpk_status st =
      twpk_spectrum_run(text.c_str(), op_kind.c_str(), path.c_str(), &json);
  if (st != TWPK_OK) return fail_with(st);
  std::cout << json;
  twpk_string_free(json);
  return kExitOk;
}

int cmd_sweep(const CommonOpts& opts, const std::string& parameter,
              const std::string& values_csv, double from, double to, int steps) {
  const std::string text = read_config_text(opts);
  std::vector<double> values = parse_values(values_csv);
  if (values.empty() && steps > 1) {
    for (int i = 0; i < steps; ++i)
      values.push_back(from + (to - from) * i / (steps - 1));
  }
  if (values.empty()) {
    std::cerr << "error: sweep needs --values or --from/--to/--steps\n";
    return kExitConfigError;
  }
  const std::string dir = effective_out_dir(opts, text);
  std::filesystem::create_directories(dir);
  const std::string path = dir + "/sweep_" + parameter + ".csv";
  char* json = nullptr;
  const twpk_status st = twpk_sweep_run(text.c_str(), parameter.c_str(),
                                        values.data(), values.size(),
                                        path.c_str(), &json);
  if (st != TWPK_OK) return fail_with(st);
  std::cout << json;
  twpk_string_free(json);
  return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"thermally excited wave-packet toolkit"};
  app.require_subcommand(1);

  CommonOpts verify_opts, wf_opts, kernel_opts, spectrum_opts, sweep_opts;

  CLI::App* verify = app.add_subcommand("verify", "run verification suites");
  add_common(verify, verify_opts);

  CLI::App* wf = app.add_subcommand("wavefunction",
                                    "dump |R,T> and |R,K,T> position profiles");
  add_common(wf, wf_opts);
  double wf_center = 5.0;
  int wf_kindex = 3;
  std::string wf_temps = "0.25,1,4";
  wf->add_option("--center", wf_center, "packet center R (per axis)");
  wf->add_option("--kindex", wf_kindex, "momentum grid number n (per axis)");
  wf->add_option("--temps", wf_temps, "comma-separated temperature list");

  CLI::App* kernel = app.add_subcommand(
      "kernel", "dump the Boltzmann kernel against its Gaussian form");
  add_common(kernel, kernel_opts);

  CLI::App* spectrum = app.add_subcommand(
      "spectrum", "dump both spectral representations of G>");
  add_common(spectrum, spectrum_opts);
  std::string op_kind = "random";
  spectrum->add_option("--operator", op_kind, "identity | projector | random");

  CLI::App* sweep =
      app.add_subcommand("sweep", "sweep T, x or M and dump identity errors");
  add_common(sweep, sweep_opts);
  std::string sweep_param = "x", sweep_values;
  double sweep_from = 0.0, sweep_to = 0.0;
  int sweep_steps = 0;
  sweep->add_option("--parameter", sweep_param, "T | x | M")->required();
  sweep->add_option("--values", sweep_values, "comma-separated points");
  sweep->add_option("--from", sweep_from, "range start");
  sweep->add_option("--to", sweep_to, "range end");
  sweep->add_option("--steps", sweep_steps, "number of points");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfigError;
  }

  try {
    if (verify->parsed()) return cmd_verify(verify_opts);
    if (wf->parsed()) return cmd_wavefunction(wf_opts, wf_center, wf_kindex, wf_temps);
    if (kernel->parsed()) return cmd_kernel(kernel_opts);
    if (spectrum->parsed()) return cmd_spectrum(spectrum_opts, op_kind);
    if (sweep->parsed())
      return cmd_sweep(sweep_opts, sweep_param, sweep_values, sweep_from,
                       sweep_to, sweep_steps);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfigError;
  }
  return kExitConfigError;
}
