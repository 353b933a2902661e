#include "config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "suites.hpp"

namespace twpk {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double x = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("config: bad numeric value for '" + key + "': " + v);
  }
}

long parse_int(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const long x = std::stol(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("config: bad integer value for '" + key + "': " + v);
  }
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("config: bad boolean value for '" + key + "': " + v);
}

} // namespace

void RunConfig::validate() const {
  if (dim < 1 || dim > 3) throw ConfigError("config: dim must be 1..3");
  if (box_length <= 0.0) throw ConfigError("config: box_length must be positive");
  if (points < 4 || points % 2 != 0)
    throw ConfigError("config: points must be even and >= 4");
  if (mass <= 0.0) throw ConfigError("config: mass must be positive");
  if (temperature <= 0.0) throw ConfigError("config: temperature must be positive");
  if (split_fraction < 0.05 || split_fraction > 0.95)
    throw ConfigError("config: split_fraction must lie in [0.05, 0.95]");
  if (particles < 1 || particles > 6)
    throw ConfigError("config: particles must be 1..6");
  for (const auto& s : suites)
    if (s != "all" && !is_known_suite(s))
      throw ConfigError("config: unknown suite '" + s + "'");
  for (const auto& [key, value] : tol_overrides) {
    if (!is_known_check(key))
      throw ConfigError("config: unknown check in tolerance override 'tol." + key +
                        "'");
    if (value <= 0.0)
      throw ConfigError("config: tolerance override for '" + key +
                        "' must be positive");
  }
}

RunConfig parse_config_text(const std::string& text) {
  RunConfig cfg;
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config: line " + std::to_string(lineno) +
                        " is not of the form key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ConfigError("config: line " + std::to_string(lineno) +
                        " has an empty key or value");

    if (key == "dim") cfg.dim = static_cast<int>(parse_int(key, value));
    else if (key == "box_length") cfg.box_length = parse_double(key, value);
    else if (key == "points") cfg.points = static_cast<int>(parse_int(key, value));
    else if (key == "mass") cfg.mass = parse_double(key, value);
    else if (key == "temperature") cfg.temperature = parse_double(key, value);
    else if (key == "split_fraction") cfg.split_fraction = parse_double(key, value);
    else if (key == "particles") cfg.particles = static_cast<int>(parse_int(key, value));
    else if (key == "statistics") {
      if (value == "boson") cfg.statistics = Statistics::boson;
      else if (value == "fermion") cfg.statistics = Statistics::fermion;
      else throw ConfigError("config: statistics must be boson or fermion");
    } else if (key == "suites") cfg.suites = split_commas(value);
    else if (key == "out_dir") cfg.out_dir = value;
    else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(parse_int(key, value));
    else if (key == "parallel") cfg.parallel = parse_bool(key, value);
    else if (key.rfind("tol.", 0) == 0) {
      const std::string check = key.substr(4);
      cfg.tol_overrides[check] = parse_double(key, value);
    } else {
      throw ConfigError("config: unknown key '" + key + "'");
    }
  }
  cfg.validate();
  return cfg;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

} // namespace twpk
