#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include <json.hpp>

#include "csvio.hpp"
#include "envelope.hpp"
#include "greens.hpp"
#include "lattice.hpp"
#include "suites.hpp"
#include "thermal.hpp"
#include "wavepacket.hpp"

namespace twpk {

namespace {

LatticePtr config_lattice(const RunConfig& cfg) {
  return make_lattice(cfg.dim, cfg.box_length, cfg.points, cfg.mass);
}

std::string temp_tag(double t) {
  std::ostringstream ss;
  ss << t;
  std::string s = ss.str();
  std::replace(s.begin(), s.end(), '.', 'p');
  return s;
}

// min-image position variance about the packet center, axis 0
double profile_variance(const Lattice& lat, const WavePacketState& s) {
  const AmplitudeField pos = s.position_field();
  double w = 0.0, m1 = 0.0, m2 = 0.0;
  for (std::size_t j = 0; j < pos.amp.size(); ++j) {
    const double p = std::norm(pos.amp[j]);
    const double d = lat.min_image(lat.position(j)[0] - s.center[0]);
    w += p;
    m1 += p * d;
    m2 += p * d * d;
  }
  m1 /= w;
  return m2 / w - m1 * m1;
}

int sign_changes(const std::vector<cplx>& amp) {
  int changes = 0;
  double prev = 0.0;
  for (const auto& v : amp) {
    const double re = v.real();
    if (re == 0.0) continue;
    if (prev != 0.0 && std::signbit(re) != std::signbit(prev)) ++changes;
    prev = re;
  }
  return changes;
}

} // namespace

std::string run_wavefunction_dump(const RunConfig& cfg, const Vec3& center,
                                  const Idx3& k_numbers,
                                  const std::vector<double>& temps,
                                  const std::string& out_dir) {
  if (cfg.dim != 1)
    throw ConfigError("wavefunction dump supports dim = 1 only");
  if (temps.empty()) throw ConfigError("wavefunction dump needs a temperature list");
  const double t_min = 16.0 / (cfg.mass * cfg.box_length * cfg.box_length);
  for (double t : temps)
    if (t < t_min)
      throw ConfigError(
          "wavefunction dump: temperature too low for the minimum-image "
          "moments (packet wider than L/8)");

  const LatticePtr lat = config_lattice(cfg);
  nlohmann::ordered_json summary;
  summary["schema"] = 1;
  nlohmann::ordered_json files = nlohmann::ordered_json::array();
  nlohmann::ordered_json variances = nlohmann::ordered_json::array();
  nlohmann::ordered_json oscillations = nlohmann::ordered_json::array();

  std::vector<double> sorted_temps = temps;
  std::sort(sorted_temps.begin(), sorted_temps.end());

  std::vector<double> vars;
  for (double t : sorted_temps) {
    const WavePacketState rt = make_rt_state(lat, t, center);
    const WavePacketState rkt = make_rkt_state(lat, t, center, k_numbers);
    for (const auto& [tag, state] :
         {std::pair<const char*, const WavePacketState*>{"rt", &rt},
          std::pair<const char*, const WavePacketState*>{"rkt", &rkt}}) {
      const std::string path =
          out_dir + "/wavefunction_" + tag + "_T" + temp_tag(t) + ".csv";
      CsvWriter csv(path);
      csv.row({"r", "re_psi", "im_psi", "abs_psi"});
      const AmplitudeField pos = state->position_field();
      for (std::size_t j = 0; j < pos.amp.size(); ++j)
        csv.row({format_double(lat->position(j)[0]),
                 format_double(pos.amp[j].real()),
                 format_double(pos.amp[j].imag()),
                 format_double(std::abs(pos.amp[j]))});
      files.push_back(path);
    }
    vars.push_back(profile_variance(*lat, rt));
    variances.push_back(vars.back());
    oscillations.push_back(sign_changes(rkt.position_field().amp));
  }

  bool monotone = true;
  for (std::size_t i = 1; i < vars.size(); ++i)
    if (!(vars[i] < vars[i - 1])) monotone = false;

  bool oscillatory = true;
  bool has_momentum = false;
  for (int a = 0; a < lat->dim(); ++a)
    if (k_numbers[a] != 0) has_momentum = true;
  if (has_momentum)
    for (const auto& o : oscillations)
      if (o.get<int>() < 2) oscillatory = false;

  summary["temps"] = sorted_temps;
  summary["rt_position_variance"] = variances;
  summary["rkt_real_part_sign_changes"] = oscillations;
  summary["monotone_localization"] = monotone;
  summary["oscillatory_real_part"] = !has_momentum || oscillatory;
  summary["files"] = files;
  summary["passed"] = monotone && (!has_momentum || oscillatory);
  return summary.dump(2) + "\n";
}

std::string run_kernel_dump(const RunConfig& cfg, const std::string& out_path) {
  const LatticePtr lat = config_lattice(cfg);
  const double beta = 1.0 / cfg.temperature;

  CsvWriter csv(out_path);
  csv.row({"separation", "exact", "gaussian", "rel_error"});
  double worst_quarter = 0.0;
  for (int j = 0; j <= lat->points_per_axis() / 2; ++j) {
    Vec3 r1 = kZeroVec;
    r1[0] = lat->position_coord(j);
    const double exact = boltzmann_kernel_exact(*lat, beta, r1, kZeroVec).real();
    const double gauss = boltzmann_kernel_gaussian(*lat, beta, r1, kZeroVec);
    const double rel = std::abs(exact - gauss) / gauss;
    if (r1[0] <= lat->box_length() / 4.0) worst_quarter = std::max(worst_quarter, rel);
    csv.row({format_double(r1[0]), format_double(exact), format_double(gauss),
             format_double(rel)});
  }
  nlohmann::ordered_json summary;
  summary["schema"] = 1;
  summary["file"] = out_path;
  summary["max_rel_error_within_quarter_box"] = worst_quarter;
  summary["regime_ok"] = regime_check(*lat, beta).ok();
  return summary.dump(2) + "\n";
}

std::string run_spectrum_dump(const RunConfig& cfg,
                              const std::string& operator_kind,
                              const std::string& out_path) {
  const LatticePtr lat = config_lattice(cfg);
  if (lat->site_count() > 512)
    throw ConfigError("spectrum: capped at M^D <= 512");
  const double beta = 1.0 / cfg.temperature;
  const TemperatureSplit split(cfg.temperature, cfg.split_fraction);
  const std::size_t n = lat->site_count();

  OperatorMatrix a(Basis::momentum, n);
  if (operator_kind == "identity") {
    a = OperatorMatrix::identity(Basis::momentum, n);
  } else if (operator_kind == "projector") {
    Idx3 site = kZeroIdx;
    for (int ax = 0; ax < lat->dim(); ++ax) site[ax] = lat->points_per_axis() / 2;
    a.at(lat->flatten(site), lat->flatten(site)) = 1.0;
  } else if (operator_kind == "random") {
    std::mt19937_64 rng(cfg.seed);
    for (std::size_t i = 0; i < n; ++i) {
      a.at(i, i) = (rng() >> 11) * 0x1.0p-53 - 0.5;
      for (std::size_t j = i + 1; j < n; ++j) {
        const cplx v((rng() >> 11) * 0x1.0p-53 - 0.5,
                     (rng() >> 11) * 0x1.0p-53 - 0.5);
        a.at(i, j) = v;
        a.at(j, i) = std::conj(v);
      }
    }
  } else {
    throw ConfigError("spectrum: operator must be identity, projector or random");
  }

  const SpectralLines eig = greens_eigen(*lat, beta, a, a);
  const GreensWavepacket wp = greens_wavepacket(*lat, split, a, a);

  CsvWriter csv(out_path);
  csv.row({"omega", "weight_re", "weight_im", "representation"});
  for (const auto& l : eig.lines)
    csv.row({format_double(l.omega), format_double(l.weight.real()),
             format_double(l.weight.imag()), "eigen"});
  for (const auto& l : wp.lines.lines)
    csv.row({format_double(l.omega), format_double(l.weight.real()),
             format_double(l.weight.imag()), "wavepacket"});

  const SpectrumComparison cmp = compare_spectra(eig, wp.lines, 1e-6);
  nlohmann::ordered_json summary;
  summary["schema"] = 1;
  summary["file"] = out_path;
  summary["lines"] = eig.lines.size();
  summary["max_rel_weight_error"] = cmp.max_rel_weight_error;
  summary["unmatched"] = cmp.unmatched_a + cmp.unmatched_b;
  summary["regime_ok"] = wp.regime_r.ok() && wp.regime_k.ok();
  return summary.dump(2) + "\n";
}

std::string run_sweep(const RunConfig& cfg, const std::string& parameter,
                      const std::vector<double>& values,
                      const std::string& out_path) {
  if (values.empty()) throw ConfigError("sweep: empty value list");
  if (parameter != "T" && parameter != "x" && parameter != "M")
    throw ConfigError("sweep: parameter must be T, x or M");

  // validate the whole range before computing anything
  for (double v : values) {
    if (parameter == "T") {
      const double t_min = 16.0 / (cfg.mass * cfg.box_length * cfg.box_length);
      if (v < t_min) throw ConfigError("sweep: temperature out of range");
    } else if (parameter == "x") {
      if (v < 0.05 || v > 0.95) throw ConfigError("sweep: x out of range");
    } else {
      const int m = static_cast<int>(v);
      if (m != v || m < 4 || m % 2 != 0 || m > 256)
        throw ConfigError("sweep: M must be an even integer in [4, 256]");
    }
  }

  CsvWriter csv(out_path);
  csv.row({"parameter", "value", "split_max_rel", "rkt_diag_rel", "rt_max_error",
           "uncertainty_product_dev"});

  for (double v : values) {
    RunConfig point = cfg;
    if (parameter == "T") point.temperature = v;
    else if (parameter == "x") point.split_fraction = v;
    else point.points = static_cast<int>(v);

    const LatticePtr lat =
        make_lattice(point.dim, point.box_length, point.points, point.mass);
    const TemperatureSplit split(point.temperature, point.split_fraction);

    double split_max = 0.0;
    const double band = kPi * lat->points_per_axis() / (2.0 * lat->box_length());
    for (std::size_t ks = 0; ks < lat->site_count(); ++ks) {
      const Vec3 k = lat->momentum(ks);
      double k2 = 0.0;
      for (int a = 0; a < lat->dim(); ++a) k2 += k[a] * k[a];
      if (std::sqrt(k2) > band) continue;
      split_max = std::max(
          split_max,
          verify_split(*lat, split, lat->momentum_numbers(ks)).rel_error);
    }

    const RktReconstruction rkt = reconstruct_from_rkt(*lat, split);
    const OperatorMatrix rt = reconstruct_from_rt(*lat, 1.0 / point.temperature);
    const OperatorMatrix ref =
        boltzmann_matrix(*lat, 1.0 / point.temperature, Basis::momentum);

    Vec3 center = kZeroVec;
    center[0] = lat->box_length() / 2.0;
    Idx3 kn = kZeroIdx;
    kn[0] = std::min(3, lat->points_per_axis() / 2 - 1);
    const WavePacketState s = make_rkt_state(lat, point.temperature, center, kn);
    const Uncertainty u = uncertainty(s);
    double udev = 0.0;
    for (int a = 0; a < lat->dim(); ++a)
      udev = std::max(udev, std::abs(u.product[a] - 0.5));

    csv.row({parameter, format_double(v), format_double(split_max),
             format_double(rkt.max_diag_rel_error),
             format_double(max_abs_diff(rt, ref)), format_double(udev)});
  }

  nlohmann::ordered_json summary;
  summary["schema"] = 1;
  summary["file"] = out_path;
  summary["points"] = values.size();
  return summary.dump(2) + "\n";
}

} // namespace twpk
