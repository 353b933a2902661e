#include "greens.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace twpk {

namespace {

void check_operator(const Lattice& lat, const OperatorMatrix& m, const char* what) {
  if (m.basis != Basis::momentum)
    throw std::invalid_argument(std::string(what) +
                                ": operator must be in the momentum basis");
  if (m.dim != lat.site_count())
    throw std::invalid_argument(std::string(what) +
                                ": operator dimension does not match lattice");
}

// merge (omega, weight) pairs whose frequencies agree within tol
SpectralLines merge_lines(std::vector<SpectralLine> raw, double tol) {
  std::sort(raw.begin(), raw.end(), [](const SpectralLine& x, const SpectralLine& y) {
    return x.omega < y.omega;
  });
  SpectralLines out;
  out.grouping_tol = tol;
  for (const auto& l : raw) {
    if (!out.lines.empty() && l.omega - out.lines.back().omega <= tol) {
      // merged weight at the first frequency of the group
      out.lines.back().weight += l.weight;
    } else {
      out.lines.push_back(l);
    }
  }
  return out;
}

// effective Boltzmann factor of the wave-packet representation
double split_factor(const Lattice& lat, const TemperatureSplit& split,
                    std::size_t ksite) {
  const Vec3 k = lat.momentum(ksite);
  double sum = 0.0;
  for (std::size_t ks = 0; ks < lat.site_count(); ++ks) {
    const Vec3 kk = lat.momentum(ks);
    Vec3 diff = kZeroVec;
    for (int a = 0; a < lat.dim(); ++a) diff[a] = k[a] - kk[a];
    sum += std::exp(-split.beta_k() * lat.dispersion(ks)) *
           std::exp(-split.beta_r() * lat.dispersion_of(diff));
  }
  return rkt_prefactor(split, lat.mass(), lat.dim()) /
         std::pow(lat.box_length(), lat.dim()) * sum;
}

// sum_R (L/M)^D <k''|R,K,T_R><R,K,T_R|k> must be delta_{k'' k} |<k-K|phi_TR>|^2
double r_reduction_defect(const Lattice& lat, const TemperatureSplit& split,
                          std::size_t kpp, std::size_t kap, std::size_t k) {
  const double beta_r = split.beta_r();
  const double boxnorm = std::pow(lat.box_length(), -static_cast<double>(lat.dim()));
  const Idx3 knum = lat.momentum_numbers(kap);
  const Vec3 kv1 = lat.momentum(kpp);
  const Vec3 kv0 = lat.momentum(k);
  const double a1 =
      boxnorm * std::exp(-0.5 * beta_r * lat.dispersion(lat.shifted_ksite(kpp, knum)));
  const double a0 =
      boxnorm * std::exp(-0.5 * beta_r * lat.dispersion(lat.shifted_ksite(k, knum)));
  cplx sum(0.0, 0.0);
  for (std::size_t rs = 0; rs < lat.site_count(); ++rs) {
    const Vec3 r = lat.position(rs);
    double phase = 0.0;
    for (int a = 0; a < lat.dim(); ++a) phase += (kv0[a] - kv1[a]) * r[a];
    sum += std::polar(lat.position_weight() * a1 * a0, phase);
  }
  const double expect = (kpp == k) ? a0 * a0 * std::pow(lat.box_length(), lat.dim())
                                   : 0.0;
  return std::abs(sum - expect);
}

} // namespace

double default_grouping_tol(const Lattice& lat) {
  double wmax = 0.0;
  for (std::size_t s = 0; s < lat.site_count(); ++s)
    wmax = std::max(wmax, lat.dispersion(s));
  return 1e-9 * (wmax + 1.0);
}

SpectralLines greens_eigen(const Lattice& lat, double beta,
                           const OperatorMatrix& a, const OperatorMatrix& b) {
  check_operator(lat, a, "greens_eigen");
  check_operator(lat, b, "greens_eigen");
  const std::size_t n = lat.site_count();
  double z = 0.0;
  for (std::size_t s = 0; s < n; ++s) z += std::exp(-beta * lat.dispersion(s));

  std::vector<SpectralLine> raw;
  raw.reserve(n * n);
  for (std::size_t k = 0; k < n; ++k) {
    const double boltz = std::exp(-beta * lat.dispersion(k));
    for (std::size_t kp = 0; kp < n; ++kp) {
      const cplx w = 2.0 * kPi / z * boltz * a.at(k, kp) * b.at(kp, k);
      if (w == cplx(0.0, 0.0)) continue;
      raw.push_back({lat.dispersion(kp) - lat.dispersion(k), w});
    }
  }
  return merge_lines(std::move(raw), default_grouping_tol(lat));
}

GreensWavepacket greens_wavepacket(const Lattice& lat,
                                   const TemperatureSplit& split,
                                   const OperatorMatrix& a,
                                   const OperatorMatrix& b) {
  check_operator(lat, a, "greens_wavepacket");
  check_operator(lat, b, "greens_wavepacket");
  const std::size_t n = lat.site_count();

  GreensWavepacket out;
  out.regime_r = regime_check(lat, split.beta_r());
  out.regime_k = regime_check(lat, split.beta_k());

  // spot-check the R-integral reduction that collapses k'' onto k
  const std::size_t probe = std::max<std::size_t>(1, n / 3);
  for (std::size_t i = 0; i < 3; ++i) {
    const std::size_t kpp = (i * probe) % n;
    const std::size_t kap = (i * probe + probe / 2) % n;
    const std::size_t k = (i + 1) * probe % n;
    if (r_reduction_defect(lat, split, kpp, kap, k) > 1e-10 ||
        r_reduction_defect(lat, split, k, kap, k) > 1e-10)
      throw std::runtime_error(
          "greens_wavepacket: R-integral reduction identity violated");
  }

  const double beta = 1.0 / split.temperature();
  double z = 0.0;
  for (std::size_t s = 0; s < n; ++s) z += std::exp(-beta * lat.dispersion(s));

  std::vector<double> factor(n);
  for (std::size_t k = 0; k < n; ++k) factor[k] = split_factor(lat, split, k);

  std::vector<SpectralLine> raw;
  raw.reserve(n * n);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t kp = 0; kp < n; ++kp) {
      const cplx w = 2.0 * kPi / z * factor[k] * a.at(k, kp) * b.at(kp, k);
      if (w == cplx(0.0, 0.0)) continue;
      raw.push_back({lat.dispersion(kp) - lat.dispersion(k), w});
    }
  out.lines = merge_lines(std::move(raw), default_grouping_tol(lat));
  return out;
}

SpectrumComparison compare_spectra(const SpectralLines& a,
                                   const SpectralLines& b, double tol) {
  const double group =
      std::max(a.grouping_tol, b.grouping_tol) > 0.0
          ? std::max(a.grouping_tol, b.grouping_tol)
          : 1e-12;
  SpectrumComparison cmp;
  std::size_t i = 0, j = 0;
  while (i < a.lines.size() && j < b.lines.size()) {
    const double wa = a.lines[i].omega, wb = b.lines[j].omega;
    if (std::abs(wa - wb) <= group) {
      const double denom =
          std::max(std::abs(a.lines[i].weight), std::abs(b.lines[j].weight));
      const double rel =
          denom > 0.0 ? std::abs(a.lines[i].weight - b.lines[j].weight) / denom
                      : 0.0;
      cmp.max_rel_weight_error = std::max(cmp.max_rel_weight_error, rel);
      if (rel > tol) cmp.flagged.push_back({wa, rel});
      ++i;
      ++j;
    } else if (wa < wb) {
      ++cmp.unmatched_a;
      ++i;
    } else {
      ++cmp.unmatched_b;
      ++j;
    }
  }
  cmp.unmatched_a += a.lines.size() - i;
  cmp.unmatched_b += b.lines.size() - j;
  return cmp;
}

} // namespace twpk
