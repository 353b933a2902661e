#include "thermal.hpp"

#include <cmath>
#include <stdexcept>

#include "wavepacket.hpp"

namespace twpk {

RegimeFlags regime_check(const Lattice& lat, double beta) {
  RegimeFlags f;
  f.uv_ok = std::exp(-beta * lat.max_dispersion()) < 1e-14;
  const double lambda = thermal_length(beta, lat.mass());
  const double ratio = lat.box_length() / lambda;
  f.ir_ok = std::exp(-ratio * ratio) < 1e-14;
  return f;
}

double thermal_length(double beta, double mass) {
  return std::sqrt(2.0 * beta / mass);
}

ThermalParams thermal_params(const Lattice& lat, double temperature) {
  if (!(temperature > 0.0))
    throw std::invalid_argument("thermal_params: temperature must be positive");
  ThermalParams p;
  p.temperature = temperature;
  p.beta = 1.0 / temperature;
  p.lambda = thermal_length(p.beta, lat.mass());
  p.z_lattice = 0.0;
  for (std::size_t ks = 0; ks < lat.site_count(); ++ks)
    p.z_lattice += std::exp(-p.beta * lat.dispersion(ks));
  p.z_continuum =
      std::pow(lat.box_length() / (p.lambda * std::sqrt(kPi)), lat.dim());
  p.regime = regime_check(lat, p.beta);
  return p;
}

TemperatureSplit::TemperatureSplit(double temperature, double fraction)
    : t_(temperature), x_(fraction) {
  if (!(temperature > 0.0))
    throw std::invalid_argument("temperature split: temperature must be positive");
  if (!(fraction >= 0.05 && fraction <= 0.95))
    throw std::invalid_argument(
        "temperature split: fraction must lie in [0.05, 0.95]");
}

double rkt_prefactor(const TemperatureSplit& split, double mass, int dim) {
  const double lam_t = thermal_length(1.0 / split.temperature(), mass);
  const double lam_r = thermal_length(split.beta_r(), mass);
  const double lam_k = thermal_length(split.beta_k(), mass);
  return std::pow(std::sqrt(kPi) * lam_r * lam_k / lam_t, dim);
}

cplx boltzmann_kernel_exact(const Lattice& lat, double beta, const Vec3& r1,
                            const Vec3& r0) {
  cplx sum(0.0, 0.0);
  for (std::size_t ks = 0; ks < lat.site_count(); ++ks) {
    const Vec3 k = lat.momentum(ks);
    double phase = 0.0;
    for (int a = 0; a < lat.dim(); ++a) phase += k[a] * (r1[a] - r0[a]);
    sum += std::polar(std::exp(-beta * lat.dispersion(ks)), phase);
  }
  return sum / std::pow(lat.box_length(), lat.dim());
}

double boltzmann_kernel_gaussian(const Lattice& lat, double beta, const Vec3& r1,
                                 const Vec3& r0) {
  const double lambda = thermal_length(beta, lat.mass());
  const double z_over_v =
      std::pow(1.0 / (lambda * std::sqrt(kPi)), lat.dim());
  double d2 = 0.0;
  for (int a = 0; a < lat.dim(); ++a) {
    const double d = lat.min_image(r1[a] - r0[a]);
    d2 += d * d;
  }
  return z_over_v * std::exp(-d2 / (lambda * lambda));
}

OperatorMatrix boltzmann_matrix(const Lattice& lat, double beta, Basis basis) {
  const std::size_t n = lat.site_count();
  if (basis == Basis::momentum) {
    OperatorMatrix m(Basis::momentum, n);
    for (std::size_t i = 0; i < n; ++i)
      m.at(i, i) = std::exp(-beta * lat.dispersion(i));
    return m;
  }
  if (basis != Basis::position)
    throw std::invalid_argument("boltzmann_matrix: basis must be position or momentum");
  // conjugate by the unitary V[j,k] = e^{i k.r_j} (L/M)^{D/2} / L^{D/2}
  OperatorMatrix m(Basis::position, n);
  const double cell = lat.position_weight() / std::pow(lat.box_length(), lat.dim());
  for (std::size_t ks = 0; ks < n; ++ks) {
    const double w = std::exp(-beta * lat.dispersion(ks)) * cell;
    const Vec3 k = lat.momentum(ks);
    for (std::size_t i = 0; i < n; ++i) {
      const Vec3 ri = lat.position(i);
      for (std::size_t j = 0; j < n; ++j) {
        const Vec3 rj = lat.position(j);
        double phase = 0.0;
        for (int a = 0; a < lat.dim(); ++a) phase += k[a] * (ri[a] - rj[a]);
        m.at(i, j) += std::polar(w, phase);
      }
    }
  }
  return m;
}

OperatorMatrix reconstruct_from_rt(const Lattice& lat, double beta) {
  const std::size_t n = lat.site_count();
  const double boxnorm = std::pow(lat.box_length(), -0.5 * lat.dim());
  OperatorMatrix m(Basis::momentum, n);

  std::vector<cplx> v(n);
  for (std::size_t rs = 0; rs < n; ++rs) {
    const Vec3 r = lat.position(rs);
    for (std::size_t ks = 0; ks < n; ++ks) {
      const Vec3 k = lat.momentum(ks);
      double phase = 0.0;
      for (int a = 0; a < lat.dim(); ++a) phase -= k[a] * r[a];
      v[ks] = std::polar(boxnorm * std::exp(-0.5 * beta * lat.dispersion(ks)),
                         phase);
    }
    for (std::size_t i = 0; i < n; ++i) {
      const cplx vi = v[i] * lat.position_weight();
      for (std::size_t j = 0; j < n; ++j)
        m.at(i, j) += vi * std::conj(v[j]);
    }
  }
  return m;
}

RktReconstruction reconstruct_from_rkt(const Lattice& lat,
                                       const TemperatureSplit& split) {
  const std::size_t n = lat.site_count();
  RktReconstruction out;
  out.regime_r = regime_check(lat, split.beta_r());
  out.regime_k = regime_check(lat, split.beta_k());
  out.matrix = OperatorMatrix(Basis::momentum, n);

  const double pref = rkt_prefactor(split, lat.mass(), lat.dim());
  const double boxnorm = std::pow(lat.box_length(), -static_cast<double>(lat.dim()));
  const double beta_r = split.beta_r();

  std::vector<cplx> v(n);
  for (std::size_t kappa = 0; kappa < n; ++kappa) { // K label
    const Idx3 knum = lat.momentum_numbers(kappa);
    const double boltz = std::exp(-split.beta_k() * lat.dispersion(kappa));
    for (std::size_t rs = 0; rs < n; ++rs) {
      const Vec3 r = lat.position(rs);
      for (std::size_t ks = 0; ks < n; ++ks) {
        const Vec3 k = lat.momentum(ks);
        double phase = 0.0;
        for (int a = 0; a < lat.dim(); ++a) phase -= k[a] * r[a];
        const double eps_shift = lat.dispersion(lat.shifted_ksite(ks, knum));
        v[ks] = std::polar(boxnorm * std::exp(-0.5 * beta_r * eps_shift), phase);
      }
      const double w = pref * boltz * lat.position_weight();
      for (std::size_t i = 0; i < n; ++i) {
        const cplx vi = v[i] * w;
        for (std::size_t j = 0; j < n; ++j)
          out.matrix.at(i, j) += vi * std::conj(v[j]);
      }
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    const double ref = std::exp(-lat.dispersion(i) / split.temperature());
    const double rel = std::abs(out.matrix.at(i, i).real() - ref) / ref;
    const Idx3 nums = lat.momentum_numbers(i);
    bool unpaired = false;
    for (int a = 0; a < lat.dim(); ++a)
      if (nums[a] == -lat.points_per_axis() / 2) unpaired = true;
    if (unpaired)
      out.edge_diag_rel_error = std::max(out.edge_diag_rel_error, rel);
    else
      out.max_diag_rel_error = std::max(out.max_diag_rel_error, rel);
    for (std::size_t j = 0; j < n; ++j)
      if (i != j)
        out.max_offdiag = std::max(out.max_offdiag, std::abs(out.matrix.at(i, j)));
  }
  return out;
}

SplitCheck verify_split(const Lattice& lat, const TemperatureSplit& split,
                        const Idx3& k_numbers) {
  SplitCheck c;
  c.regime_r = regime_check(lat, split.beta_r());
  c.regime_k = regime_check(lat, split.beta_k());

  Vec3 k = kZeroVec;
  for (int a = 0; a < lat.dim(); ++a)
    k[a] = 2.0 * kPi * k_numbers[a] / lat.box_length();
  c.lhs = std::exp(-lat.dispersion_of(k) / split.temperature());

  // direct K-sum; eps_{k-K} at the true (unwrapped) momentum difference
  double sum = 0.0;
  for (std::size_t ks = 0; ks < lat.site_count(); ++ks) {
    const Vec3 kk = lat.momentum(ks);
    Vec3 diff = kZeroVec;
    for (int a = 0; a < lat.dim(); ++a) diff[a] = k[a] - kk[a];
    sum += std::exp(-split.beta_k() * lat.dispersion(ks)) *
           std::exp(-split.beta_r() * lat.dispersion_of(diff));
  }
  const double pref = rkt_prefactor(split, lat.mass(), lat.dim()) /
                      std::pow(lat.box_length(), lat.dim());
  c.rhs = pref * sum;
  c.rel_error = std::abs(c.rhs - c.lhs) / c.lhs;
  return c;
}

KernelSplitCheck kernel_split(const Lattice& lat, const TemperatureSplit& split,
                              const Vec3& r1, const Vec3& r0) {
  KernelSplitCheck c;
  c.regime_r = regime_check(lat, split.beta_r());
  c.regime_k = regime_check(lat, split.beta_k());
  c.direct = boltzmann_kernel_exact(lat, 1.0 / split.temperature(), r1, r0).real();
  const double kr = boltzmann_kernel_exact(lat, split.beta_r(), r1, r0).real();
  const double kk = boltzmann_kernel_exact(lat, split.beta_k(), r1, r0).real();
  c.product_form = rkt_prefactor(split, lat.mass(), lat.dim()) * kr * kk;
  c.rel_error = std::abs(c.product_form - c.direct) / std::abs(c.direct);
  return c;
}

} // namespace twpk
