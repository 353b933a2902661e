#include "wavepacket.hpp"

#include <cmath>
#include <stdexcept>

namespace twpk {

namespace {

void check_k_numbers(const Lattice& lat, const Idx3& n) {
  const int half = lat.points_per_axis() / 2;
  for (int a = 0; a < lat.dim(); ++a)
    if (n[a] < -half || n[a] >= half)
      throw std::invalid_argument("wavepacket: K is off the momentum grid");
}

void check_width(const WavePacketState& s, const char* what) {
  const double limit = s.lattice->box_length() / 8.0;
  if (s.sigma > limit * (1.0 + 1e-12))
    throw std::domain_error(std::string(what) +
                            ": packet too wide for minimum-image moments "
                            "(envelope sigma exceeds L/8)");
}

} // namespace

WavePacketState make_state(const WavePacketParams& p) {
  const LatticePtr& lat = p.envelope.lattice();
  check_k_numbers(*lat, p.k_numbers);

  WavePacketState s;
  s.lattice = lat;
  s.center = p.center;
  s.k_numbers = p.k_numbers;
  for (int a = 0; a < lat->dim(); ++a)
    s.k_vector[a] = 2.0 * kPi * p.k_numbers[a] / lat->box_length();
  s.sigma = p.envelope.nominal_sigma();

  const std::size_t n = lat->site_count();
  s.kamp.resize(n);
  for (std::size_t ks = 0; ks < n; ++ks) {
    const Vec3 k = lat->momentum(ks);
    double phase = 0.0;
    for (int a = 0; a < lat->dim(); ++a) phase -= k[a] * p.center[a];
    s.kamp[ks] = std::polar(1.0, phase) *
                 p.envelope.amp(lat->shifted_ksite(ks, p.k_numbers));
  }
  return s;
}

WavePacketState make_rt_state(LatticePtr lat, double temperature, Vec3 center) {
  if (!(temperature > 0.0))
    throw std::invalid_argument("make_rt_state: temperature must be positive");
  return make_state({center, kZeroIdx, Envelope::thermal(lat, 1.0 / temperature)});
}

WavePacketState make_rkt_state(LatticePtr lat, double temperature, Vec3 center,
                               Idx3 k_numbers) {
  if (!(temperature > 0.0))
    throw std::invalid_argument("make_rkt_state: temperature must be positive");
  return make_state(
      {center, k_numbers, Envelope::thermal_boxed(lat, 1.0 / temperature)});
}

cplx overlap(const WavePacketState& a, const WavePacketState& b) {
  if (a.lattice.get() != b.lattice.get())
    throw std::invalid_argument("overlap: states live on different lattices");
  cplx s(0.0, 0.0);
  for (std::size_t i = 0; i < a.kamp.size(); ++i)
    s += std::conj(a.kamp[i]) * b.kamp[i];
  return s;
}

cplx overlap(const WavePacketParams& a, const WavePacketParams& b) {
  if (a.envelope.lattice().get() != b.envelope.lattice().get())
    throw std::invalid_argument("overlap: params live on different lattices");
  return overlap(make_state(a), make_state(b));
}

cplx delta_phi(const Envelope& env, const Vec3& delta_r,
               const Idx3& delta_k_numbers) {
  const Lattice& lat = *env.lattice();
  Idx3 half_shift = kZeroIdx;
  for (int a = 0; a < lat.dim(); ++a) {
    if (delta_k_numbers[a] % 2 != 0)
      throw std::invalid_argument(
          "delta_phi: dK must be an even grid multiple per axis");
    half_shift[a] = delta_k_numbers[a] / 2;
  }
  Idx3 neg_half = kZeroIdx;
  for (int a = 0; a < lat.dim(); ++a) neg_half[a] = -half_shift[a];

  cplx sum(0.0, 0.0);
  for (std::size_t ps = 0; ps < lat.site_count(); ++ps) {
    const Vec3 p = lat.momentum(ps);
    double phase = 0.0;
    for (int a = 0; a < lat.dim(); ++a) phase += p[a] * delta_r[a];
    const cplx lo = env.amp(lat.shifted_ksite(ps, neg_half));  // p + dK/2
    const cplx hi = env.amp(lat.shifted_ksite(ps, half_shift)); // p - dK/2
    sum += std::polar(1.0, phase) * std::conj(hi) * lo;
  }
  return sum / env.norm2();
}

Vec3 momentum_mean(const WavePacketState& s) {
  const Lattice& lat = *s.lattice;
  Vec3 acc = kZeroVec;
  double norm = 0.0;
  for (std::size_t ks = 0; ks < s.kamp.size(); ++ks) {
    const double w = std::norm(s.kamp[ks]);
    const Vec3 k = lat.momentum(ks);
    norm += w;
    for (int a = 0; a < lat.dim(); ++a) acc[a] += w * k[a];
  }
  for (int a = 0; a < lat.dim(); ++a) acc[a] /= norm;
  return acc;
}

Vec3 position_mean(const WavePacketState& s) {
  check_width(s, "position_mean");
  const Lattice& lat = *s.lattice;
  const AmplitudeField pos = s.position_field();
  Vec3 acc = kZeroVec;
  double norm = 0.0;
  for (std::size_t j = 0; j < pos.amp.size(); ++j) {
    const double w = std::norm(pos.amp[j]);
    const Vec3 r = lat.position(j);
    norm += w;
    for (int a = 0; a < lat.dim(); ++a)
      acc[a] += w * lat.min_image(r[a] - s.center[a]);
  }
  Vec3 mean = kZeroVec;
  for (int a = 0; a < lat.dim(); ++a) mean[a] = s.center[a] + acc[a] / norm;
  return mean;
}

EnergyMoments energy_moments(const WavePacketState& s) {
  const Lattice& lat = *s.lattice;
  double norm = 0.0, e1 = 0.0, e2 = 0.0, peak = 0.0, edge = 0.0;
  for (std::size_t ks = 0; ks < s.kamp.size(); ++ks) {
    const double w = std::norm(s.kamp[ks]);
    const double eps = lat.dispersion(ks);
    norm += w;
    e1 += w * eps;
    e2 += w * eps * eps;
    peak = std::max(peak, w);
    if (lat.on_zone_edge(ks)) edge = std::max(edge, w);
  }
  EnergyMoments m;
  m.mean = e1 / norm;
  m.variance = e2 / norm - m.mean * m.mean;
  m.uv_ok = edge <= 1e-14 * peak;
  return m;
}

Uncertainty uncertainty(const WavePacketState& s) {
  check_width(s, "uncertainty");
  const Lattice& lat = *s.lattice;

  Uncertainty u;
  double norm = 0.0;
  std::array<double, 3> k1{}, k2{};
  for (std::size_t ks = 0; ks < s.kamp.size(); ++ks) {
    const double w = std::norm(s.kamp[ks]);
    const Vec3 k = lat.momentum(ks);
    norm += w;
    for (int a = 0; a < lat.dim(); ++a) {
      k1[a] += w * k[a];
      k2[a] += w * k[a] * k[a];
    }
  }
  const AmplitudeField pos = s.position_field();
  std::array<double, 3> x1{}, x2{};
  double pnorm = 0.0;
  for (std::size_t j = 0; j < pos.amp.size(); ++j) {
    const double w = std::norm(pos.amp[j]);
    const Vec3 r = lat.position(j);
    pnorm += w;
    for (int a = 0; a < lat.dim(); ++a) {
      const double d = lat.min_image(r[a] - s.center[a]);
      x1[a] += w * d;
      x2[a] += w * d * d;
    }
  }
  for (int a = 0; a < lat.dim(); ++a) {
    const double km = k1[a] / norm;
    const double xm = x1[a] / pnorm;
    u.dk2[a] = k2[a] / norm - km * km;
    u.dx2[a] = x2[a] / pnorm - xm * xm;
    u.product[a] = std::sqrt(u.dk2[a] * u.dx2[a]);
  }
  return u;
}

WavePacketState evolve(const WavePacketState& s, double t) {
  const Lattice& lat = *s.lattice;
  WavePacketState out = s;
  for (std::size_t ks = 0; ks < out.kamp.size(); ++ks)
    out.kamp[ks] *= std::polar(1.0, -lat.dispersion(ks) * t);
  for (int a = 0; a < lat.dim(); ++a)
    out.center[a] += s.k_vector[a] * t / lat.mass();
  out.time += t;
  return out;
}

std::array<cplx, 3> coherent_alpha(const Vec3& center, const Vec3& k_vector,
                                   double temperature, double mass, int dim) {
  if (!(temperature > 0.0))
    throw std::invalid_argument("coherent_alpha: temperature must be positive");
  const double lambda = std::sqrt(2.0 / (mass * temperature));
  std::array<cplx, 3> alpha{};
  for (int a = 0; a < dim; ++a)
    alpha[a] = cplx(center[a] / lambda, lambda * k_vector[a] / std::sqrt(2.0));
  return alpha;
}

AmplitudeField coherent_wavefunction(const Lattice& lat,
                                     const std::array<cplx, 3>& alpha,
                                     double omega) {
  if (!(omega > 0.0))
    throw std::invalid_argument("coherent_wavefunction: omega must be positive");
  const double m = lat.mass();
  // invert alpha = (m w x_a + i k_a) / sqrt(2 m w)
  Vec3 xa = kZeroVec, ka = kZeroVec;
  for (int a = 0; a < lat.dim(); ++a) {
    xa[a] = alpha[a].real() * std::sqrt(2.0 / (m * omega));
    ka[a] = alpha[a].imag() * std::sqrt(2.0 * m * omega);
  }
  std::vector<cplx> amp(lat.site_count());
  for (std::size_t j = 0; j < amp.size(); ++j) {
    const Vec3 r = lat.position(j);
    double gauss = 0.0, phase = 0.0;
    for (int a = 0; a < lat.dim(); ++a) {
      const double d = lat.min_image(r[a] - xa[a]);
      gauss += d * d;
      phase += ka[a] * d;
    }
    amp[j] = std::polar(std::exp(-0.5 * m * omega * gauss), phase);
  }
  return AmplitudeField{Basis::position, std::move(amp)};
}

namespace {

double coherent_distance(const Lattice& lat, const std::vector<double>& packet,
                         const Vec3& center, double omega) {
  const double m = lat.mass();
  double norm = 0.0;
  std::vector<double> gauss(lat.site_count());
  for (std::size_t j = 0; j < gauss.size(); ++j) {
    const Vec3 r = lat.position(j);
    double q = 0.0;
    for (int a = 0; a < lat.dim(); ++a) {
      const double d = lat.min_image(r[a] - center[a]);
      q += d * d;
    }
    gauss[j] = std::exp(-0.5 * m * omega * q);
    norm += gauss[j] * gauss[j];
  }
  norm = std::sqrt(norm);
  double dist = 0.0;
  for (std::size_t j = 0; j < gauss.size(); ++j) {
    const double diff = packet[j] - gauss[j] / norm;
    dist += diff * diff;
  }
  return dist;
}

} // namespace

FrequencyMatch match_frequency(const WavePacketState& s) {
  if (!s.lattice) throw std::invalid_argument("match_frequency: empty state");
  const Lattice& lat = *s.lattice;

  const AmplitudeField pos = s.position_field();
  std::vector<double> packet(pos.amp.size());
  double norm = 0.0;
  for (std::size_t j = 0; j < packet.size(); ++j) {
    packet[j] = std::abs(pos.amp[j]);
    norm += packet[j] * packet[j];
  }
  norm = std::sqrt(norm);
  for (auto& v : packet) v /= norm;

  // width-implied starting scale; the scan brackets it generously
  const double sigma2 = std::max(s.sigma * s.sigma, 1e-12);
  const double omega0 = 1.0 / (2.0 * lat.mass() * sigma2);
  double lo = omega0 / 32.0, hi = omega0 * 32.0;
  for (int it = 0; it < 200; ++it) {
    const double m1 = lo + (hi - lo) / 3.0;
    const double m2 = hi - (hi - lo) / 3.0;
    if (coherent_distance(lat, packet, s.center, m1) <
        coherent_distance(lat, packet, s.center, m2))
      hi = m2;
    else
      lo = m1;
  }
  FrequencyMatch fm;
  fm.omega_star = 0.5 * (lo + hi);
  fm.distance = coherent_distance(lat, packet, s.center, fm.omega_star);
  // label identification omega = k_B T only applies to thermal packets
  fm.omega_label = 0.0;
  if (s.sigma > 0.0) {
    // sigma = lambda_T / (2 sqrt 2) with lambda_T^2 = 2 / (m T)
    const double lambda2 = 8.0 * s.sigma * s.sigma;
    fm.omega_label = 2.0 / (lat.mass() * lambda2);
  }
  return fm;
}

} // namespace twpk
