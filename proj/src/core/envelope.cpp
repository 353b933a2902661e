#include "envelope.hpp"

#include <cmath>
#include <stdexcept>

namespace twpk {

namespace {

double measured_sigma(const Lattice& lat, const AmplitudeField& pos) {
  // min-image spread about the origin, worst axis
  double total = 0.0;
  std::vector<double> m2(lat.dim(), 0.0);
  std::vector<double> m1(lat.dim(), 0.0);
  for (std::size_t s = 0; s < pos.amp.size(); ++s) {
    const double w = std::norm(pos.amp[s]);
    const Vec3 r = lat.position(s);
    total += w;
    for (int a = 0; a < lat.dim(); ++a) {
      const double d = lat.min_image(r[a]);
      m1[a] += w * d;
      m2[a] += w * d * d;
    }
  }
  double sig = 0.0;
  for (int a = 0; a < lat.dim(); ++a) {
    const double mean = m1[a] / total;
    sig = std::max(sig, std::sqrt(std::max(0.0, m2[a] / total - mean * mean)));
  }
  return sig;
}

} // namespace

Envelope::Envelope(LatticePtr lat, std::vector<cplx> amps, EnvelopeKind kind,
                   double beta)
    : lat_(std::move(lat)), amp_(std::move(amps)), kind_(kind), beta_(beta) {
  if (amp_.size() != lat_->site_count())
    throw std::invalid_argument("envelope: amplitude count does not match lattice");
  if (norm2() <= 0.0)
    throw std::invalid_argument("envelope: norm must be positive");
  if (kind_ == EnvelopeKind::thermal) {
    const double lambda = std::sqrt(2.0 * beta_ / lat_->mass());
    sigma_ = lambda / (2.0 * std::sqrt(2.0));
  } else {
    sigma_ = measured_sigma(*lat_, position_profile());
  }
}

Envelope Envelope::delta_peaked(LatticePtr lat) {
  std::vector<cplx> a(lat->site_count(), cplx(0.0, 0.0));
  Idx3 origin = kZeroIdx;
  for (int ax = 0; ax < lat->dim(); ++ax) origin[ax] = lat->points_per_axis() / 2;
  a[lat->flatten(origin)] = 1.0;
  return Envelope(std::move(lat), std::move(a), EnvelopeKind::delta_peaked, 0.0);
}

Envelope Envelope::thermal(LatticePtr lat, double beta) {
  if (!(beta > 0.0))
    throw std::invalid_argument("thermal envelope: beta must be positive");
  const double boxnorm = std::pow(lat->box_length(), -0.5 * lat->dim());
  std::vector<cplx> a(lat->site_count());
  for (std::size_t s = 0; s < a.size(); ++s)
    a[s] = boxnorm * std::exp(-0.5 * beta * lat->dispersion(s));
  return Envelope(std::move(lat), std::move(a), EnvelopeKind::thermal, beta);
}

Envelope Envelope::thermal_boxed(LatticePtr lat, double beta) {
  const double boxnorm = std::pow(lat->box_length(), -0.5 * lat->dim());
  return thermal(std::move(lat), beta).scaled(boxnorm);
}

Envelope Envelope::from_amplitudes(LatticePtr lat, std::vector<cplx> amps) {
  Envelope env(std::move(lat), std::move(amps), EnvelopeKind::generic, 0.0);
  double peak = 0.0;
  for (const auto& v : env.amp_) peak = std::max(peak, std::abs(v));
  if (env.symmetry_defect() > 1e-12 * peak)
    throw std::invalid_argument("envelope: amplitudes are not symmetric under k -> -k");
  return env;
}

double Envelope::norm2() const {
  double s = 0.0;
  for (const auto& v : amp_) s += std::norm(v);
  return s;
}

Envelope Envelope::normalized() const { return scaled(1.0 / std::sqrt(norm2())); }

Envelope Envelope::scaled(double factor) const {
  Envelope out = *this;
  for (auto& v : out.amp_) v *= factor;
  return out;
}

AmplitudeField Envelope::position_profile() const {
  return lat_->to_position(AmplitudeField{Basis::momentum, amp_});
}

double Envelope::symmetry_defect() const {
  const Lattice& lat = *lat_;
  double worst = 0.0;
  for (std::size_t s = 0; s < amp_.size(); ++s) {
    const Idx3 n = lat.momentum_numbers(s);
    Idx3 neg_site = kZeroIdx;
    bool paired = true;
    for (int a = 0; a < lat.dim(); ++a) {
      if (n[a] == -lat.points_per_axis() / 2) { paired = false; break; }
      neg_site[a] = lat.site_of_number(-n[a]);
    }
    if (!paired) continue; // edge mode has no lattice partner
    worst = std::max(worst, std::abs(amp_[s] - amp_[lat.flatten(neg_site)]));
  }
  return worst;
}

} // namespace twpk
