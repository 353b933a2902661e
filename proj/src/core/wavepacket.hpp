#pragma once

#include <optional>
#include <vector>

#include "envelope.hpp"
#include "lattice.hpp"
#include "types.hpp"

namespace twpk {

// Labels of a wave-packet state: mean position R (any real vector; grid
// alignment is only required by closure sums), mean momentum K given by its
// integer grid numbers, and the envelope fixing the spread.
struct WavePacketParams {
  Vec3 center = kZeroVec; // R
  Idx3 k_numbers = kZeroIdx; // K = 2 pi n / L per axis, n in [-M/2, M/2)
  Envelope envelope;
};

// A wave-packet held as momentum amplitudes <k|R,K> = e^{-i k.R} <k-K|phi>.
// `center` tracks the nominal packet center; free evolution advances it by
// K t / m without wrapping so position moments can follow the packet across
// box boundaries.
struct WavePacketState {
  LatticePtr lattice;
  std::vector<cplx> kamp;
  Vec3 center = kZeroVec;
  Idx3 k_numbers = kZeroIdx;
  Vec3 k_vector = kZeroVec;
  double sigma = 0.0; // nominal per-axis spatial spread of the envelope
  double time = 0.0;

  AmplitudeField momentum_field() const {
    return AmplitudeField{Basis::momentum, kamp};
  }
  AmplitudeField position_field() const {
    return lattice->to_position(momentum_field());
  }
};

WavePacketState make_state(const WavePacketParams& p);

// |R,T> = a^dag_{R,T}|v>: thermal envelope, K = 0
WavePacketState make_rt_state(LatticePtr lat, double temperature, Vec3 center);
// |R,K,T>: thermal envelope with the L^{-D/2} convention
WavePacketState make_rkt_state(LatticePtr lat, double temperature, Vec3 center,
                               Idx3 k_numbers);

// Direct inner product sum_k conj(<k|a>) <k|b>. Errors on lattice mismatch.
cplx overlap(const WavePacketState& a, const WavePacketState& b);
cplx overlap(const WavePacketParams& a, const WavePacketParams& b);

// Normalized overlap kernel
//   delta_phi(dR, dK) = <phi|phi>^{-1} sum_p e^{i p.dR}
//                       <phi|p - dK/2> <p + dK/2|phi>,
// with delta_phi(0,0) = 1. The half shifts keep envelope arguments on the
// grid only when every component of dK is an even grid multiple; odd shifts
// are rejected.
cplx delta_phi(const Envelope& env, const Vec3& delta_r, const Idx3& delta_k_numbers);

Vec3 momentum_mean(const WavePacketState& s);

// Position moments use the minimum-image displacement about the tracked
// center. They require the packet to fit the box: nominal sigma <= L/8.
Vec3 position_mean(const WavePacketState& s);

struct EnergyMoments {
  double mean = 0.0;
  double variance = 0.0;
  bool uv_ok = true; // false when the momentum distribution touches the zone edge
};
EnergyMoments energy_moments(const WavePacketState& s);
inline double energy_mean(const WavePacketState& s) { return energy_moments(s).mean; }
inline double energy_variance(const WavePacketState& s) { return energy_moments(s).variance; }

struct Uncertainty {
  std::array<double, 3> dk2{};     // momentum variance per axis
  std::array<double, 3> dx2{};     // position variance per axis
  std::array<double, 3> product{}; // dk * dx per axis
};
Uncertainty uncertainty(const WavePacketState& s);

// Free evolution: each momentum amplitude acquires e^{-i eps_k t}; the
// tracked center advances by K t / m. Norm and momentum mean are conserved
// exactly.
WavePacketState evolve(const WavePacketState& s, double t);

// Coherent-state identification alpha = R / lambda_T + i lambda_T K / sqrt(2).
std::array<cplx, 3> coherent_alpha(const Vec3& center, const Vec3& k_vector,
                                   double temperature, double mass, int dim);

// Oscillator coherent-state wave function on the lattice (min-image about the
// center encoded in alpha): prod_axis e^{-m w (x - x_a)^2 / 2} e^{i k_a (x - x_a)}.
AmplitudeField coherent_wavefunction(const Lattice& lat,
                                     const std::array<cplx, 3>& alpha,
                                     double omega);

// Scans the oscillator frequency minimizing the L2 distance between the
// normalized packet modulus and the normalized coherent Gaussian. The width
// match gives omega ~ 2 k_B T, while the textbook identification in terms of
// the packet labels reads omega = k_B T; both are reported, neither adopted.
struct FrequencyMatch {
  double omega_star = 0.0;   // scan minimizer
  double omega_label = 0.0;  // k_B T
  double distance = 0.0;     // residual L2 distance at omega_star
};
FrequencyMatch match_frequency(const WavePacketState& s);

} // namespace twpk
