#pragma once

#include <vector>

#include "lattice.hpp"
#include "types.hpp"

namespace twpk {

enum class EnvelopeKind { generic, delta_peaked, thermal };

// The single-particle envelope |phi> that fixes a wave-packet's momentum
// distribution. Stored in the momentum basis as ground truth; position
// profiles are always derived through the lattice transform.
//
// Wave-packet semantics require <k|phi> = <-k|phi>. On the grid the edge
// mode n = -M/2 has no partner, so it is excluded from the symmetry check.
class Envelope {
public:
  // <k|phi> = delta_{k,0}; flat in position space with value L^{-D/2}.
  static Envelope delta_peaked(LatticePtr lat);

  // <k|phi_T> = e^{-beta eps_k / 2} L^{-D/2}, the position eigenstate at the
  // origin smoothed by half a Boltzmann factor. Norm is Z_T / L^D.
  static Envelope thermal(LatticePtr lat, double beta);

  // Thermal envelope carrying the extra L^{-D/2} of the |R,K,T> convention,
  // so that states built from it have norm <phi_T|phi_T> / L^D.
  static Envelope thermal_boxed(LatticePtr lat, double beta);

  static Envelope from_amplitudes(LatticePtr lat, std::vector<cplx> amps);

  const LatticePtr& lattice() const { return lat_; }
  EnvelopeKind kind() const { return kind_; }
  bool is_thermal() const { return kind_ == EnvelopeKind::thermal; }
  double beta() const { return beta_; } // valid for thermal envelopes

  const std::vector<cplx>& amps() const { return amp_; }
  cplx amp(std::size_t ksite) const { return amp_[ksite]; }

  double norm2() const; // <phi|phi>
  Envelope normalized() const;
  Envelope scaled(double factor) const;

  AmplitudeField position_profile() const;

  // max_k |<k|phi> - <-k|phi>| over paired modes
  double symmetry_defect() const;

  // Spatial standard deviation per axis of the packet the envelope creates:
  // lambda_T / (2 sqrt(2)) for thermal envelopes, otherwise measured from the
  // min-image second moment of the position profile about the origin.
  double nominal_sigma() const { return sigma_; }

private:
  Envelope(LatticePtr lat, std::vector<cplx> amps, EnvelopeKind kind,
           double beta);

  LatticePtr lat_;
  std::vector<cplx> amp_;
  EnvelopeKind kind_;
  double beta_ = 0.0;
  double sigma_ = 0.0;
};

} // namespace twpk
