#pragma once

#include <vector>

#include "envelope.hpp"
#include "lattice.hpp"
#include "operator_matrix.hpp"
#include "thermal.hpp"
#include "types.hpp"

namespace twpk {

enum class Statistics { boson, fermion };

// Symmetrized N-particle basis over the momentum grid. Configurations are
// stored as ascending mode lists (repeats allowed for bosons), ordered
// lexicographically; creation operators applied in ascending mode order fix
// the fermion sign convention.
class FockBasis {
public:
  FockBasis(LatticePtr lat, int particles, Statistics stats);

  const LatticePtr& lattice() const { return lat_; }
  int particles() const { return n_; }
  Statistics statistics() const { return stats_; }
  std::size_t dim() const { return configs_.size(); }
  const std::vector<int>& config(std::size_t i) const { return configs_[i]; }
  double config_norm(std::size_t i) const { return norms_[i]; } // sqrt(prod n_k!)
  double config_energy(std::size_t i) const; // sum of eps over modes

private:
  LatticePtr lat_;
  int n_;
  Statistics stats_;
  std::vector<std::vector<int>> configs_;
  std::vector<double> norms_;
};

// N single-particle momentum amplitude vectors applied to the vacuum in the
// given order.
struct ProductState {
  Statistics stats = Statistics::boson;
  std::vector<std::vector<cplx>> factors;
};

// permanent of a row-major n x n matrix; direct expansion below 4, Ryser
// with Gray code from 4 up (n capped at 6)
cplx permanent(const std::vector<cplx>& m, int n);
cplx determinant(const std::vector<cplx>& m, int n);

// <A|B> = det (fermions) or perm (bosons) of the single-particle overlap matrix
cplx product_overlap(const ProductState& a, const ProductState& b);

// <C_i|P> for the normalized configuration i
cplx fock_amplitude(const FockBasis& basis, std::size_t i, const ProductState& p);

// max |sum_K (1/M^D) sum_R |R,K><R,K| - 1| for a normalized envelope;
// exact on the lattice.
double number_operator_check(const Lattice& lat, const Envelope& env);

// max deviation from the identity of the N-particle closure sum over
// wave-packet product states, evaluated on the Fock basis.
double closure_n(const Lattice& lat, const Envelope& env, int particles,
                 Statistics stats);

enum class BoltzmannRep { eigen, rt, rkt };

struct BoltzmannN {
  OperatorMatrix matrix; // on the FockBasis ordering, Basis::fock
  RegimeFlags regime;
};
BoltzmannN boltzmann_n(const Lattice& lat, double beta, int particles,
                       Statistics stats, BoltzmannRep rep,
                       const TemperatureSplit* split = nullptr);

// <R1,K1|H0|R0,K0> as the p-sum with the dispersion shifted by (K1+K0)/2;
// requires K1-K0 even per axis so the envelope arguments stay on the grid.
cplx h0_wavepacket_element(const Envelope& env, const Vec3& r1, const Idx3& k1,
                           const Vec3& r0, const Idx3& k0);

// q-channel amplitude u_q = e^{i q.R1} <R1, K1 - q | R0, K0>
cplx u_q_amplitude(const Envelope& env, const Idx3& q_numbers, const Vec3& r1,
                   const Idx3& k1, const Vec3& r0, const Idx3& k0);

struct WpLabel {
  Vec3 center = kZeroVec;
  Idx3 k_numbers = kZeroIdx;
};

// Scattering tensor between wave-packet labels:
//   V(1',2';2,1) = sum_q V_q u_q(1';1) u_{-q}(2';2).
class VTensor {
public:
  VTensor(std::size_t labels) : n_(labels), v_(labels * labels * labels * labels) {}
  std::size_t labels() const { return n_; }
  cplx& at(std::size_t i1p, std::size_t i2p, std::size_t i2, std::size_t i1) {
    return v_[((i1p * n_ + i2p) * n_ + i2) * n_ + i1];
  }
  const cplx& at(std::size_t i1p, std::size_t i2p, std::size_t i2,
                 std::size_t i1) const {
    return v_[((i1p * n_ + i2p) * n_ + i2) * n_ + i1];
  }

private:
  std::size_t n_;
  std::vector<cplx> v_;
};

// v_q given per momentum site
VTensor v_wavepacket_tensor(const Envelope& env, const std::vector<double>& v_q,
                            const std::vector<WpLabel>& labels);

// One-particle channel operator rebuilt from the full wave-packet label set:
//   U_q[a,d] = sum_{1',1} M^{-2D} <a|1'> u_q(1';1) <1|d>,
// which must equal delta_{a, d+q} on the lattice.
OperatorMatrix u_channel_matrix(const Envelope& env, const Idx3& q_numbers);

// Reassembles the two-body coefficient tensor from the channel operators and
// compares against (1/2) V_q delta delta; returns the max abs deviation.
double v_reassembly_error(const Lattice& lat, const Envelope& env,
                          const std::vector<double>& v_q);

} // namespace twpk
