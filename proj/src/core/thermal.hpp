#pragma once

#include "envelope.hpp"
#include "lattice.hpp"
#include "operator_matrix.hpp"
#include "types.hpp"

namespace twpk {

// Domain on which lattice sums reproduce continuum formulas below 1e-14:
// the momentum distribution must die before the zone edge (UV) and the
// real-space kernel before the box images (IR). Checked for every inverse
// temperature in play; violations flag results instead of failing.
struct RegimeFlags {
  bool uv_ok = true;
  bool ir_ok = true;
  bool ok() const { return uv_ok && ir_ok; }
};

RegimeFlags regime_check(const Lattice& lat, double beta);

// lambda_T = sqrt(2 beta / m), from k_B T = 4 hbar^2 / (2 m lambda_T^2).
double thermal_length(double beta, double mass);

struct ThermalParams {
  double temperature = 0.0;
  double beta = 0.0;
  double lambda = 0.0;      // thermal length
  double z_lattice = 0.0;   // sum_k e^{-beta eps_k}
  double z_continuum = 0.0; // (L / (lambda sqrt(pi)))^D
  RegimeFlags regime;
};
ThermalParams thermal_params(const Lattice& lat, double temperature);

// Split of the thermal energy k_B T = k_B T_R + k_B T_K between packet
// spread (T_R) and kinetic excitation (T_K); equivalently
// 1/beta = 1/beta_R + 1/beta_K. The fraction x = T_K / T is kept inside
// [0.05, 0.95] so both effective temperatures stay meaningful.
class TemperatureSplit {
public:
  TemperatureSplit(double temperature, double fraction);
  double temperature() const { return t_; }
  double fraction() const { return x_; }
  double t_k() const { return x_ * t_; }
  double t_r() const { return (1.0 - x_) * t_; }
  double beta_k() const { return 1.0 / t_k(); }
  double beta_r() const { return 1.0 / t_r(); }

private:
  double t_;
  double x_;
};

// (sqrt(pi) lambda_R lambda_K / lambda_T)^D
double rkt_prefactor(const TemperatureSplit& split, double mass, int dim);

// <r1|e^{-beta H0}|r0> as the exact lattice sum sum_k <r1|k> e^{-beta eps} <k|r0>.
cplx boltzmann_kernel_exact(const Lattice& lat, double beta, const Vec3& r1,
                            const Vec3& r0);
// Closed form (Z_T/L^D) e^{-d^2/lambda^2} at the minimum-image distance.
double boltzmann_kernel_gaussian(const Lattice& lat, double beta, const Vec3& r1,
                                 const Vec3& r0);

// diag(e^{-beta eps_k}) in the momentum basis, or its conjugation by the
// transform in the position basis. Hermitian, positive definite, trace Z_T.
OperatorMatrix boltzmann_matrix(const Lattice& lat, double beta, Basis basis);

// sum_R (L/M)^D |R,T><R,T| assembled by direct summation over the position
// grid; equals diag(e^{-beta eps_k}) identically on the lattice.
OperatorMatrix reconstruct_from_rt(const Lattice& lat, double beta);

struct RktReconstruction {
  OperatorMatrix matrix; // momentum basis
  RegimeFlags regime_r, regime_k;
  double max_offdiag = 0.0;
  // vs e^{-beta eps_k}, over paired modes. The unpaired edge mode n = -M/2
  // picks up a wrap-around doubling of the K-convolution (at spectral weight
  // e^{-beta eps_max}); it is excluded here, as in the envelope symmetry
  // check, and reported separately.
  double max_diag_rel_error = 0.0;
  double edge_diag_rel_error = 0.0;
};
// prefactor^D sum_K e^{-beta_K eps_K} sum_R (L/M)^D |R,K,T_R><R,K,T_R|,
// assembled by direct summation over the (K, R) grids.
RktReconstruction reconstruct_from_rkt(const Lattice& lat,
                                       const TemperatureSplit& split);

struct SplitCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  double rel_error = 0.0;
  RegimeFlags regime_r, regime_k;
};
// e^{-beta eps_k} vs (sqrt(pi) lambda_K lambda_R / (lambda_T L))^D
//                    sum_K e^{-beta_K eps_K} e^{-beta_R eps_{k-K}}.
SplitCheck verify_split(const Lattice& lat, const TemperatureSplit& split,
                        const Idx3& k_numbers);

struct KernelSplitCheck {
  double direct = 0.0;       // <r1|e^{-beta H0}|r0>
  double product_form = 0.0; // prefactor * <r1|e^{-beta_R H0}|r0><r1|e^{-beta_K H0}|r0>
  double rel_error = 0.0;
  RegimeFlags regime_r, regime_k;
};
KernelSplitCheck kernel_split(const Lattice& lat, const TemperatureSplit& split,
                              const Vec3& r1, const Vec3& r0);

} // namespace twpk
