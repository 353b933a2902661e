#pragma once

#include <vector>

#include "lattice.hpp"
#include "operator_matrix.hpp"
#include "thermal.hpp"
#include "types.hpp"

namespace twpk {

// Discrete spectral representation of the one-particle retarded correlation
// G>_AB(w): one line per (k,k') pair at w = eps_k' - eps_k. Lines closer than
// the grouping tolerance are merged by weight addition; no broadening is ever
// applied.
struct SpectralLine {
  double omega = 0.0;
  cplx weight{0.0, 0.0};
};

struct SpectralLines {
  std::vector<SpectralLine> lines; // sorted by frequency
  double grouping_tol = 0.0;

  cplx total_weight() const {
    cplx t(0.0, 0.0);
    for (const auto& l : lines) t += l.weight;
    return t;
  }
};

// default grouping tolerance 1e-9 (max|w| + 1)
double default_grouping_tol(const Lattice& lat);

// Eigenstate route: weight (2 pi / Z_T) e^{-beta eps_k} A_{kk'} B_{k'k}.
SpectralLines greens_eigen(const Lattice& lat, double beta,
                           const OperatorMatrix& a, const OperatorMatrix& b);

// Wave-packet route: the Boltzmann factor is replaced by the split K-sum
// (sqrt(pi) lam_K lam_R / (lam_T L))^D sum_K e^{-beta_K eps_K} e^{-beta_R eps_{k-K}}.
// The R-integral reduction behind it is spot-checked on every call.
struct GreensWavepacket {
  SpectralLines lines;
  RegimeFlags regime_r, regime_k;
};
GreensWavepacket greens_wavepacket(const Lattice& lat,
                                   const TemperatureSplit& split,
                                   const OperatorMatrix& a,
                                   const OperatorMatrix& b);

struct LineError {
  double omega = 0.0;
  double rel_error = 0.0;
};
struct SpectrumComparison {
  double max_rel_weight_error = 0.0;
  std::size_t unmatched_a = 0;
  std::size_t unmatched_b = 0;
  std::vector<LineError> flagged; // lines with rel error above the tolerance
};
SpectrumComparison compare_spectra(const SpectralLines& a,
                                   const SpectralLines& b, double tol);

} // namespace twpk
