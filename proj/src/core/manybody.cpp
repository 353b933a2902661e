#include "manybody.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "wavepacket.hpp"

namespace twpk {

namespace {

constexpr int kMaxParticles = 6;
constexpr std::size_t kMaxTerms = 200'000'000; // closure tuple guard

void enumerate_configs(int n_modes, int particles, bool allow_repeats, int first,
                       std::vector<int>& cur,
                       std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == particles) {
    out.push_back(cur);
    return;
  }
  for (int m = first; m < n_modes; ++m) {
    cur.push_back(m);
    enumerate_configs(n_modes, particles, allow_repeats, allow_repeats ? m : m + 1,
                      cur, out);
    cur.pop_back();
  }
}

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

void check_envelope_normalized(const Envelope& env, const char* what) {
  if (std::abs(env.norm2() - 1.0) > 1e-10)
    throw std::invalid_argument(std::string(what) +
                                ": envelope must be normalized");
}

Idx3 wrap_numbers(const Lattice& lat, const Idx3& n) {
  Idx3 out = kZeroIdx;
  for (int a = 0; a < lat.dim(); ++a)
    out[a] = lat.momentum_number(lat.site_of_number(n[a]));
  return out;
}

// momentum amplitudes of |R,K> for the given envelope
std::vector<cplx> label_amplitudes(const Envelope& env, const Vec3& center,
                                   const Idx3& k_numbers) {
  return make_state({center, k_numbers, env}).kamp;
}

} // namespace

FockBasis::FockBasis(LatticePtr lat, int particles, Statistics stats)
    : lat_(std::move(lat)), n_(particles), stats_(stats) {
  if (particles < 1 || particles > kMaxParticles)
    throw std::invalid_argument("fock basis: particle number out of range");
  const int modes = static_cast<int>(lat_->site_count());
  if (stats == Statistics::fermion && particles > modes)
    throw std::invalid_argument("fock basis: more fermions than modes");
  std::vector<int> cur;
  enumerate_configs(modes, particles, stats == Statistics::boson, 0, cur,
                    configs_);
  norms_.reserve(configs_.size());
  for (const auto& c : configs_) {
    double prod = 1.0;
    int run = 1;
    for (std::size_t i = 1; i <= c.size(); ++i) {
      if (i < c.size() && c[i] == c[i - 1]) {
        ++run;
      } else {
        prod *= factorial(run);
        run = 1;
      }
    }
    norms_.push_back(std::sqrt(prod));
  }
}

double FockBasis::config_energy(std::size_t i) const {
  double e = 0.0;
  for (int m : configs_[i]) e += lat_->dispersion(static_cast<std::size_t>(m));
  return e;
}

cplx permanent(const std::vector<cplx>& m, int n) {
  if (n == 0) return 1.0;
  if (n > kMaxParticles) throw std::invalid_argument("permanent: n > 6");
  if (n < 4) {
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    cplx sum(0.0, 0.0);
    do {
      cplx term(1.0, 0.0);
      for (int i = 0; i < n; ++i) term *= m[i * n + perm[i]];
      sum += term;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return sum;
  }
  // Ryser with Gray code over column subsets
  std::vector<cplx> rowsum(n, cplx(0.0, 0.0));
  cplx total(0.0, 0.0);
  unsigned gray = 0;
  const unsigned count = (1u << n) - 1;
  for (unsigned idx = 1; idx <= count; ++idx) {
    const unsigned next = idx ^ (idx >> 1);
    const unsigned changed = next ^ gray;
    int col = 0;
    while (!((changed >> col) & 1u)) ++col;
    const double sign_col = (next & changed) ? 1.0 : -1.0;
    for (int i = 0; i < n; ++i) rowsum[i] += sign_col * m[i * n + col];
    gray = next;
    cplx prod(1.0, 0.0);
    for (int i = 0; i < n; ++i) prod *= rowsum[i];
    const int popcount = __builtin_popcount(next);
    total += ((n - popcount) % 2 == 0 ? 1.0 : -1.0) * prod;
  }
  return total;
}

cplx determinant(const std::vector<cplx>& m, int n) {
  // Gaussian elimination with partial pivoting
  std::vector<cplx> a = m;
  cplx det(1.0, 0.0);
  for (int c = 0; c < n; ++c) {
    int pivot = c;
    double best = std::abs(a[c * n + c]);
    for (int r = c + 1; r < n; ++r) {
      const double v = std::abs(a[r * n + c]);
      if (v > best) { best = v; pivot = r; }
    }
    if (best == 0.0) return cplx(0.0, 0.0);
    if (pivot != c) {
      for (int j = 0; j < n; ++j) std::swap(a[c * n + j], a[pivot * n + j]);
      det = -det;
    }
    det *= a[c * n + c];
    for (int r = c + 1; r < n; ++r) {
      const cplx f = a[r * n + c] / a[c * n + c];
      for (int j = c; j < n; ++j) a[r * n + j] -= f * a[c * n + j];
    }
  }
  return det;
}

cplx product_overlap(const ProductState& a, const ProductState& b) {
  if (a.stats != b.stats)
    throw std::invalid_argument("product_overlap: statistics differ");
  const int n = static_cast<int>(a.factors.size());
  if (n != static_cast<int>(b.factors.size()))
    throw std::invalid_argument("product_overlap: particle numbers differ");
  if (n > kMaxParticles)
    throw std::invalid_argument("product_overlap: N capped at 6");
  for (const ProductState* state : {&a, &b})
    for (const auto& f : state->factors) {
      double norm = 0.0;
      for (const auto& v : f) norm += std::norm(v);
      if (norm == 0.0)
        throw std::invalid_argument("product_overlap: zero factor");
    }
  std::vector<cplx> s(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      cplx dot(0.0, 0.0);
      const auto& ai = a.factors[i];
      const auto& bj = b.factors[j];
      for (std::size_t k = 0; k < ai.size(); ++k) dot += std::conj(ai[k]) * bj[k];
      s[i * n + j] = dot;
    }
  return a.stats == Statistics::boson ? permanent(s, n) : determinant(s, n);
}

cplx fock_amplitude(const FockBasis& basis, std::size_t i, const ProductState& p) {
  const auto& modes = basis.config(i);
  const int n = static_cast<int>(modes.size());
  if (n != static_cast<int>(p.factors.size()))
    throw std::invalid_argument("fock_amplitude: particle numbers differ");
  std::vector<cplx> a(static_cast<std::size_t>(n) * n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c)
      a[r * n + c] = p.factors[c][static_cast<std::size_t>(modes[r])];
  const cplx val = basis.statistics() == Statistics::boson ? permanent(a, n)
                                                           : determinant(a, n);
  return val / basis.config_norm(i);
}

double number_operator_check(const Lattice& lat, const Envelope& env) {
  check_envelope_normalized(env, "number_operator_check");
  const std::size_t n = lat.site_count();
  OperatorMatrix s(Basis::momentum, n);
  std::vector<cplx> v(n);
  for (std::size_t kappa = 0; kappa < n; ++kappa) {
    const Idx3 knum = lat.momentum_numbers(kappa);
    for (std::size_t rs = 0; rs < n; ++rs) {
      const Vec3 r = lat.position(rs);
      for (std::size_t ks = 0; ks < n; ++ks) {
        const Vec3 k = lat.momentum(ks);
        double phase = 0.0;
        for (int a = 0; a < lat.dim(); ++a) phase -= k[a] * r[a];
        v[ks] = std::polar(1.0, phase) * env.amp(lat.shifted_ksite(ks, knum));
      }
      const double w = lat.cell_fraction();
      for (std::size_t i = 0; i < n; ++i) {
        const cplx vi = v[i] * w;
        for (std::size_t j = 0; j < n; ++j) s.at(i, j) += vi * std::conj(v[j]);
      }
    }
  }
  return max_abs_diff(s, OperatorMatrix::identity(Basis::momentum, n));
}

double closure_n(const Lattice& lat, const Envelope& env, int particles,
                 Statistics stats) {
  check_envelope_normalized(env, "closure_n");
  if (particles < 1 || particles > 3)
    throw std::invalid_argument("closure_n: N must be 1..3");
  const std::size_t n = lat.site_count();
  if (n > 16) throw std::invalid_argument("closure_n: lattice too large (M^D > 16)");

  // all (R,K) labels with their state vectors
  const std::size_t n_labels = n * n;
  std::vector<std::vector<cplx>> states(n_labels);
  for (std::size_t rs = 0; rs < n; ++rs)
    for (std::size_t kappa = 0; kappa < n; ++kappa)
      states[rs * n + kappa] =
          label_amplitudes(env, lat.position(rs), lat.momentum_numbers(kappa));

  FockBasis basis(std::make_shared<Lattice>(lat), particles, stats);
  const std::size_t dim = basis.dim();

  std::size_t tuples = 1;
  for (int i = 0; i < particles; ++i) tuples *= n_labels;
  if (tuples * dim > kMaxTerms)
    throw std::invalid_argument("closure_n: configuration too large");

  OperatorMatrix g(Basis::fock, dim);
  const double weight =
      std::pow(lat.cell_fraction(), particles) / factorial(particles);
  std::vector<std::size_t> tup(particles, 0);
  ProductState p;
  p.stats = stats;
  p.factors.resize(particles);
  std::vector<cplx> amp(dim);
  for (std::size_t t = 0; t < tuples; ++t) {
    std::size_t rem = t;
    for (int i = 0; i < particles; ++i) {
      tup[i] = rem % n_labels;
      rem /= n_labels;
    }
    for (int i = 0; i < particles; ++i) p.factors[i] = states[tup[i]];
    for (std::size_t c = 0; c < dim; ++c) amp[c] = fock_amplitude(basis, c, p);
    for (std::size_t i = 0; i < dim; ++i) {
      const cplx wi = amp[i] * weight;
      for (std::size_t j = 0; j < dim; ++j)
        g.at(i, j) += wi * std::conj(amp[j]);
    }
  }
  return max_abs_diff(g, OperatorMatrix::identity(Basis::fock, dim));
}

BoltzmannN boltzmann_n(const Lattice& lat, double beta, int particles,
                       Statistics stats, BoltzmannRep rep,
                       const TemperatureSplit* split) {
  if (!(beta > 0.0))
    throw std::invalid_argument("boltzmann_n: beta must be positive");
  const std::size_t n = lat.site_count();
  FockBasis basis(std::make_shared<Lattice>(lat), particles, stats);
  const std::size_t dim = basis.dim();

  BoltzmannN out;
  out.regime = regime_check(lat, beta);
  out.matrix = OperatorMatrix(Basis::fock, dim);

  if (rep == BoltzmannRep::eigen) {
    for (std::size_t c = 0; c < dim; ++c)
      out.matrix.at(c, c) = std::exp(-beta * basis.config_energy(c));
    return out;
  }

  if (rep == BoltzmannRep::rkt && split == nullptr)
    throw std::invalid_argument("boltzmann_n: rkt representation needs a split");

  // enumerate per-particle labels with their weights and state vectors
  std::vector<std::vector<cplx>> states;
  std::vector<double> label_weight;
  double measure = 1.0;
  if (rep == BoltzmannRep::rt) {
    const Envelope phi_t = Envelope::thermal(std::make_shared<Lattice>(lat), beta);
    states.reserve(n);
    for (std::size_t rs = 0; rs < n; ++rs) {
      states.push_back(label_amplitudes(phi_t, lat.position(rs), kZeroIdx));
      label_weight.push_back(1.0);
    }
    measure = lat.position_weight();
  } else {
    out.regime.uv_ok = regime_check(lat, split->beta_r()).uv_ok &&
                       regime_check(lat, split->beta_k()).uv_ok;
    out.regime.ir_ok = regime_check(lat, split->beta_r()).ir_ok &&
                       regime_check(lat, split->beta_k()).ir_ok;
    const Envelope phi_tr =
        Envelope::thermal_boxed(std::make_shared<Lattice>(lat), split->beta_r());
    const double pref = rkt_prefactor(*split, lat.mass(), lat.dim());
    states.reserve(n * n);
    for (std::size_t rs = 0; rs < n; ++rs)
      for (std::size_t kappa = 0; kappa < n; ++kappa) {
        states.push_back(label_amplitudes(phi_tr, lat.position(rs),
                                          lat.momentum_numbers(kappa)));
        label_weight.push_back(pref *
                               std::exp(-split->beta_k() * lat.dispersion(kappa)));
      }
    measure = lat.position_weight();
  }

  const std::size_t n_labels = states.size();
  std::size_t tuples = 1;
  for (int i = 0; i < particles; ++i) tuples *= n_labels;
  if (tuples * dim > kMaxTerms)
    throw std::invalid_argument("boltzmann_n: configuration too large");

  const double base_weight =
      std::pow(measure, particles) / factorial(particles);
  std::vector<std::size_t> tup(particles, 0);
  ProductState p;
  p.stats = stats;
  p.factors.resize(particles);
  std::vector<cplx> amp(dim);
  for (std::size_t t = 0; t < tuples; ++t) {
    std::size_t rem = t;
    double w = base_weight;
    for (int i = 0; i < particles; ++i) {
      tup[i] = rem % n_labels;
      rem /= n_labels;
      w *= label_weight[tup[i]];
    }
    for (int i = 0; i < particles; ++i) p.factors[i] = states[tup[i]];
    for (std::size_t c = 0; c < dim; ++c) amp[c] = fock_amplitude(basis, c, p);
    for (std::size_t i = 0; i < dim; ++i) {
      const cplx wi = amp[i] * w;
      for (std::size_t j = 0; j < dim; ++j)
        out.matrix.at(i, j) += wi * std::conj(amp[j]);
    }
  }
  return out;
}

cplx h0_wavepacket_element(const Envelope& env, const Vec3& r1, const Idx3& k1,
                           const Vec3& r0, const Idx3& k0) {
  const Lattice& lat = *env.lattice();
  // K1 - K0 even keeps the half shifts on the grid, and then the mean
  // (K1 + K0)/2 is on the grid as well, so the dispersion is looked up at
  // the wrapped site of p + (K1+K0)/2. With grid-aligned centers the p-sum
  // then coincides with the plain k-sum term by term.
  Idx3 half = kZeroIdx, neg_half = kZeroIdx, neg_mean = kZeroIdx;
  Vec3 kbar = kZeroVec, dr = kZeroVec;
  for (int a = 0; a < lat.dim(); ++a) {
    if ((k1[a] - k0[a]) % 2 != 0)
      throw std::invalid_argument(
          "h0_wavepacket_element: K1 - K0 must be an even grid multiple");
    half[a] = (k1[a] - k0[a]) / 2;
    neg_half[a] = -half[a];
    neg_mean[a] = -(k1[a] + k0[a]) / 2;
    kbar[a] = kPi * (k1[a] + k0[a]) / lat.box_length();
    dr[a] = r1[a] - r0[a];
  }
  cplx sum(0.0, 0.0);
  for (std::size_t ps = 0; ps < lat.site_count(); ++ps) {
    const Vec3 p = lat.momentum(ps);
    double phase = 0.0;
    for (int a = 0; a < lat.dim(); ++a) phase += p[a] * dr[a];
    const cplx lo = env.amp(lat.shifted_ksite(ps, neg_half));  // p + dK/2
    const cplx hi = env.amp(lat.shifted_ksite(ps, half));      // p - dK/2
    const double eps = lat.dispersion(lat.shifted_ksite(ps, neg_mean));
    sum += eps * std::polar(1.0, phase) * std::conj(hi) * lo;
  }
  double outer = 0.0;
  for (int a = 0; a < lat.dim(); ++a) outer += kbar[a] * dr[a];
  return std::polar(1.0, outer) * sum;
}

cplx u_q_amplitude(const Envelope& env, const Idx3& q_numbers, const Vec3& r1,
                   const Idx3& k1, const Vec3& r0, const Idx3& k0) {
  const Lattice& lat = *env.lattice();
  Idx3 shifted = kZeroIdx;
  double phase = 0.0;
  for (int a = 0; a < lat.dim(); ++a) {
    shifted[a] = k1[a] - q_numbers[a];
    phase += 2.0 * kPi * q_numbers[a] / lat.box_length() * r1[a];
  }
  shifted = wrap_numbers(lat, shifted);
  const WavePacketState bra = make_state({r1, shifted, env});
  const WavePacketState ket = make_state({r0, k0, env});
  return std::polar(1.0, phase) * overlap(bra, ket);
}

VTensor v_wavepacket_tensor(const Envelope& env, const std::vector<double>& v_q,
                            const std::vector<WpLabel>& labels) {
  const Lattice& lat = *env.lattice();
  if (v_q.size() != lat.site_count())
    throw std::invalid_argument("v_wavepacket_tensor: v_q size mismatch");
  const std::size_t nl = labels.size();
  if (nl == 0 || nl > 16)
    throw std::invalid_argument("v_wavepacket_tensor: 1..16 labels supported");

  // u_q(i', i) for every q and label pair
  const std::size_t nq = lat.site_count();
  std::vector<cplx> u(nq * nl * nl);
  for (std::size_t q = 0; q < nq; ++q) {
    const Idx3 qn = lat.momentum_numbers(q);
    for (std::size_t ip = 0; ip < nl; ++ip)
      for (std::size_t i = 0; i < nl; ++i)
        u[(q * nl + ip) * nl + i] =
            u_q_amplitude(env, qn, labels[ip].center, labels[ip].k_numbers,
                          labels[i].center, labels[i].k_numbers);
  }
  auto u_at = [&](std::size_t q, std::size_t ip, std::size_t i) {
    return u[(q * nl + ip) * nl + i];
  };

  VTensor t(nl);
  for (std::size_t q = 0; q < nq; ++q) {
    // site of -q
    Idx3 mq = kZeroIdx;
    const Idx3 qn = lat.momentum_numbers(q);
    for (int a = 0; a < lat.dim(); ++a) mq[a] = -qn[a];
    mq = wrap_numbers(lat, mq);
    Idx3 mq_sites = kZeroIdx;
    for (int a = 0; a < lat.dim(); ++a) mq_sites[a] = lat.site_of_number(mq[a]);
    const std::size_t mqs = lat.flatten(mq_sites);

    for (std::size_t i1p = 0; i1p < nl; ++i1p)
      for (std::size_t i2p = 0; i2p < nl; ++i2p)
        for (std::size_t i2 = 0; i2 < nl; ++i2)
          for (std::size_t i1 = 0; i1 < nl; ++i1)
            t.at(i1p, i2p, i2, i1) +=
                v_q[q] * u_at(q, i1p, i1) * u_at(mqs, i2p, i2);
  }
  return t;
}

OperatorMatrix u_channel_matrix(const Envelope& env, const Idx3& q_numbers) {
  check_envelope_normalized(env, "u_channel_matrix");
  const Lattice& lat = *env.lattice();
  const std::size_t n = lat.site_count();

  // state vectors for all (R,K) labels and their q-shifted partners
  std::vector<std::vector<cplx>> states(n * n);
  std::vector<std::vector<cplx>> shifted_states(n * n);
  std::vector<double> qr_phase(n * n);
  for (std::size_t rs = 0; rs < n; ++rs) {
    const Vec3 r = lat.position(rs);
    double qph = 0.0;
    for (int a = 0; a < lat.dim(); ++a)
      qph += 2.0 * kPi * q_numbers[a] / lat.box_length() * r[a];
    for (std::size_t kappa = 0; kappa < n; ++kappa) {
      const Idx3 kn = lat.momentum_numbers(kappa);
      states[rs * n + kappa] = label_amplitudes(env, r, kn);
      Idx3 shifted = kZeroIdx;
      for (int a = 0; a < lat.dim(); ++a) shifted[a] = kn[a] - q_numbers[a];
      shifted_states[rs * n + kappa] =
          label_amplitudes(env, r, wrap_numbers(lat, shifted));
      qr_phase[rs * n + kappa] = qph;
    }
  }

  OperatorMatrix um(Basis::momentum, n);
  const double w2 = lat.cell_fraction() * lat.cell_fraction();
  for (std::size_t lp = 0; lp < n * n; ++lp) {
    for (std::size_t l = 0; l < n * n; ++l) {
      // u_q(l'; l) = e^{i q.R'} <shifted(l') | l>
      cplx uq(0.0, 0.0);
      const auto& sh = shifted_states[lp];
      const auto& st = states[l];
      for (std::size_t k = 0; k < n; ++k) uq += std::conj(sh[k]) * st[k];
      uq *= std::polar(1.0, qr_phase[lp]);
      const cplx wuq = w2 * uq;
      for (std::size_t a = 0; a < n; ++a) {
        const cplx left = states[lp][a] * wuq;
        for (std::size_t d = 0; d < n; ++d)
          um.at(a, d) += left * std::conj(states[l][d]);
      }
    }
  }
  return um;
}

double v_reassembly_error(const Lattice& lat, const Envelope& env,
                          const std::vector<double>& v_q) {
  const std::size_t n = lat.site_count();
  if (v_q.size() != n)
    throw std::invalid_argument("v_reassembly_error: v_q size mismatch");
  if (n > 8)
    throw std::invalid_argument("v_reassembly_error: lattice too large (M^D > 8)");

  // channel operators and the wrapped k -> k (+/-) q site maps
  std::vector<OperatorMatrix> uq(n);
  std::vector<std::vector<std::size_t>> plus_q(n), minus_q(n);
  for (std::size_t q = 0; q < n; ++q) {
    const Idx3 qn = lat.momentum_numbers(q);
    uq[q] = u_channel_matrix(env, qn);
    Idx3 neg = kZeroIdx;
    for (int a = 0; a < lat.dim(); ++a) neg[a] = -qn[a];
    plus_q[q].resize(n);
    minus_q[q].resize(n);
    for (std::size_t s = 0; s < n; ++s) {
      plus_q[q][s] = lat.shifted_ksite(s, neg); // site of s + q
      minus_q[q][s] = lat.shifted_ksite(s, qn); // site of s - q
    }
  }
  std::vector<std::size_t> neg_q_site(n);
  for (std::size_t q = 0; q < n; ++q) {
    Idx3 neg = kZeroIdx;
    const Idx3 qn = lat.momentum_numbers(q);
    Idx3 sites = kZeroIdx;
    for (int a = 0; a < lat.dim(); ++a) {
      neg[a] = -qn[a];
      sites[a] = lat.site_of_number(neg[a]);
    }
    neg_q_site[q] = lat.flatten(sites);
  }

  // coefficient of a^dag_a a^dag_b a_c a_d, rebuilt vs direct
  double worst = 0.0;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c)
        for (std::size_t d = 0; d < n; ++d) {
          cplx rebuilt(0.0, 0.0);
          double direct = 0.0;
          for (std::size_t q = 0; q < n; ++q) {
            rebuilt += 0.5 * v_q[q] * uq[q].at(a, d) * uq[neg_q_site[q]].at(b, c);
            if (plus_q[q][d] == a && minus_q[q][c] == b) direct += 0.5 * v_q[q];
          }
          worst = std::max(worst, std::abs(rebuilt - direct));
        }
  return worst;
}

} // namespace twpk
