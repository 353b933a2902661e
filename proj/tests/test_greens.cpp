#include <doctest.h>

#include <cmath>
#include <random>

#include "greens.hpp"
#include "lattice.hpp"
#include "operator_matrix.hpp"
#include "thermal.hpp"

using namespace twpk;

namespace {
const LatticePtr fixture_a = make_lattice(1, 10.0, 64, 1.0);

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

OperatorMatrix random_hermitian(std::size_t n, std::mt19937_64& rng) {
  OperatorMatrix m(Basis::momentum, n);
  for (std::size_t i = 0; i < n; ++i) {
    m.at(i, i) = uniform01(rng) - 0.5;
    for (std::size_t j = i + 1; j < n; ++j) {
      const cplx v(uniform01(rng) - 0.5, uniform01(rng) - 0.5);
      m.at(i, j) = v;
      m.at(j, i) = std::conj(v);
    }
  }
  return m;
}

OperatorMatrix dagger(const OperatorMatrix& m) {
  OperatorMatrix out(m.basis, m.dim);
  for (std::size_t i = 0; i < m.dim; ++i)
    for (std::size_t j = 0; j < m.dim; ++j) out.at(i, j) = std::conj(m.at(j, i));
  return out;
}
} // namespace

TEST_CASE("projector spectrum is a single line at omega = 0") {
  OperatorMatrix proj(Basis::momentum, 64);
  proj.at(32, 32) = 1.0; // |k=0><k=0|
  const SpectralLines lines = greens_eigen(*fixture_a, 1.0, proj, proj);
  REQUIRE(lines.lines.size() == 1);
  CHECK(lines.lines[0].omega == 0.0);
  // weight 2 pi e^{-beta eps_0} / Z_T, frozen lattice value
  CHECK(std::abs(lines.lines[0].weight.real() - 1.57496099457224197) < 1e-12);
  CHECK(std::abs(lines.lines[0].weight.imag()) < 1e-15);
}

TEST_CASE("identity operators put all weight at omega = 0") {
  const OperatorMatrix eye = OperatorMatrix::identity(Basis::momentum, 64);
  const SpectralLines lines = greens_eigen(*fixture_a, 1.0, eye, eye);
  REQUIRE(lines.lines.size() == 1);
  CHECK(std::abs(lines.lines[0].weight.real() - 2.0 * kPi) < 1e-12);
}

TEST_CASE("sum rule: total weight equals 2 pi Tr(A B rho)") {
  std::mt19937_64 rng(41);
  const double z = thermal_params(*fixture_a, 1.0).z_lattice;
  for (int trial = 0; trial < 5; ++trial) {
    const OperatorMatrix a = random_hermitian(64, rng);
    const SpectralLines lines = greens_eigen(*fixture_a, 1.0, a, a);
    const OperatorMatrix ab = matmul(a, a);
    cplx tr(0.0, 0.0);
    for (std::size_t k = 0; k < 64; ++k)
      tr += std::exp(-fixture_a->dispersion(k)) * ab.at(k, k);
    const cplx expect = 2.0 * kPi / z * tr;
    CHECK(std::abs(lines.total_weight() - expect) / std::abs(expect) < 1e-10);
  }
}

TEST_CASE("wave-packet route reproduces the eigenstate route") {
  std::mt19937_64 rng(43);
  const TemperatureSplit half(1.0, 0.5);
  const OperatorMatrix a = random_hermitian(64, rng);
  const SpectralLines eig = greens_eigen(*fixture_a, 1.0, a, a);
  const GreensWavepacket wp = greens_wavepacket(*fixture_a, half, a, a);

  SUBCASE("identical frequency sets") {
    REQUIRE(eig.lines.size() == wp.lines.lines.size());
    for (std::size_t i = 0; i < eig.lines.size(); ++i)
      CHECK(eig.lines[i].omega == wp.lines.lines[i].omega);
  }
  SUBCASE("weights agree up to the split-identity floor") {
    const SpectrumComparison cmp = compare_spectra(eig, wp.lines, 1e-5);
    CHECK(cmp.unmatched_a + cmp.unmatched_b == 0);
    // frozen: the discrete-convolution image term bounds the weight gap
    CHECK(cmp.max_rel_weight_error < 7.6e-6);
    CHECK(cmp.max_rel_weight_error > 7.0e-6);
  }
  SUBCASE("x and 1-x give matching weights") {
    const GreensWavepacket w25 =
        greens_wavepacket(*fixture_a, TemperatureSplit(1.0, 0.25), a, a);
    const GreensWavepacket w75 =
        greens_wavepacket(*fixture_a, TemperatureSplit(1.0, 0.75), a, a);
    const SpectrumComparison cmp = compare_spectra(w25.lines, w75.lines, 2e-6);
    CHECK(cmp.max_rel_weight_error < 2e-6);
    CHECK(cmp.unmatched_a + cmp.unmatched_b == 0);
  }
  SUBCASE("total weight of the identity stays 2 pi") {
    const OperatorMatrix eye = OperatorMatrix::identity(Basis::momentum, 64);
    const GreensWavepacket wpi = greens_wavepacket(*fixture_a, half, eye, eye);
    CHECK(std::abs(wpi.lines.total_weight().real() / (2.0 * kPi) - 1.0) < 1e-6);
  }
}

TEST_CASE("A = B^dag spectra have nonnegative weights in both routes") {
  std::mt19937_64 rng(47);
  OperatorMatrix a(Basis::momentum, 64);
  for (std::size_t i = 0; i < 64u * 64u; ++i)
    a.a[i] = cplx(uniform01(rng) - 0.5, uniform01(rng) - 0.5);
  const SpectralLines eig = greens_eigen(*fixture_a, 1.0, a, dagger(a));
  const GreensWavepacket wp =
      greens_wavepacket(*fixture_a, TemperatureSplit(1.0, 0.5), a, dagger(a));
  double max_w = 0.0;
  for (const auto& l : eig.lines) max_w = std::max(max_w, std::abs(l.weight));
  for (const auto& l : eig.lines) {
    CHECK(l.weight.real() > -1e-12 * max_w);
    CHECK(std::abs(l.weight.imag()) < 1e-12 * max_w);
  }
  for (const auto& l : wp.lines.lines) CHECK(l.weight.real() > -1e-12 * max_w);
}

TEST_CASE("hermiticity relation between G_AB and G_{B^dag A^dag}") {
  std::mt19937_64 rng(53);
  OperatorMatrix a(Basis::momentum, 64), b(Basis::momentum, 64);
  for (std::size_t i = 0; i < 64u * 64u; ++i) {
    a.a[i] = cplx(uniform01(rng) - 0.5, uniform01(rng) - 0.5);
    b.a[i] = cplx(uniform01(rng) - 0.5, uniform01(rng) - 0.5);
  }
  const SpectralLines gab = greens_eigen(*fixture_a, 1.0, a, b);
  const SpectralLines gba = greens_eigen(*fixture_a, 1.0, dagger(b), dagger(a));
  REQUIRE(gab.lines.size() == gba.lines.size());
  for (std::size_t i = 0; i < gab.lines.size(); ++i) {
    CHECK(gab.lines[i].omega == gba.lines[i].omega);
    CHECK(std::abs(gab.lines[i].weight - std::conj(gba.lines[i].weight)) < 1e-12);
  }
}

TEST_CASE("spectrum comparison flags constructed discrepancies") {
  OperatorMatrix proj(Basis::momentum, 64);
  proj.at(32, 32) = 1.0;
  const SpectralLines lines = greens_eigen(*fixture_a, 1.0, proj, proj);
  SUBCASE("identical inputs carry zero error") {
    const SpectrumComparison cmp = compare_spectra(lines, lines, 1e-12);
    CHECK(cmp.max_rel_weight_error == 0.0);
    CHECK(cmp.unmatched_a + cmp.unmatched_b == 0);
    CHECK(cmp.flagged.empty());
  }
  SUBCASE("a single perturbed weight is flagged exactly once") {
    std::mt19937_64 rng(59);
    const OperatorMatrix a = random_hermitian(64, rng);
    const SpectralLines full = greens_eigen(*fixture_a, 1.0, a, a);
    SpectralLines perturbed = full;
    perturbed.lines[17].weight *= 1.01;
    const SpectrumComparison cmp = compare_spectra(full, perturbed, 1e-6);
    CHECK(cmp.flagged.size() == 1);
    CHECK(cmp.flagged[0].omega == full.lines[17].omega);
    CHECK(cmp.max_rel_weight_error == doctest::Approx(0.01 / 1.01).epsilon(1e-6));
  }
}

TEST_CASE("operators in the wrong basis are rejected") {
  OperatorMatrix bad(Basis::position, 64);
  CHECK_THROWS_AS((void)greens_eigen(*fixture_a, 1.0, bad, bad),
                  std::invalid_argument);
}
