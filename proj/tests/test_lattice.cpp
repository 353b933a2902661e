#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "lattice.hpp"

using namespace twpk;

namespace {

std::vector<cplx> random_field(std::size_t n, std::mt19937_64& rng) {
  std::vector<cplx> v(n);
  for (auto& x : v)
    x = cplx((rng() >> 11) * 0x1.0p-53 - 0.5, (rng() >> 11) * 0x1.0p-53 - 0.5);
  return v;
}

// direct O(M^2) synthesis oracle, independent of the FFT path
std::vector<cplx> direct_to_position(const Lattice& lat,
                                     const std::vector<cplx>& kamp) {
  std::vector<cplx> out(lat.site_count());
  const double scale = std::pow(lat.box_length(), -0.5 * lat.dim());
  for (std::size_t j = 0; j < out.size(); ++j) {
    const Vec3 r = lat.position(j);
    cplx acc(0.0, 0.0);
    for (std::size_t ks = 0; ks < kamp.size(); ++ks) {
      const Vec3 k = lat.momentum(ks);
      double phase = 0.0;
      for (int a = 0; a < lat.dim(); ++a) phase += k[a] * r[a];
      acc += kamp[ks] * std::polar(1.0, phase);
    }
    out[j] = acc * scale;
  }
  return out;
}

} // namespace

TEST_CASE("momentum grid quantized in 2 pi / L") {
  const LatticePtr lat = make_lattice(1, 10.0, 64, 1.0);
  CHECK(lat->site_count() == 64);
  CHECK(lat->momentum_number(0) == -32);
  CHECK(lat->momentum_number(63) == 31);
  CHECK(lat->momentum_coord(32) == doctest::Approx(0.0));
  CHECK(lat->momentum_coord(33) == doctest::Approx(2.0 * kPi / 10.0));
  CHECK(lat->dispersion(32) == 0.0);
  // dispersion minimum at k = 0
  for (std::size_t s = 0; s < 64; ++s) CHECK(lat->dispersion(s) >= 0.0);
}

TEST_CASE("constructor rejects bad parameters") {
  CHECK_THROWS_AS(Lattice(1, 10.0, 63, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(Lattice(1, 10.0, 2, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(Lattice(1, -10.0, 64, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(Lattice(1, 10.0, 64, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(Lattice(0, 10.0, 64, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(Lattice(4, 10.0, 64, 1.0), std::invalid_argument);
}

TEST_CASE("2d grids have M^D points per basis") {
  const LatticePtr lat = make_lattice(2, 8.0, 8, 1.0);
  CHECK(lat->site_count() == 64);
  const Idx3 ix{3, 5, 0};
  CHECK(lat->unflatten(lat->flatten(ix))[0] == 3);
  CHECK(lat->unflatten(lat->flatten(ix))[1] == 5);
}

TEST_CASE("single plane wave transforms to a flat profile") {
  const LatticePtr lat = make_lattice(1, 10.0, 64, 1.0);
  std::vector<cplx> kamp(64, cplx(0.0, 0.0));
  kamp[32] = 1.0; // k = 0
  const AmplitudeField pos =
      lat->to_position(AmplitudeField{Basis::momentum, kamp});
  for (const auto& v : pos.amp) {
    CHECK(v.real() == doctest::Approx(1.0 / std::sqrt(10.0)).epsilon(1e-13));
    CHECK(std::abs(v.imag()) < 1e-14);
  }
}

TEST_CASE("round trip is the identity to machine precision") {
  std::mt19937_64 rng(7);
  for (int dim : {1, 2}) {
    const LatticePtr lat = make_lattice(dim, 10.0, dim == 1 ? 64 : 16, 1.0);
    const std::vector<cplx> kamp = random_field(lat->site_count(), rng);
    const AmplitudeField back =
        lat->to_momentum(lat->to_position(AmplitudeField{Basis::momentum, kamp}));
    double worst = 0.0;
    for (std::size_t i = 0; i < kamp.size(); ++i)
      worst = std::max(worst, std::abs(back.amp[i] - kamp[i]));
    CHECK(worst < 1e-12);
  }
}

TEST_CASE("thermal field matches the direct double-sum oracle") {
  const LatticePtr lat = make_lattice(1, 10.0, 64, 1.0);
  std::vector<cplx> kamp(64);
  for (std::size_t s = 0; s < 64; ++s)
    kamp[s] = std::exp(-0.5 * lat->dispersion(s)) / std::sqrt(10.0);
  const AmplitudeField fft_pos =
      lat->to_position(AmplitudeField{Basis::momentum, kamp});
  const std::vector<cplx> direct = direct_to_position(*lat, kamp);
  double worst = 0.0;
  for (std::size_t j = 0; j < 64; ++j)
    worst = std::max(worst, std::abs(fft_pos.amp[j] - direct[j]));
  CHECK(worst < 1e-12);
}

TEST_CASE("parseval holds for 100 random fields") {
  const LatticePtr lat = make_lattice(1, 10.0, 64, 1.0);
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const AmplitudeField f{Basis::momentum, random_field(64, rng)};
    const double nk = lat->norm2(f);
    const double nr = lat->norm2(lat->to_position(f));
    CHECK(std::abs(nk - nr) / nk < 1e-12);
  }
}

TEST_CASE("shift theorem: e^{-ik.R} is a cyclic shift for grid R") {
  const LatticePtr lat = make_lattice(1, 10.0, 64, 1.0);
  std::mt19937_64 rng(13);
  const std::vector<cplx> kamp = random_field(64, rng);
  const int jshift = 5;
  const double shift = lat->position_coord(jshift);
  std::vector<cplx> shifted(64);
  for (std::size_t s = 0; s < 64; ++s)
    shifted[s] = kamp[s] * std::polar(1.0, -lat->momentum_coord(s) * shift);
  const AmplitudeField pos0 =
      lat->to_position(AmplitudeField{Basis::momentum, kamp});
  const AmplitudeField pos1 =
      lat->to_position(AmplitudeField{Basis::momentum, shifted});
  double worst = 0.0;
  for (int j = 0; j < 64; ++j)
    worst = std::max(worst, std::abs(pos1.amp[(j + jshift) % 64] - pos0.amp[j]));
  CHECK(worst < 1e-12);
}

TEST_CASE("basis tag mismatches are rejected") {
  const LatticePtr lat = make_lattice(1, 10.0, 64, 1.0);
  const AmplitudeField f{Basis::position, std::vector<cplx>(64)};
  CHECK_THROWS_AS((void)lat->to_position(f), std::invalid_argument);
  const AmplitudeField g{Basis::momentum, std::vector<cplx>(64)};
  CHECK_THROWS_AS((void)lat->to_momentum(g), std::invalid_argument);
  CHECK_THROWS_AS((void)lat->to_position(AmplitudeField{Basis::momentum, {}}),
                  std::invalid_argument);
}

TEST_CASE("minimum image folds into [-L/2, L/2)") {
  const LatticePtr lat = make_lattice(1, 10.0, 64, 1.0);
  CHECK(lat->min_image(7.0) == doctest::Approx(-3.0));
  CHECK(lat->min_image(-7.0) == doctest::Approx(3.0));
  CHECK(lat->min_image(5.0) == doctest::Approx(-5.0));
  CHECK(lat->min_image(2.0) == doctest::Approx(2.0));
}
