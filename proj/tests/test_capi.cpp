// exercises the shared-library surface exactly as an external consumer would:
// only twpk.h, no core headers

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>

#include "twpk.h"

namespace {
struct LatticeGuard {
  twpk_lattice* p = nullptr;
  ~LatticeGuard() { twpk_lattice_destroy(p); }
};
struct StateGuard {
  twpk_state* p = nullptr;
  ~StateGuard() { twpk_state_destroy(p); }
};
} // namespace

TEST_CASE("lattice lifecycle and validation") {
  LatticeGuard lat;
  REQUIRE(twpk_lattice_create(1, 10.0, 64, 1.0, &lat.p) == TWPK_OK);
  int dim = 0, points = 0;
  double box = 0.0, mass = 0.0;
  size_t sites = 0;
  CHECK(twpk_lattice_info(lat.p, &dim, &box, &points, &mass, &sites) == TWPK_OK);
  CHECK(dim == 1);
  CHECK(points == 64);
  CHECK(sites == 64);

  twpk_lattice* bad = nullptr;
  CHECK(twpk_lattice_create(1, 10.0, 63, 1.0, &bad) == TWPK_EINVAL);
  CHECK(std::string(twpk_last_error()).find("even") != std::string::npos);
}

TEST_CASE("thermal numbers through the c api") {
  LatticeGuard lat;
  REQUIRE(twpk_lattice_create(1, 10.0, 64, 1.0, &lat.p) == TWPK_OK);
  double lambda = 0.0, zlat = 0.0, zcont = 0.0;
  int regime = 0;
  CHECK(twpk_thermal_info(lat.p, 1.0, &lambda, &zlat, &zcont, &regime) == TWPK_OK);
  CHECK(lambda == doctest::Approx(std::sqrt(2.0)));
  CHECK(zcont == doctest::Approx(3.9894228040143));
  CHECK(regime == 1);

  double lhs = 0.0, rhs = 0.0, rel = 0.0;
  const int k0[3] = {0, 0, 0};
  CHECK(twpk_verify_split(lat.p, 1.0, 0.5, k0, &lhs, &rhs, &rel, &regime) ==
        TWPK_OK);
  CHECK(lhs == 1.0);
  CHECK(rel == doctest::Approx(7.45330634416e-6).epsilon(1e-6));
  CHECK(regime == 0); // split betas leave the image regime on this box

  double exact = 0.0, gauss = 0.0;
  const double r1[3] = {1.0, 0.0, 0.0}, r0[3] = {0.0, 0.0, 0.0};
  CHECK(twpk_boltzmann_kernel(lat.p, 1.0, r1, r0, &exact, &gauss) == TWPK_OK);
  CHECK(std::abs(exact - gauss) / gauss < 1e-6);
}

TEST_CASE("states and observables through the c api") {
  LatticeGuard lat;
  REQUIRE(twpk_lattice_create(1, 10.0, 64, 1.0, &lat.p) == TWPK_OK);
  const double center[3] = {5.0, 0.0, 0.0};
  const int k3[3] = {3, 0, 0};
  StateGuard s;
  REQUIRE(twpk_state_rkt(lat.p, 1.0, center, k3, &s.p) == TWPK_OK);

  double norm = 0.0;
  CHECK(twpk_state_norm2(s.p, &norm) == TWPK_OK);
  CHECK(norm == doctest::Approx(0.03989422804014327).epsilon(1e-6));

  double mean = 0.0, var = 0.0;
  int uv = 0;
  CHECK(twpk_state_energy(s.p, &mean, &var, &uv) == TWPK_OK);
  CHECK(mean == doctest::Approx(2.2765287921961).epsilon(1e-9));
  CHECK(uv == 1);

  double km[3] = {0, 0, 0};
  CHECK(twpk_state_momentum_mean(s.p, km) == TWPK_OK);
  CHECK(km[0] == doctest::Approx(2.0 * 3.141592653589793 * 3.0 / 10.0));

  double dk2[3], dx2[3], prod[3];
  CHECK(twpk_state_uncertainty(s.p, dk2, dx2, prod) == TWPK_OK);
  CHECK(prod[0] == doctest::Approx(0.5).epsilon(1e-4));

  StateGuard evolved;
  REQUIRE(twpk_state_evolve(s.p, 1.0, &evolved.p) == TWPK_OK);
  double rm[3];
  CHECK(twpk_state_position_mean(evolved.p, rm) == TWPK_OK);
  CHECK(std::abs(rm[0] - (5.0 + km[0])) < 1e-3);

  double re = 0.0, im = 0.0;
  CHECK(twpk_overlap(s.p, s.p, &re, &im) == TWPK_OK);
  CHECK(re == doctest::Approx(norm).epsilon(1e-12));
  CHECK(im == doctest::Approx(0.0));

  // too-wide packets surface as EINVAL
  StateGuard wide;
  REQUIRE(twpk_state_rt(lat.p, 0.05, center, &wide.p) == TWPK_OK);
  CHECK(twpk_state_position_mean(wide.p, rm) == TWPK_EINVAL);
}

TEST_CASE("verify runner and config errors") {
  char* json = nullptr;
  int all_passed = -1;
  REQUIRE(twpk_verify_run("points = 16\nsuites = closure\n", &json,
                          &all_passed) == TWPK_OK);
  REQUIRE(json != nullptr);
  CHECK(all_passed == 1);
  CHECK(std::string(json).find("\"schema\": 1") != std::string::npos);
  twpk_string_free(json);

  CHECK(twpk_verify_run("suites = bogus\n", &json, &all_passed) == TWPK_ECONFIG);
  CHECK(twpk_verify_run("points = 63\n", &json, &all_passed) == TWPK_ECONFIG);
}

TEST_CASE("data dumps land on disk") {
  const std::string dir = std::filesystem::temp_directory_path() /
                          "twpk_capi_test";
  std::filesystem::create_directories(dir);

  char* json = nullptr;
  const double temps[3] = {0.25, 1.0, 4.0};
  const double center[3] = {5.0, 0.0, 0.0};
  const int k3[3] = {3, 0, 0};
  int ok = 0;
  REQUIRE(twpk_wavefunction_run("points = 64\n", center, k3, temps, 3,
                                dir.c_str(), &json, &ok) == TWPK_OK);
  CHECK(ok == 1);
  twpk_string_free(json);
  CHECK(std::filesystem::exists(dir + "/wavefunction_rt_T0p25.csv"));
  CHECK(std::filesystem::exists(dir + "/wavefunction_rkt_T4.csv"));

  const std::string kernel_csv = dir + "/kernel.csv";
  REQUIRE(twpk_kernel_run("points = 64\n", kernel_csv.c_str(), &json) == TWPK_OK);
  twpk_string_free(json);
  CHECK(std::filesystem::exists(kernel_csv));

  const std::string spectrum_csv = dir + "/spectrum.csv";
  REQUIRE(twpk_spectrum_run("points = 16\n", "projector", spectrum_csv.c_str(),
                            &json) == TWPK_OK);
  twpk_string_free(json);

  const double xs[3] = {0.25, 0.5, 0.75};
  const std::string sweep_csv = dir + "/sweep_x.csv";
  REQUIRE(twpk_sweep_run("points = 16\n", "x", xs, 3, sweep_csv.c_str(),
                         &json) == TWPK_OK);
  twpk_string_free(json);
  CHECK(std::filesystem::exists(sweep_csv));

  // empty temperature list is a config error
  CHECK(twpk_wavefunction_run("points = 64\n", center, k3, nullptr, 0,
                              dir.c_str(), &json, &ok) == TWPK_ECONFIG);
}
