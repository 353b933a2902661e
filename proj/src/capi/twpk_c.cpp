#include "twpk.h"

#include <cstring>
#include <new>
#include <string>

#include "../core/config.hpp"
#include "../core/envelope.hpp"
#include "../core/greens.hpp"
#include "../core/lattice.hpp"
#include "../core/suites.hpp"
#include "../core/thermal.hpp"
#include "../core/wavepacket.hpp"

using namespace twpk;

struct twpk_lattice {
  LatticePtr p;
};
struct twpk_envelope {
  Envelope env;
};
struct twpk_state {
  WavePacketState s;
};

namespace {

thread_local std::string g_last_error;

twpk_status fail(twpk_status code, const char* msg) {
  g_last_error = msg;
  return code;
}

template <typename F>
twpk_status wrap(F&& f) {
  try {
    return f();
  } catch (const ConfigError& e) {
    return fail(TWPK_ECONFIG, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(TWPK_EINVAL, e.what());
  } catch (const std::domain_error& e) {
    return fail(TWPK_EINVAL, e.what());
  } catch (const std::bad_alloc&) {
    return fail(TWPK_EINTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(TWPK_EINTERNAL, e.what());
  }
}

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

Vec3 to_vec(const Lattice& lat, const double* v) {
  Vec3 out = kZeroVec;
  for (int a = 0; a < lat.dim(); ++a) out[a] = v[a];
  return out;
}

Idx3 to_idx(const Lattice& lat, const int* v) {
  Idx3 out = kZeroIdx;
  for (int a = 0; a < lat.dim(); ++a) out[a] = v[a];
  return out;
}

} // namespace

extern "C" {

const char* twpk_version(void) { return "0.1.0"; }

const char* twpk_last_error(void) { return g_last_error.c_str(); }

void twpk_string_free(char* s) { delete[] s; }

twpk_status twpk_lattice_create(int dim, double box_length, int points_per_axis,
                                double mass, twpk_lattice** out) {
  if (!out) return fail(TWPK_EINVAL, "null output pointer");
  return wrap([&] {
    *out = new twpk_lattice{make_lattice(dim, box_length, points_per_axis, mass)};
    return TWPK_OK;
  });
}

void twpk_lattice_destroy(twpk_lattice* lat) { delete lat; }

twpk_status twpk_lattice_info(const twpk_lattice* lat, int* dim,
                              double* box_length, int* points_per_axis,
                              double* mass, size_t* site_count) {
  if (!lat) return fail(TWPK_EINVAL, "null lattice");
  if (dim) *dim = lat->p->dim();
  if (box_length) *box_length = lat->p->box_length();
  if (points_per_axis) *points_per_axis = lat->p->points_per_axis();
  if (mass) *mass = lat->p->mass();
  if (site_count) *site_count = lat->p->site_count();
  return TWPK_OK;
}

twpk_status twpk_envelope_create_delta(const twpk_lattice* lat,
                                       twpk_envelope** out) {
  if (!lat || !out) return fail(TWPK_EINVAL, "null argument");
  return wrap([&] {
    *out = new twpk_envelope{Envelope::delta_peaked(lat->p)};
    return TWPK_OK;
  });
}

twpk_status twpk_envelope_create_thermal(const twpk_lattice* lat, double beta,
                                         twpk_envelope** out) {
  if (!lat || !out) return fail(TWPK_EINVAL, "null argument");
  return wrap([&] {
    *out = new twpk_envelope{Envelope::thermal(lat->p, beta)};
    return TWPK_OK;
  });
}

twpk_status twpk_envelope_create_thermal_boxed(const twpk_lattice* lat,
                                               double beta,
                                               twpk_envelope** out) {
  if (!lat || !out) return fail(TWPK_EINVAL, "null argument");
  return wrap([&] {
    *out = new twpk_envelope{Envelope::thermal_boxed(lat->p, beta)};
    return TWPK_OK;
  });
}

twpk_status twpk_envelope_normalize(const twpk_envelope* env,
                                    twpk_envelope** out) {
  if (!env || !out) return fail(TWPK_EINVAL, "null argument");
  return wrap([&] {
    *out = new twpk_envelope{env->env.normalized()};
    return TWPK_OK;
  });
}

void twpk_envelope_destroy(twpk_envelope* env) { delete env; }

twpk_status twpk_envelope_norm2(const twpk_envelope* env, double* out) {
  if (!env || !out) return fail(TWPK_EINVAL, "null argument");
  *out = env->env.norm2();
  return TWPK_OK;
}

twpk_status twpk_state_create(const twpk_envelope* env, const double* center,
                              const int* k_numbers, twpk_state** out) {
  if (!env || !center || !k_numbers || !out)
    return fail(TWPK_EINVAL, "null argument");
  return wrap([&] {
    const Lattice& lat = *env->env.lattice();
    *out = new twpk_state{
        make_state({to_vec(lat, center), to_idx(lat, k_numbers), env->env})};
    return TWPK_OK;
  });
}

twpk_status twpk_state_rt(const twpk_lattice* lat, double temperature,
                          const double* center, twpk_state** out) {
  if (!lat || !center || !out) return fail(TWPK_EINVAL, "null argument");
  return wrap([&] {
    *out = new twpk_state{
        make_rt_state(lat->p, temperature, to_vec(*lat->p, center))};
    return TWPK_OK;
  });
}

twpk_status twpk_state_rkt(const twpk_lattice* lat, double temperature,
                           const double* center, const int* k_numbers,
                           twpk_state** out) {
  if (!lat || !center || !k_numbers || !out)
    return fail(TWPK_EINVAL, "null argument");
  return wrap([&] {
    *out = new twpk_state{make_rkt_state(lat->p, temperature,
                                         to_vec(*lat->p, center),
                                         to_idx(*lat->p, k_numbers))};
    return TWPK_OK;
  });
}

void twpk_state_destroy(twpk_state* s) { delete s; }

twpk_status twpk_state_norm2(const twpk_state* s, double* out) {
  if (!s || !out) return fail(TWPK_EINVAL, "null argument");
  return wrap([&] {
    *out = s->s.lattice->norm2(s->s.momentum_field());
    return TWPK_OK;
  });
}

twpk_status twpk_state_momentum_mean(const twpk_state* s, double* out3) {
  if (!s || !out3) return fail(TWPK_EINVAL, "null argument");
  return wrap([&] {
    const Vec3 m = momentum_mean(s->s);
    for (int a = 0; a < 3; ++a) out3[a] = m[a];
    return TWPK_OK;
  });
}

twpk_status twpk_state_position_mean(const twpk_state* s, double* out3) {
  if (!s || !out3) return fail(TWPK_EINVAL, "null argument");
  return wrap([&] {
    const Vec3 m = position_mean(s->s);
    for (int a = 0; a < 3; ++a) out3[a] = m[a];
    return TWPK_OK;
  });
}

twpk_status twpk_state_energy(const twpk_state* s, double* mean,
                              double* variance, int* uv_ok) {
  if (!s) return fail(TWPK_EINVAL, "null state");
  return wrap([&] {
    const EnergyMoments m = energy_moments(s->s);
    if (mean) *mean = m.mean;
    if (variance) *variance = m.variance;
    if (uv_ok) *uv_ok = m.uv_ok ? 1 : 0;
    return TWPK_OK;
  });
}

twpk_status twpk_state_uncertainty(const twpk_state* s, double* dk2_3,
                                   double* dx2_3, double* product_3) {
  if (!s) return fail(TWPK_EINVAL, "null state");
  return wrap([&] {
    const Uncertainty u = uncertainty(s->s);
    for (int a = 0; a < 3; ++a) {
      if (dk2_3) dk2_3[a] = u.dk2[a];
      if (dx2_3) dx2_3[a] = u.dx2[a];
      if (product_3) product_3[a] = u.product[a];
    }
    return TWPK_OK;
  });
}

twpk_status twpk_state_evolve(const twpk_state* s, double t, twpk_state** out) {
  if (!s || !out) return fail(TWPK_EINVAL, "null argument");
  return wrap([&] {
    *out = new twpk_state{evolve(s->s, t)};
    return TWPK_OK;
  });
}

twpk_status twpk_overlap(const twpk_state* a, const twpk_state* b, double* re,
                         double* im) {
  if (!a || !b) return fail(TWPK_EINVAL, "null state");
  return wrap([&] {
    const cplx v = overlap(a->s, b->s);
    if (re) *re = v.real();
    if (im) *im = v.imag();
    return TWPK_OK;
  });
}

twpk_status twpk_delta_phi(const twpk_envelope* env, const double* delta_r,
                           const int* delta_k_numbers, double* re, double* im) {
  if (!env || !delta_r || !delta_k_numbers)
    return fail(TWPK_EINVAL, "null argument");
  return wrap([&] {
    const Lattice& lat = *env->env.lattice();
    const cplx v =
        delta_phi(env->env, to_vec(lat, delta_r), to_idx(lat, delta_k_numbers));
    if (re) *re = v.real();
    if (im) *im = v.imag();
    return TWPK_OK;
  });
}

twpk_status twpk_thermal_info(const twpk_lattice* lat, double temperature,
                              double* lambda, double* z_lattice,
                              double* z_continuum, int* regime_ok) {
  if (!lat) return fail(TWPK_EINVAL, "null lattice");
  return wrap([&] {
    const ThermalParams p = thermal_params(*lat->p, temperature);
    if (lambda) *lambda = p.lambda;
    if (z_lattice) *z_lattice = p.z_lattice;
    if (z_continuum) *z_continuum = p.z_continuum;
    if (regime_ok) *regime_ok = p.regime.ok() ? 1 : 0;
    return TWPK_OK;
  });
}

twpk_status twpk_boltzmann_kernel(const twpk_lattice* lat, double temperature,
                                  const double* r1, const double* r0,
                                  double* exact, double* gaussian) {
  if (!lat || !r1 || !r0) return fail(TWPK_EINVAL, "null argument");
  return wrap([&] {
    if (!(temperature > 0.0))
      throw std::invalid_argument("temperature must be positive");
    const double beta = 1.0 / temperature;
    if (exact)
      *exact = boltzmann_kernel_exact(*lat->p, beta, to_vec(*lat->p, r1),
                                      to_vec(*lat->p, r0))
                   .real();
    if (gaussian)
      *gaussian = boltzmann_kernel_gaussian(*lat->p, beta, to_vec(*lat->p, r1),
                                            to_vec(*lat->p, r0));
    return TWPK_OK;
  });
}

twpk_status twpk_verify_split(const twpk_lattice* lat, double temperature,
                              double x, const int* k_numbers, double* lhs,
                              double* rhs, double* rel_error, int* regime_ok) {
  if (!lat || !k_numbers) return fail(TWPK_EINVAL, "null argument");
  return wrap([&] {
    const TemperatureSplit split(temperature, x);
    const SplitCheck c =
        verify_split(*lat->p, split, to_idx(*lat->p, k_numbers));
    if (lhs) *lhs = c.lhs;
    if (rhs) *rhs = c.rhs;
    if (rel_error) *rel_error = c.rel_error;
    if (regime_ok) *regime_ok = (c.regime_r.ok() && c.regime_k.ok()) ? 1 : 0;
    return TWPK_OK;
  });
}

twpk_status twpk_kernel_split(const twpk_lattice* lat, double temperature,
                              double x, const double* r1, const double* r0,
                              double* direct, double* product_form,
                              double* rel_error, int* regime_ok) {
  if (!lat || !r1 || !r0) return fail(TWPK_EINVAL, "null argument");
  return wrap([&] {
    const TemperatureSplit split(temperature, x);
    const KernelSplitCheck c = kernel_split(*lat->p, split, to_vec(*lat->p, r1),
                                            to_vec(*lat->p, r0));
    if (direct) *direct = c.direct;
    if (product_form) *product_form = c.product_form;
    if (rel_error) *rel_error = c.rel_error;
    if (regime_ok) *regime_ok = (c.regime_r.ok() && c.regime_k.ok()) ? 1 : 0;
    return TWPK_OK;
  });
}

twpk_status twpk_verify_run(const char* config_text, char** json_report,
                            int* all_passed) {
  if (!config_text) return fail(TWPK_ECONFIG, "null config");
  return wrap([&] {
    const RunConfig cfg = parse_config_text(config_text);
    const VerifyReport report = run_verify(cfg);
    if (json_report) *json_report = dup_string(report.to_json());
    if (all_passed) *all_passed = report.all_passed ? 1 : 0;
    return TWPK_OK;
  });
}

twpk_status twpk_wavefunction_run(const char* config_text, const double* center,
                                  const int* k_numbers, const double* temps,
                                  size_t n_temps, const char* out_dir,
                                  char** json_summary, int* all_passed) {
  if (!config_text || !center || !k_numbers || !out_dir)
    return fail(TWPK_ECONFIG, "null argument");
  if (!temps || n_temps == 0)
    return fail(TWPK_ECONFIG, "empty temperature list");
  return wrap([&] {
    const RunConfig cfg = parse_config_text(config_text);
    Vec3 c = kZeroVec;
    Idx3 k = kZeroIdx;
    for (int a = 0; a < cfg.dim; ++a) {
      c[a] = center[a];
      k[a] = k_numbers[a];
    }
    const std::string json = run_wavefunction_dump(
        cfg, c, k, std::vector<double>(temps, temps + n_temps), out_dir);
    if (all_passed)
      *all_passed = json.find("\"passed\": true") != std::string::npos ? 1 : 0;
    if (json_summary) *json_summary = dup_string(json);
    return TWPK_OK;
  });
}

twpk_status twpk_kernel_run(const char* config_text, const char* out_path,
                            char** json_summary) {
  if (!config_text || !out_path) return fail(TWPK_ECONFIG, "null argument");
  return wrap([&] {
    const RunConfig cfg = parse_config_text(config_text);
    const std::string json = run_kernel_dump(cfg, out_path);
    if (json_summary) *json_summary = dup_string(json);
    return TWPK_OK;
  });
}

twpk_status twpk_spectrum_run(const char* config_text, const char* operator_kind,
                              const char* out_path, char** json_summary) {
  if (!config_text || !operator_kind || !out_path)
    return fail(TWPK_ECONFIG, "null argument");
  return wrap([&] {
    const RunConfig cfg = parse_config_text(config_text);
    const std::string json = run_spectrum_dump(cfg, operator_kind, out_path);
    if (json_summary) *json_summary = dup_string(json);
    return TWPK_OK;
  });
}

twpk_status twpk_sweep_run(const char* config_text, const char* parameter,
                           const double* values, size_t n_values,
                           const char* out_path, char** json_summary) {
  if (!config_text || !parameter || !out_path)
    return fail(TWPK_ECONFIG, "null argument");
  if (!values || n_values == 0) return fail(TWPK_ECONFIG, "empty value list");
  return wrap([&] {
    const RunConfig cfg = parse_config_text(config_text);
    const std::string json = run_sweep(
        cfg, parameter, std::vector<double>(values, values + n_values), out_path);
    if (json_summary) *json_summary = dup_string(json);
    return TWPK_OK;
  });
}

} // extern "C"
