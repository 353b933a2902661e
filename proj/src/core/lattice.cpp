#include "lattice.hpp"

#include <cmath>
#include <mutex>
#include <stdexcept>

#include <fftw3.h>

namespace twpk {

namespace {
// FFTW's planner is not thread-safe; executions on distinct plans are.
std::mutex g_planner_mutex;
} // namespace

Lattice::Lattice(int dim, double box_length, int points_per_axis, double mass)
    : dim_(dim), length_(box_length), points_(points_per_axis), mass_(mass) {
  if (dim < 1 || dim > 3)
    throw std::invalid_argument("lattice: dimension must be 1, 2 or 3");
  if (!(box_length > 0.0))
    throw std::invalid_argument("lattice: box length must be positive");
  if (points_per_axis < 4 || points_per_axis % 2 != 0)
    throw std::invalid_argument("lattice: points per axis must be even and >= 4");
  if (!(mass > 0.0))
    throw std::invalid_argument("lattice: mass must be positive");

  sites_ = 1;
  for (int a = 0; a < dim_; ++a) sites_ *= static_cast<std::size_t>(points_);
  pos_weight_ = std::pow(length_ / points_, dim_);

  eps_.resize(sites_);
  eps_max_ = 0.0;
  for (std::size_t s = 0; s < sites_; ++s) {
    eps_[s] = dispersion_of(momentum(s));
    eps_max_ = std::max(eps_max_, eps_[s]);
  }
}

std::size_t Lattice::flatten(const Idx3& ix) const {
  std::size_t s = 0;
  for (int a = 0; a < dim_; ++a) s = s * points_ + static_cast<std::size_t>(ix[a]);
  return s;
}

Idx3 Lattice::unflatten(std::size_t site) const {
  Idx3 ix = kZeroIdx;
  for (int a = dim_ - 1; a >= 0; --a) {
    ix[a] = static_cast<int>(site % points_);
    site /= points_;
  }
  return ix;
}

Vec3 Lattice::position(std::size_t site) const {
  const Idx3 ix = unflatten(site);
  Vec3 r = kZeroVec;
  for (int a = 0; a < dim_; ++a) r[a] = position_coord(ix[a]);
  return r;
}

Vec3 Lattice::momentum(std::size_t site) const {
  const Idx3 ix = unflatten(site);
  Vec3 k = kZeroVec;
  for (int a = 0; a < dim_; ++a) k[a] = momentum_coord(ix[a]);
  return k;
}

Idx3 Lattice::momentum_numbers(std::size_t site) const {
  const Idx3 ix = unflatten(site);
  Idx3 n = kZeroIdx;
  for (int a = 0; a < dim_; ++a) n[a] = momentum_number(ix[a]);
  return n;
}

double Lattice::dispersion_of(const Vec3& k) const {
  double k2 = 0.0;
  for (int a = 0; a < dim_; ++a) k2 += k[a] * k[a];
  return k2 / (2.0 * mass_);
}

bool Lattice::on_zone_edge(std::size_t ksite) const {
  const Idx3 ix = unflatten(ksite);
  for (int a = 0; a < dim_; ++a)
    if (ix[a] == 0 || ix[a] == points_ - 1) return true;
  return false;
}

std::size_t Lattice::shifted_ksite(std::size_t ksite, const Idx3& shift) const {
  Idx3 ix = unflatten(ksite);
  for (int a = 0; a < dim_; ++a) ix[a] = wrap_axis(ix[a] - shift[a]);
  return flatten(ix);
}

double Lattice::min_image(double d) const {
  return d - length_ * std::floor(d / length_ + 0.5);
}

Vec3 Lattice::min_image(const Vec3& d) const {
  Vec3 out = kZeroVec;
  for (int a = 0; a < dim_; ++a) out[a] = min_image(d[a]);
  return out;
}

std::vector<cplx> Lattice::fft(const std::vector<cplx>& in, int sign) const {
  std::vector<cplx> out(in.size());
  int dims[3] = {points_, points_, points_};
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(g_planner_mutex);
    plan = fftw_plan_dft(
        dim_, dims,
        reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in.data())),
        reinterpret_cast<fftw_complex*>(out.data()), sign, FFTW_ESTIMATE);
  }
  if (!plan) throw std::runtime_error("lattice: fftw plan creation failed");
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(g_planner_mutex);
    fftw_destroy_plan(plan);
  }
  return out;
}

namespace {
// Per-axis reorder between monotone momentum storage (s = n + M/2) and FFTW's
// natural frequency order (index n mod M). For even M the map is an involution.
std::vector<cplx> half_shift(const std::vector<cplx>& in, int dim, int points) {
  std::vector<cplx> out(in.size());
  std::size_t stride[3] = {1, 1, 1};
  for (int a = dim - 2; a >= 0; --a)
    stride[a] = stride[a + 1] * static_cast<std::size_t>(points);
  for (std::size_t s = 0; s < in.size(); ++s) {
    std::size_t rem = s, t = 0;
    for (int a = 0; a < dim; ++a) {
      const int ix = static_cast<int>(rem / stride[a]);
      rem %= stride[a];
      t += static_cast<std::size_t>((ix + points / 2) % points) * stride[a];
    }
    out[t] = in[s];
  }
  return out;
}
} // namespace

AmplitudeField Lattice::to_position(const AmplitudeField& f) const {
  if (f.basis != Basis::momentum)
    throw std::invalid_argument("to_position: field is not in the momentum basis");
  if (f.amp.size() != sites_)
    throw std::invalid_argument("to_position: field size does not match lattice");
  std::vector<cplx> natural = half_shift(f.amp, dim_, points_);
  std::vector<cplx> pos = fft(natural, FFTW_BACKWARD);
  const double scale = std::pow(length_, -0.5 * dim_);
  for (auto& v : pos) v *= scale;
  return AmplitudeField{Basis::position, std::move(pos)};
}

AmplitudeField Lattice::to_momentum(const AmplitudeField& f) const {
  if (f.basis != Basis::position)
    throw std::invalid_argument("to_momentum: field is not in the position basis");
  if (f.amp.size() != sites_)
    throw std::invalid_argument("to_momentum: field size does not match lattice");
  std::vector<cplx> natural = fft(f.amp, FFTW_FORWARD);
  const double scale = std::pow(length_, 0.5 * dim_) / static_cast<double>(sites_);
  for (auto& v : natural) v *= scale;
  return AmplitudeField{Basis::momentum, half_shift(natural, dim_, points_)};
}

double Lattice::norm2(const AmplitudeField& f) const {
  if (f.amp.size() != sites_)
    throw std::invalid_argument("norm2: field size does not match lattice");
  double s = 0.0;
  for (const auto& v : f.amp) s += std::norm(v);
  return f.basis == Basis::position ? s * pos_weight_ : s;
}

LatticePtr make_lattice(int dim, double box_length, int points_per_axis,
                        double mass) {
  return std::make_shared<Lattice>(dim, box_length, points_per_axis, mass);
}

} // namespace twpk
