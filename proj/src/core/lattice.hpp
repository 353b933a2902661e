#pragma once

#include <memory>
#include <vector>

#include "types.hpp"

namespace twpk {

enum class Basis { position, momentum, fock };

// Complex amplitudes over the grid, together with the basis they live in.
// Position entries are indexed by the grid site j (r_j = j L/M per axis),
// momentum entries by s = n + M/2 with n in [-M/2, M/2), so that the
// physical momentum k = 2 pi n / L increases monotonically with s.
struct AmplitudeField {
  Basis basis = Basis::momentum;
  std::vector<cplx> amp;
};

// D-dimensional periodic box with M points per axis. Units: hbar = k_B = 1,
// so temperatures are energies and the dispersion is eps_k = |k|^2 / (2m).
//
// Transform convention (fixed once, used everywhere):
//   psi(r_j)   = L^{-D/2} sum_k psitilde(k) e^{+i k.r_j}
//   psitilde(k)= L^{+D/2} M^{-D} sum_j psi(r_j) e^{-i k.r_j}
// which makes sum_j |psi|^2 (L/M)^D = sum_k |psitilde|^2 (Parseval with the
// position measure (L/M)^D and unit momentum measure).
class Lattice {
public:
  Lattice(int dim, double box_length, int points_per_axis, double mass);

  int dim() const { return dim_; }
  double box_length() const { return length_; }
  int points_per_axis() const { return points_; }
  double mass() const { return mass_; }
  std::size_t site_count() const { return sites_; }

  // quadrature weights
  double position_weight() const { return pos_weight_; } // (L/M)^D
  double cell_fraction() const { return 1.0 / static_cast<double>(sites_); }

  // per-axis coordinates
  double position_coord(int j) const { return length_ * j / points_; }
  int momentum_number(int s) const { return s - points_ / 2; }
  double momentum_coord(int s) const {
    return 2.0 * kPi * momentum_number(s) / length_;
  }

  // flattened site index <-> per-axis indices (axis 0 slowest)
  std::size_t flatten(const Idx3& ix) const;
  Idx3 unflatten(std::size_t site) const;

  Vec3 position(std::size_t site) const;
  Vec3 momentum(std::size_t site) const;
  Idx3 momentum_numbers(std::size_t site) const;

  double dispersion(std::size_t ksite) const { return eps_[ksite]; }
  const std::vector<double>& dispersion_table() const { return eps_; }
  double dispersion_of(const Vec3& k) const;
  double max_dispersion() const { return eps_max_; }

  // true if any axis sits on the zone boundary n = -M/2 or n = M/2 - 1
  bool on_zone_edge(std::size_t ksite) const;

  // site of k - K given the sites of k and K (momentum wrapped onto the grid)
  std::size_t shifted_ksite(std::size_t ksite, const Idx3& k_shift_numbers) const;
  int wrap_axis(int s) const {
    int m = s % points_;
    return m < 0 ? m + points_ : m;
  }
  // momentum-number n -> storage site per axis, wrapped
  int site_of_number(int n) const { return wrap_axis(n + points_ / 2); }

  // displacement folded to [-L/2, L/2)
  double min_image(double d) const;
  Vec3 min_image(const Vec3& d) const;

  // basis transforms; reject fields in the wrong basis or of the wrong size
  AmplitudeField to_position(const AmplitudeField& f) const;
  AmplitudeField to_momentum(const AmplitudeField& f) const;

  double norm2(const AmplitudeField& f) const;

private:
  int dim_;
  double length_;
  int points_;
  double mass_;
  std::size_t sites_;
  double pos_weight_;
  double eps_max_;
  std::vector<double> eps_; // dispersion per momentum site

  std::vector<cplx> fft(const std::vector<cplx>& in, int sign) const;
};

using LatticePtr = std::shared_ptr<const Lattice>;

LatticePtr make_lattice(int dim, double box_length, int points_per_axis,
                        double mass);

} // namespace twpk
