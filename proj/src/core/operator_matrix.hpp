#pragma once

#include <cstddef>
#include <vector>

#include "lattice.hpp"
#include "types.hpp"

namespace twpk {

// Dense complex matrix of an operator in a declared basis (row-major).
// Momentum- and position-basis matrices over a lattice carry the quadrature
// weight inside the matrix, so that trace and products compose like the
// operators they represent.
struct OperatorMatrix {
  Basis basis = Basis::momentum;
  std::size_t dim = 0;
  std::vector<cplx> a;

  OperatorMatrix() = default;
  OperatorMatrix(Basis b, std::size_t n)
      : basis(b), dim(n), a(n * n, cplx(0.0, 0.0)) {}

  cplx& at(std::size_t i, std::size_t j) { return a[i * dim + j]; }
  const cplx& at(std::size_t i, std::size_t j) const { return a[i * dim + j]; }

  static OperatorMatrix identity(Basis b, std::size_t n) {
    OperatorMatrix m(b, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1.0;
    return m;
  }

  cplx trace() const {
    cplx t(0.0, 0.0);
    for (std::size_t i = 0; i < dim; ++i) t += at(i, i);
    return t;
  }
};

OperatorMatrix matmul(const OperatorMatrix& x, const OperatorMatrix& y);

// max_ij |x_ij - y_ij|
double max_abs_diff(const OperatorMatrix& x, const OperatorMatrix& y);
// max_ij |x_ij - conj(x_ji)|
double hermiticity_defect(const OperatorMatrix& x);
// smallest eigenvalue of a Hermitian matrix
double min_eigenvalue(const OperatorMatrix& x);

} // namespace twpk
