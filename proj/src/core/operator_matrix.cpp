#include "operator_matrix.hpp"

#include <stdexcept>

#include <Eigen/Dense>

namespace twpk {

namespace {
using EigenMap = Eigen::Map<
    const Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;
}

OperatorMatrix matmul(const OperatorMatrix& x, const OperatorMatrix& y) {
  if (x.dim != y.dim || x.basis != y.basis)
    throw std::invalid_argument("matmul: operand shapes or bases differ");
  OperatorMatrix out(x.basis, x.dim);
  EigenMap mx(x.a.data(), x.dim, x.dim), my(y.a.data(), y.dim, y.dim);
  Eigen::Map<Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>
      mo(out.a.data(), out.dim, out.dim);
  mo = mx * my;
  return out;
}

double max_abs_diff(const OperatorMatrix& x, const OperatorMatrix& y) {
  if (x.dim != y.dim)
    throw std::invalid_argument("max_abs_diff: operand shapes differ");
  double worst = 0.0;
  for (std::size_t i = 0; i < x.a.size(); ++i)
    worst = std::max(worst, std::abs(x.a[i] - y.a[i]));
  return worst;
}

double hermiticity_defect(const OperatorMatrix& x) {
  double worst = 0.0;
  for (std::size_t i = 0; i < x.dim; ++i)
    for (std::size_t j = 0; j <= i; ++j)
      worst = std::max(worst, std::abs(x.at(i, j) - std::conj(x.at(j, i))));
  return worst;
}

double min_eigenvalue(const OperatorMatrix& x) {
  EigenMap mx(x.a.data(), x.dim, x.dim);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(mx);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("min_eigenvalue: eigensolver failed");
  return solver.eigenvalues().minCoeff();
}

} // namespace twpk
