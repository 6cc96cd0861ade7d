#include "qfmin/random_instances.hpp"

namespace qfmin::random {

Matrix gaussian(std::mt19937_64& rng, Index rows, Index cols, bool complex) {
  std::normal_distribution<double> normal;
  Matrix out(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) {
      const double re = normal(rng);
      const double im = complex ? normal(rng) : 0.0;
      out(i, j) = Scalar(re, im);
    }
  }
  return out;
}

Vector gaussian_vector(std::mt19937_64& rng, Index n, bool complex) {
  return gaussian(rng, n, 1, complex).col(0);
}

Matrix unitary(std::mt19937_64& rng, Index n, bool complex) {
  const Eigen::MatrixXcd g = gaussian(rng, n, n, complex);
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
  return qr.householderQ() * Eigen::MatrixXcd::Identity(n, n);
}

Matrix low_rank(std::mt19937_64& rng, Index rows, Index cols, Index rank, bool complex) {
  return gaussian(rng, rows, rank, complex) * gaussian(rng, rank, cols, complex);
}

QpProblem posdef_instance(std::mt19937_64& rng, Index n, Index m, bool complex) {
  const Matrix factor = gaussian(rng, n, n, complex);
  Matrix t = factor.adjoint() * factor + 0.1 * identity(n);
  t = (0.5 * (t + t.adjoint())).eval();
  Matrix a = gaussian(rng, m, n, complex);
  const Vector x0 = gaussian_vector(rng, n, complex);
  Vector b = a * x0;
  return QpProblem(std::move(t), std::move(a), std::move(b));
}

QpProblem psd_instance(std::mt19937_64& rng, Index n, Index m, Index deficiency, bool complex) {
  const Matrix factor = gaussian(rng, n - deficiency, n, complex);
  Matrix t = factor.adjoint() * factor;
  t = (0.5 * (t + t.adjoint())).eval();
  Matrix a = gaussian(rng, m, n, complex);
  // Orthogonal projector onto R(T) = R(factor^*), from a QR of factor^*.
  const Eigen::MatrixXcd fstar = factor.adjoint();
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(fstar);
  const Eigen::MatrixXcd basis =
      qr.householderQ() * Eigen::MatrixXcd::Identity(n, n - deficiency);
  const Matrix proj = basis * basis.adjoint();
  const Vector x0 = gaussian_vector(rng, n, complex);
  Vector b = a * proj * x0;
  return QpProblem(std::move(t), std::move(a), std::move(b));
}

}  // namespace qfmin::random
