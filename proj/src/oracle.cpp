#include "qfmin/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace qfmin::oracle {

namespace {

constexpr double kBlockResidualTol = 1e-8;
constexpr double kFeasTol = 1e-8;
// Eigenvalues of T below this fraction of lambda_max are treated as N(T).
constexpr double kRangeGate = 1e-10;

Eigen::MatrixXcd orthonormal_null(const Eigen::MatrixXcd& a) {
  if (a.rows() == 0) return Eigen::MatrixXcd::Identity(a.cols(), a.cols());
  Eigen::JacobiSVD<Eigen::MatrixXcd> dec(a, Eigen::ComputeFullV);
  const auto& s = dec.singularValues();
  const double smax = s.size() > 0 ? s(0) : 0.0;
  const double cut = std::max(a.rows(), a.cols()) * std::numeric_limits<double>::epsilon() * smax;
  Index rank = 0;
  while (rank < s.size() && s(rank) > cut) ++rank;
  return dec.matrixV().rightCols(a.cols() - rank);
}

Eigen::MatrixXcd range_of_hermitian(const Eigen::MatrixXcd& t) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> dec(0.5 * (t + t.adjoint()));
  if (dec.info() != Eigen::Success) {
    throw Error(ErrorKind::NotConverged, "oracle: eigensolver failed");
  }
  const auto& lambda = dec.eigenvalues();
  const Index n = lambda.size();
  const double lmax = n > 0 ? std::max(lambda(n - 1), 0.0) : 0.0;
  Index first = 0;
  while (first < n && lambda(first) <= kRangeGate * lmax) ++first;
  if (lmax == 0.0) first = n;
  return dec.eigenvectors().rightCols(n - first);
}

Eigen::VectorXcd least_squares(const Eigen::MatrixXcd& a, const Eigen::VectorXcd& b) {
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXcd> cod(a);
  return cod.solve(b);
}

}  // namespace

OracleResult kkt_solve(const Matrix& t, const Matrix& a, const Vector& b) {
  const Index n = t.rows();
  const Index m = a.rows();
  if (t.cols() != n || a.cols() != n || b.size() != m) {
    throw Error(ErrorKind::DimensionMismatch, "kkt_solve: inconsistent dimensions");
  }
  Eigen::MatrixXcd block = Eigen::MatrixXcd::Zero(n + m, n + m);
  block.topLeftCorner(n, n) = 2.0 * t;
  block.topRightCorner(n, m) = a.adjoint();
  block.bottomLeftCorner(m, n) = a;
  Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(n + m);
  rhs.tail(m) = b;

  const Eigen::VectorXcd z = least_squares(block, rhs);
  OracleResult out;
  out.kkt_residual = (block * z - rhs).norm() / std::max(1.0, rhs.norm());
  if (out.kkt_residual > kBlockResidualTol) {
    throw Error(ErrorKind::SingularBlock, "kkt_solve: block system has no solution", out.kkt_residual);
  }
  out.x = z.head(n);
  out.min_value = quadratic_form(t, out.x);
  return out;
}

OracleResult reduced_solve(const Matrix& t, const Matrix& a, const Vector& b) {
  if (t.rows() != t.cols() || a.cols() != t.rows() || b.size() != a.rows()) {
    throw Error(ErrorKind::DimensionMismatch, "reduced_solve: inconsistent dimensions");
  }
  const Eigen::MatrixXcd basis = range_of_hermitian(t);
  const Eigen::MatrixXcd reduced_a = a * basis;
  const Eigen::VectorXcd z0 = least_squares(reduced_a, b);
  const double miss = (reduced_a * z0 - b).norm();
  if (miss > kFeasTol * std::max(1.0, b.norm())) {
    throw Error(ErrorKind::InfeasibleOnComplement, "reduced_solve: (AB)(AB)^+ b != b", miss);
  }
  if (basis.cols() == 0) {
    return OracleResult{Vector::Zero(t.rows()), 0.0, 0.0};
  }
  const Matrix reduced_t = basis.adjoint() * t * basis;
  const OracleResult inner = kkt_solve(0.5 * (reduced_t + reduced_t.adjoint()), reduced_a, b);
  OracleResult out;
  out.x = basis * inner.x;
  out.min_value = quadratic_form(t, out.x);
  out.kkt_residual = inner.kkt_residual;
  return out;
}

Matrix feasible_directions(const Matrix& t, const Matrix& a, Perturbations mode) {
  if (mode == Perturbations::Constraint) return orthonormal_null(a);
  const Eigen::MatrixXcd basis = range_of_hermitian(t);
  return basis * orthonormal_null(a * basis);
}

double objective_increase(const Matrix& t, const Vector& x, const Vector& d) {
  return 2.0 * d.dot(t * x).real() + d.dot(t * d).real();
}

bool grid_refute(const Matrix& t, const Matrix& a, const Vector& b, const Vector& candidate, int n_samples,
                 Perturbations mode, std::uint64_t seed) {
  if ((a * candidate - b).norm() > kFeasTol * std::max(1.0, b.norm())) return false;
  const Matrix directions = feasible_directions(t, a, mode);
  if (directions.cols() == 0) return true;

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> log_scale(-6.0, 1.0);
  const double base = std::max(1.0, candidate.norm());
  for (int s = 0; s < n_samples; ++s) {
    Vector coeff(directions.cols());
    for (Index i = 0; i < coeff.size(); ++i) coeff(i) = Scalar(normal(rng), 0.0);
    if (coeff.norm() == 0.0) continue;
    const Vector d = directions * coeff * (std::pow(10.0, log_scale(rng)) * base / coeff.norm());
    if (objective_increase(t, candidate, d) < -1e-10) return false;
  }
  return true;
}

}  // namespace qfmin::oracle
