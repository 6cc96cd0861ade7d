#include "qfmin/dense_core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qfmin {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::NotConverged: return "NotConverged";
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::NotEp: return "NotEp";
    case ErrorKind::NotPositive: return "NotPositive";
    case ErrorKind::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorKind::NotPsd: return "NotPsd";
    case ErrorKind::NotSingular: return "NotSingular";
    case ErrorKind::Infeasible: return "Infeasible";
    case ErrorKind::InfeasibleOnComplement: return "InfeasibleOnComplement";
    case ErrorKind::SingularBlock: return "SingularBlock";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

double TolConfig::rank_rtol(Index rows, Index cols) const {
  if (rtol) return *rtol;
  return static_cast<double>(std::max<Index>({rows, cols, 1})) * std::numeric_limits<double>::epsilon();
}

double TolConfig::definiteness_tol(Index n) const {
  if (pd_tol) return *pd_tol;
  return rank_rtol(n, n);
}

void require_finite(const Matrix& a, const char* what) {
  if (!a.allFinite()) {
    throw Error(ErrorKind::NonFinite, std::string(what) + " has non-finite entries");
  }
}

void require_finite(const Vector& x, const char* what) {
  if (!x.allFinite()) {
    throw Error(ErrorKind::NonFinite, std::string(what) + " has non-finite entries");
  }
}

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) {
    throw Error(ErrorKind::DimensionMismatch,
                "matmul: " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) + " times " +
                    std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
  }
  return a * b;
}

Vector matvec(const Matrix& a, const Vector& x) {
  if (a.cols() != x.size()) {
    throw Error(ErrorKind::DimensionMismatch,
                "matvec: " + std::to_string(a.cols()) + " columns vs vector of length " + std::to_string(x.size()));
  }
  return a * x;
}

Matrix adjoint(const Matrix& a) { return a.adjoint(); }

bool is_hermitian(const Matrix& a, double htol) {
  if (a.rows() != a.cols()) return false;
  return (a - a.adjoint()).norm() <= htol * a.norm();
}

SvdResult svd(const Matrix& a, const TolConfig& tol) {
  require_finite(a, "svd input");
  const Eigen::MatrixXcd work = a;
  Eigen::JacobiSVD<Eigen::MatrixXcd> dec(work, Eigen::ComputeFullU | Eigen::ComputeFullV);
  if (dec.info() != Eigen::Success) {
    throw Error(ErrorKind::NotConverged, "svd: Jacobi iteration failed");
  }

  SvdResult out{dec.matrixU(), dec.singularValues(), dec.matrixV()};
  const Index k = out.sigma.size();
  Matrix sigma_block = Matrix::Zero(a.rows(), a.cols());
  for (Index i = 0; i < k; ++i) sigma_block(i, i) = out.sigma(i);
  const double residual = (out.u * sigma_block * out.v.adjoint() - a).norm();
  if (residual > tol.ktol * a.norm()) {
    throw Error(ErrorKind::NotConverged, "svd: reconstruction residual above ktol", residual);
  }
  return out;
}

EigResult eigh(const Matrix& a, const TolConfig& tol) {
  require_finite(a, "eigh input");
  if (a.rows() != a.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "eigh: matrix is not square");
  }
  const double skew = (a - a.adjoint()).norm();
  if (skew > tol.htol * a.norm()) {
    throw Error(ErrorKind::NotHermitian, "eigh: matrix is not Hermitian", skew);
  }
  const Eigen::MatrixXcd sym = 0.5 * (a + a.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> dec(sym);
  if (dec.info() != Eigen::Success) {
    throw Error(ErrorKind::NotConverged, "eigh: QL iteration did not converge");
  }
  EigResult out{dec.eigenvectors(), dec.eigenvalues()};
  const double residual = (out.q * out.lambda.cast<Scalar>().asDiagonal() * out.q.adjoint() - a).norm();
  if (residual > tol.ktol * std::max(a.norm(), std::numeric_limits<double>::min())) {
    throw Error(ErrorKind::NotConverged, "eigh: reconstruction residual above ktol", residual);
  }
  return out;
}

Matrix identity(Index n) { return Matrix::Identity(n, n); }

Matrix from_real(const Eigen::MatrixXd& a) { return a.cast<Scalar>(); }

Vector from_real(const Eigen::VectorXd& x) { return x.cast<Scalar>(); }

double quadratic_form(const Matrix& t, const Vector& x) { return x.dot(t * x).real(); }

}  // namespace qfmin
