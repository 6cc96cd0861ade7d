#pragma once

#include <complex>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qfmin {

using Scalar = std::complex<double>;
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

enum class ErrorKind {
  DimensionMismatch,
  NonFinite,
  NotConverged,
  NotHermitian,
  NotEp,
  NotPositive,
  NotPositiveDefinite,
  NotPsd,
  NotSingular,
  Infeasible,
  InfeasibleOnComplement,
  SingularBlock,
  InvalidArgument,
};

const char* to_string(ErrorKind kind);

/// Every failure raised by the library carries a kind so callers (the CLI in
/// particular) can map it onto an exit status. `value` holds the offending
/// quantity when there is one (a residual, an eigenvalue), NaN otherwise.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message, double value = std::numeric_limits<double>::quiet_NaN())
      : std::runtime_error(message), kind_(kind), value_(value) {}

  ErrorKind kind() const { return kind_; }
  double value() const { return value_; }

 private:
  ErrorKind kind_;
  double value_;
};

/// Tolerances shared by every module. Relative quantities are scaled by a
/// norm of the operand they gate; see the individual operations.
struct TolConfig {
  // Rank threshold relative to sigma_max. Unset means max(rows, cols) * eps.
  std::optional<double> rtol;
  double abs_floor = 1e-300;
  // Factorization reconstruction and Hermitian-ness checks.
  double ktol = 1e-10;
  double htol = 1e-10;
  // Definiteness gate relative to lambda_max. Unset means the default rtol for T.
  std::optional<double> pd_tol;
  double neg_tol = 1e-10;
  double angle_warn = 1e-6;
  // sigma_min / sigma_max below this marks a kept block as ill-conditioned.
  double warn_ratio = 1e-5;
  double feas_tol = 1e-8;
  double ep_tol = 1e-8;
  double lat_tol = 1e-9;
  double commute_tol = 1e-10;

  double rank_rtol(Index rows, Index cols) const;
  double definiteness_tol(Index n) const;
};

struct SvdResult {
  Matrix u;      // m x m unitary
  RealVector sigma;  // min(m, n), descending
  Matrix v;      // n x n unitary
};

struct EigResult {
  Matrix q;           // n x n unitary
  RealVector lambda;  // ascending
};

void require_finite(const Matrix& a, const char* what);
void require_finite(const Vector& x, const char* what);

Matrix matmul(const Matrix& a, const Matrix& b);
Vector matvec(const Matrix& a, const Vector& x);
Matrix adjoint(const Matrix& a);

bool is_hermitian(const Matrix& a, double htol);

/// Full SVD, a = u * diag(sigma) * v^*. Throws NotConverged when the
/// factorization fails or does not reconstruct `a` to within ktol * |a|.
SvdResult svd(const Matrix& a, const TolConfig& tol = {});

/// Eigendecomposition of a Hermitian matrix, a = q * diag(lambda) * q^*.
EigResult eigh(const Matrix& a, const TolConfig& tol = {});

Matrix identity(Index n);
Matrix from_real(const Eigen::MatrixXd& a);
Vector from_real(const Eigen::VectorXd& x);

/// <x, T x>, real part only (T is Hermitian wherever this is used).
double quadratic_form(const Matrix& t, const Vector& x);

}  // namespace qfmin
