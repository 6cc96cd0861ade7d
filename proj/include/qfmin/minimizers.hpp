#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qfmin/dense_core.hpp"
#include "qfmin/pinv_ops.hpp"

namespace qfmin {

/// minimize <x, T x> subject to A x = b. T is n x n Hermitian, A is m x n.
class QpProblem {
 public:
  QpProblem(Matrix t, Matrix a, Vector b, TolConfig tol = {});

  const Matrix& t() const { return t_; }
  const Matrix& a() const { return a_; }
  const Vector& b() const { return b_; }
  const TolConfig& tol() const { return tol_; }
  Index n() const { return t_.rows(); }
  Index m() const { return a_.rows(); }

  QpProblem with_t(Matrix t) const { return {std::move(t), a_, b_, tol_}; }

 private:
  Matrix t_;
  Matrix a_;
  Vector b_;
  TolConfig tol_;
};

enum class Method { PosDefDiag, PosDef, Cor1Shortcut, PsdComplement, MinNormLs };
enum class MethodChoice { Auto, PosDefDiag, PosDef, PsdComplement };

const char* to_string(Method method);

struct MinimizationResult {
  Vector xhat;
  double min_value = 0.0;
  double feasibility_residual = 0.0;
  Method method = Method::PosDef;
  std::vector<Diagnostic> diagnostics;
};

/// A^+ b: the minimal-norm solution of the normal equations A^* A u = A^* b.
Vector min_norm_ls(const Matrix& a, const Vector& b, const TolConfig& tol = {});

/// b lies in R(A): |A A^+ b - b| <= feas_tol * max(1, |b|).
bool feasible(const Matrix& a, const Vector& b, const TolConfig& tol = {});

/// Diagonalize T = U^* T_k U, scale by X = sqrt(T_k) and take the minimal-norm
/// solution in the scaled coordinates: x = U^* X^-1 (A U^* X^-1)^+ b.
MinimizationResult minimize_posdef_diag(const QpProblem& p);

/// Same minimizer through the Hermitian square root R of T:
/// x = R^-1 (A R^-1)^+ b, with minimum |(A R^-1)^+ b|^2.
MinimizationResult minimize_posdef(const QpProblem& p);

/// x = A^+ b when A is square and both R(A) and R(A^*) are T-invariant.
/// Returns nothing when the shortcut does not apply.
std::optional<MinimizationResult> try_cor1_shortcut(const QpProblem& p);

/// Singular PSD T: minimize over N(T)^perp only, via the EP form
/// T = U1 (A1 (+) 0) U1^*, R^2 = A1, x = U1 R^+ (A U1 R^+)^+ b.
MinimizationResult minimize_psd_complement(const QpProblem& p);

MinimizationResult solve(const QpProblem& p, MethodChoice method = MethodChoice::Auto);

/// Spectral classification of a Hermitian T used by the dispatcher and by
/// `check`.
enum class Definiteness { PositiveDefinite, PsdSingular, Indefinite };
struct SpectrumReport {
  Definiteness kind = Definiteness::Indefinite;
  Matrix q;
  RealVector lambda;  // ascending
  Index rank = 0;     // eigenvalues above the definiteness gate
};
SpectrumReport classify_spectrum(const Matrix& t, const TolConfig& tol = {});

}  // namespace qfmin
