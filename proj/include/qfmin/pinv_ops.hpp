#pragma once

#include <limits>
#include <optional>
#include <span>
#include <string>

#include "qfmin/dense_core.hpp"

namespace qfmin {

/// Warning emitted by diagnostics and solvers. Never an error by itself.
struct Diagnostic {
  std::string code;
  std::string message;
  double value = 0.0;

  bool operator==(const Diagnostic&) const = default;
};

/// Which singular values are kept when a matrix is treated as having
/// numerical rank `rank`. Dropped values play the role of exact zeros.
struct RankDecision {
  Index rank = 0;
  double threshold = 0.0;
  double sigma_kept_min = std::numeric_limits<double>::infinity();
  double sigma_dropped_max = 0.0;
  bool ill_conditioned = false;
};

struct EpDecomposition {
  Matrix u1;  // unitary; first `rank` columns span R(T), the rest N(T)
  Matrix a1;  // T restricted to R(T), invertible
  Index rank = 0;
};

/// Orthonormal columns spanning a subspace of C^ambient_dim.
struct SubspaceBasis {
  Matrix basis;
  Index ambient_dim = 0;

  Index dim() const { return basis.cols(); }
  Matrix projector() const { return basis * basis.adjoint(); }
};

struct AngleReport {
  double angle = 0.0;  // radians, in [0, pi/2]
  Index hi_dim = 0;    // dimension of N(A) minus R(B)
  std::optional<Diagnostic> warning;
};

struct ReverseOrderReport {
  bool holds = false;
  double commutator_pinv_a = 0.0;  // |[A^+A, BB^*]|
  double commutator_pinv_b = 0.0;  // |[BB^+, A^*A]|
  double tol_pinv_a = 0.0;
  double tol_pinv_b = 0.0;
  RankDecision product_rank;
};

/// `dim_hint` is max(rows, cols) of the factored matrix; it only enters the
/// default relative threshold. Defaults to sigma.size().
RankDecision rank_decide(std::span<const double> sigma, const TolConfig& tol = {}, Index dim_hint = 0);

RankDecision numerical_rank(const Matrix& a, const TolConfig& tol = {});

/// Moore-Penrose pseudoinverse from the SVD: kept singular values are
/// inverted, dropped ones map to zero.
Matrix pinv(const Matrix& a, const TolConfig& tol = {});

/// Tolerances for a computed product AB: the absolute floor is raised to the
/// rounding error of the product, rank_rtol * |A|_F |B|_F, so an exactly
/// zero product is not mistaken for a full-rank one.
TolConfig product_tol(const Matrix& a, const Matrix& b, const TolConfig& tol = {});

/// pinv(A B) under product_tol.
Matrix pinv_product(const Matrix& a, const Matrix& b, const TolConfig& tol = {});

/// Residuals of the four Penrose equations, each relative to the natural
/// scale of the equation.
struct PenroseResiduals {
  double a_p_a = 0.0;   // |APA - A| / |A|
  double p_a_p = 0.0;   // |PAP - P| / |P|
  double ap_herm = 0.0; // |(AP)^* - AP| / max(1, |AP|)
  double pa_herm = 0.0; // |(PA)^* - PA| / max(1, |PA|)

  double max() const;
};
PenroseResiduals penrose_residuals(const Matrix& a, const Matrix& p);

/// A A^+, the orthogonal projector onto R(A).
Matrix projector_range(const Matrix& a, const TolConfig& tol = {});
/// A^+ A, the orthogonal projector onto R(A^*).
Matrix projector_rangestar(const Matrix& a, const TolConfig& tol = {});

SubspaceBasis range_basis(const Matrix& a, const TolConfig& tol = {});
SubspaceBasis null_basis(const Matrix& a, const TolConfig& tol = {});

/// T T^+ = T^+ T within tol * max(1, |T|).
bool is_ep(const Matrix& t, const TolConfig& tol = {});
double ep_residual(const Matrix& t, const TolConfig& tol = {});

/// T = u1 (a1 (+) 0) u1^*, with u1 built from the left singular vectors of T.
EpDecomposition ep_decompose(const Matrix& t, const TolConfig& tol = {});

/// Unique Hermitian PSD square root. Eigenvalues in [-neg_tol |T|, 0) are
/// clamped to zero; anything more negative throws NotPositive.
Matrix sqrt_psd(const Matrix& t, const TolConfig& tol = {});

/// Minimal principal angle between H_i = N(A) minus (N(A) cap R(B)) and
/// R(B). pi/2 when either subspace is trivial.
AngleReport principal_angle_diag(const Matrix& a, const Matrix& b, const TolConfig& tol = {});

/// Bouldin's commutation conditions for (AB)^+ = B^+ A^+. Closedness of
/// R(AB) is automatic here and only surfaces through `product_rank`.
ReverseOrderReport reverse_order_holds(const Matrix& a, const Matrix& b, const TolConfig& tol = {});

/// |(I - P) T P| <= lat_tol * |T|: T maps the subspace into itself.
bool lat_invariant(const SubspaceBasis& subspace, const Matrix& t, const TolConfig& tol = {});

}  // namespace qfmin
