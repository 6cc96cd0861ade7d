#include "qfmin/pinv_ops.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace qfmin {

namespace {

// Principal vectors closer than this to R(B) are taken to lie in it.
constexpr double kIntersectionSin = 1e-12;

Matrix pinv_from_svd(const SvdResult& dec, const RankDecision& rank, Index rows, Index cols) {
  Matrix out = Matrix::Zero(cols, rows);
  for (Index i = 0; i < rank.rank; ++i) {
    out += (dec.v.col(i) / dec.sigma(i)) * dec.u.col(i).adjoint();
  }
  return out;
}

}  // namespace

RankDecision rank_decide(std::span<const double> sigma, const TolConfig& tol, Index dim_hint) {
  RankDecision out;
  const Index n = static_cast<Index>(sigma.size());
  if (dim_hint <= 0) dim_hint = n;
  const double rtol = tol.rank_rtol(dim_hint, dim_hint);
  const double smax = n > 0 ? sigma[0] : 0.0;
  out.threshold = std::max(rtol * smax, tol.abs_floor);
  for (Index i = 0; i < n; ++i) {
    const double s = sigma[static_cast<std::size_t>(i)];
    if (s > out.threshold) {
      ++out.rank;
      out.sigma_kept_min = std::min(out.sigma_kept_min, s);
    } else {
      out.sigma_dropped_max = std::max(out.sigma_dropped_max, s);
    }
  }
  if (out.rank > 0 && smax > 0.0) {
    out.ill_conditioned = out.sigma_kept_min / smax < tol.warn_ratio;
  }
  return out;
}

RankDecision numerical_rank(const Matrix& a, const TolConfig& tol) {
  if (a.size() == 0) return rank_decide({}, tol);
  const SvdResult dec = svd(a, tol);
  return rank_decide(std::span<const double>(dec.sigma.data(), static_cast<std::size_t>(dec.sigma.size())), tol,
                     std::max(a.rows(), a.cols()));
}

Matrix pinv(const Matrix& a, const TolConfig& tol) {
  if (a.size() == 0) return Matrix::Zero(a.cols(), a.rows());
  const SvdResult dec = svd(a, tol);
  const RankDecision rank =
      rank_decide(std::span<const double>(dec.sigma.data(), static_cast<std::size_t>(dec.sigma.size())), tol,
                  std::max(a.rows(), a.cols()));
  return pinv_from_svd(dec, rank, a.rows(), a.cols());
}

TolConfig product_tol(const Matrix& a, const Matrix& b, const TolConfig& tol) {
  if (a.cols() != b.rows()) {
    throw Error(ErrorKind::DimensionMismatch, "product_tol: A and B cannot be multiplied");
  }
  TolConfig out = tol;
  const Index dim = std::max({a.rows(), a.cols(), b.cols()});
  out.abs_floor = std::max(tol.abs_floor, tol.rank_rtol(dim, dim) * a.norm() * b.norm());
  return out;
}

Matrix pinv_product(const Matrix& a, const Matrix& b, const TolConfig& tol) {
  return pinv(a * b, product_tol(a, b, tol));
}

double PenroseResiduals::max() const { return std::max({a_p_a, p_a_p, ap_herm, pa_herm}); }

PenroseResiduals penrose_residuals(const Matrix& a, const Matrix& p) {
  if (p.rows() != a.cols() || p.cols() != a.rows()) {
    throw Error(ErrorKind::DimensionMismatch, "penrose_residuals: pseudoinverse has the wrong shape");
  }
  const auto rel = [](double num, double den) { return den > 0.0 ? num / den : num; };
  const Matrix ap = a * p;
  const Matrix pa = p * a;
  PenroseResiduals r;
  r.a_p_a = rel((ap * a - a).norm(), a.norm());
  r.p_a_p = rel((pa * p - p).norm(), p.norm());
  r.ap_herm = (ap.adjoint() - ap).norm() / std::max(1.0, ap.norm());
  r.pa_herm = (pa.adjoint() - pa).norm() / std::max(1.0, pa.norm());
  return r;
}

Matrix projector_range(const Matrix& a, const TolConfig& tol) { return a * pinv(a, tol); }

Matrix projector_rangestar(const Matrix& a, const TolConfig& tol) { return pinv(a, tol) * a; }

SubspaceBasis range_basis(const Matrix& a, const TolConfig& tol) {
  if (a.size() == 0) return {Matrix::Zero(a.rows(), 0), a.rows()};
  const SvdResult dec = svd(a, tol);
  const RankDecision rank =
      rank_decide(std::span<const double>(dec.sigma.data(), static_cast<std::size_t>(dec.sigma.size())), tol,
                  std::max(a.rows(), a.cols()));
  return {dec.u.leftCols(rank.rank), a.rows()};
}

SubspaceBasis null_basis(const Matrix& a, const TolConfig& tol) {
  if (a.size() == 0) return {identity(a.cols()), a.cols()};
  const SvdResult dec = svd(a, tol);
  const RankDecision rank =
      rank_decide(std::span<const double>(dec.sigma.data(), static_cast<std::size_t>(dec.sigma.size())), tol,
                  std::max(a.rows(), a.cols()));
  return {dec.v.rightCols(a.cols() - rank.rank), a.cols()};
}

double ep_residual(const Matrix& t, const TolConfig& tol) {
  if (t.rows() != t.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "is_ep: matrix is not square");
  }
  const Matrix p = pinv(t, tol);
  return (t * p - p * t).norm();
}

bool is_ep(const Matrix& t, const TolConfig& tol) {
  return ep_residual(t, tol) <= tol.ep_tol * std::max(1.0, t.norm());
}

EpDecomposition ep_decompose(const Matrix& t, const TolConfig& tol) {
  if (!is_ep(t, tol)) {
    throw Error(ErrorKind::NotEp, "ep_decompose: T T^+ != T^+ T", ep_residual(t, tol));
  }
  const SvdResult dec = svd(t, tol);
  const RankDecision rank =
      rank_decide(std::span<const double>(dec.sigma.data(), static_cast<std::size_t>(dec.sigma.size())), tol,
                  t.rows());
  EpDecomposition out;
  out.rank = rank.rank;
  out.u1 = dec.u;
  const auto range = dec.u.leftCols(rank.rank);
  out.a1 = range.adjoint() * t * range;
  if (is_hermitian(t, tol.htol)) {
    out.a1 = (0.5 * (out.a1 + out.a1.adjoint())).eval();
  }
  return out;
}

Matrix sqrt_psd(const Matrix& t, const TolConfig& tol) {
  const EigResult dec = eigh(t, tol);
  const Index n = dec.lambda.size();
  if (n == 0) return t;
  const double scale = std::max(std::abs(dec.lambda(0)), std::abs(dec.lambda(n - 1)));
  if (dec.lambda(0) < -tol.neg_tol * scale) {
    throw Error(ErrorKind::NotPositive, "sqrt_psd: matrix has a negative eigenvalue", dec.lambda(0));
  }
  RealVector roots(n);
  for (Index i = 0; i < n; ++i) roots(i) = std::sqrt(std::max(dec.lambda(i), 0.0));
  Matrix r = dec.q * roots.cast<Scalar>().asDiagonal() * dec.q.adjoint();
  return 0.5 * (r + r.adjoint());
}

AngleReport principal_angle_diag(const Matrix& a, const Matrix& b, const TolConfig& tol) {
  if (a.cols() != b.rows()) {
    throw Error(ErrorKind::DimensionMismatch, "principal_angle_diag: A and B cannot be multiplied");
  }
  AngleReport out;
  out.angle = std::numbers::pi / 2.0;

  const SubspaceBasis kernel = null_basis(a, tol);
  const SubspaceBasis range = range_basis(b, tol);
  const Index k = kernel.dim();
  const Index l = range.dim();
  out.hi_dim = k;
  if (k == 0 || l == 0) return out;

  // The left singular vectors of N(A)^* R(B) are principal vectors of N(A)
  // against R(B). Angles come from atan2(sin, cos) with the sine measured as
  // the distance to R(B), which stays accurate for tiny angles. Zero-angle
  // directions span N(A) cap R(B); the rest span H_i.
  const Matrix cross = kernel.basis.adjoint() * range.basis;
  const SvdResult dec = svd(cross, tol);
  const Matrix p_range = range.projector();
  double smallest = std::numbers::pi / 2.0;
  Index hi = 0;
  for (Index j = 0; j < k; ++j) {
    const Vector h = kernel.basis * dec.u.col(j);
    const double sine = (h - p_range * h).norm();
    if (sine <= kIntersectionSin) continue;
    const double cosine = j < dec.sigma.size() ? dec.sigma(j) : 0.0;
    smallest = std::min(smallest, std::atan2(sine, cosine));
    ++hi;
  }
  out.hi_dim = hi;
  out.angle = smallest;
  if (out.angle < tol.angle_warn) {
    out.warning = Diagnostic{"small_principal_angle",
                             "angle between N(A) minus R(B) and R(B) is below angle_warn; the product AB is "
                             "close to losing closed range",
                             out.angle};
  }
  return out;
}

ReverseOrderReport reverse_order_holds(const Matrix& a, const Matrix& b, const TolConfig& tol) {
  if (a.cols() != b.rows()) {
    throw Error(ErrorKind::DimensionMismatch, "reverse_order_holds: A and B cannot be multiplied");
  }
  ReverseOrderReport out;
  const Matrix pa = projector_rangestar(a, tol);  // A^+ A
  const Matrix pb = projector_range(b, tol);      // B B^+
  const Matrix bb = b * b.adjoint();
  const Matrix aa = a.adjoint() * a;
  out.commutator_pinv_a = (pa * bb - bb * pa).norm();
  out.commutator_pinv_b = (pb * aa - aa * pb).norm();
  out.tol_pinv_a = tol.commute_tol * std::max(bb.norm(), tol.abs_floor);
  out.tol_pinv_b = tol.commute_tol * std::max(aa.norm(), tol.abs_floor);
  out.holds = out.commutator_pinv_a <= out.tol_pinv_a && out.commutator_pinv_b <= out.tol_pinv_b;
  out.product_rank = numerical_rank(a * b, product_tol(a, b, tol));
  return out;
}

bool lat_invariant(const SubspaceBasis& subspace, const Matrix& t, const TolConfig& tol) {
  if (t.rows() != t.cols() || subspace.ambient_dim != t.rows() || subspace.basis.rows() != t.rows()) {
    throw Error(ErrorKind::DimensionMismatch, "lat_invariant: subspace and operator dimensions differ");
  }
  const Matrix p = subspace.projector();
  const Matrix leak = (identity(t.rows()) - p) * t * p;
  return leak.norm() <= tol.lat_tol * t.norm();
}

}  // namespace qfmin
