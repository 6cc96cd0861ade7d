#include "qfmin/minimizers.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qfmin {

namespace {

constexpr double kMinValueAgreement = 1e-9;

struct ShortcutAttempt {
  std::optional<MinimizationResult> result;
  std::string reason;
};

double rel_scale(const Vector& b) { return std::max(1.0, b.norm()); }

void check_min_value(MinimizationResult& out, const Matrix& t) {
  const double direct = quadratic_form(t, out.xhat);
  const double gap = std::abs(direct - out.min_value);
  if (gap > kMinValueAgreement * std::max(1.0, std::abs(direct))) {
    out.diagnostics.push_back({"min_value_mismatch", "closed-form minimum disagrees with <x, T x>", gap});
  }
}

void require_positive_definite(const SpectrumReport& spec, const char* who) {
  if (spec.kind != Definiteness::PositiveDefinite) {
    const double lmin = spec.lambda.size() > 0 ? spec.lambda(0) : 0.0;
    throw Error(ErrorKind::NotPositiveDefinite, std::string(who) + ": T is not positive definite", lmin);
  }
}

void require_feasible(const QpProblem& p, const char* who) {
  const Vector residual = p.a() * min_norm_ls(p.a(), p.b(), p.tol()) - p.b();
  if (residual.norm() > p.tol().feas_tol * rel_scale(p.b())) {
    throw Error(ErrorKind::Infeasible, std::string(who) + ": b is not in the range of A, S is empty",
                residual.norm());
  }
}

// The problem is trivial when A is square and invertible: S is a single point.
std::optional<MinimizationResult> invertible_constraint(const QpProblem& p, Method method) {
  if (p.m() != p.n()) return std::nullopt;
  if (numerical_rank(p.a(), p.tol()).rank != p.n()) return std::nullopt;
  MinimizationResult out;
  out.method = method;
  out.xhat = p.a().partialPivLu().solve(p.b());
  out.min_value = quadratic_form(p.t(), out.xhat);
  out.feasibility_residual = (p.a() * out.xhat - p.b()).norm();
  out.diagnostics.push_back(
      {"invertible_constraint", "A is invertible; the feasible set is the single point A^-1 b", 0.0});
  return out;
}

void note_conditioning(MinimizationResult& out, const Matrix& scaled_constraint, const TolConfig& tol) {
  const RankDecision rank = numerical_rank(scaled_constraint, tol);
  if (rank.ill_conditioned) {
    out.diagnostics.push_back({"ill_conditioned_constraint",
                               "scaled constraint operator has a small kept singular value",
                               rank.sigma_kept_min});
  }
}

ShortcutAttempt attempt_cor1(const QpProblem& p) {
  ShortcutAttempt attempt;
  if (p.m() != p.n()) {
    attempt.reason = "A is not square; R(A) is not a subspace of the domain of T";
    return attempt;
  }
  const SpectrumReport spec = classify_spectrum(p.t(), p.tol());
  if (spec.kind != Definiteness::PositiveDefinite) {
    attempt.reason = "T is not positive definite";
    return attempt;
  }
  if (!feasible(p.a(), p.b(), p.tol())) {
    attempt.reason = "b is not in R(A)";
    return attempt;
  }
  if (!lat_invariant(range_basis(p.a(), p.tol()), p.t(), p.tol())) {
    attempt.reason = "R(A) is not invariant under T";
    return attempt;
  }
  // R(A) alone does not force (A R^-1)^+ = R A^+; the reverse order law
  // needs A^+ A to commute with T^-1, i.e. R(A^*) invariant under T.
  if (!lat_invariant(range_basis(p.a().adjoint(), p.tol()), p.t(), p.tol())) {
    attempt.reason = "R(A) is invariant under T but R(A^*) is not";
    return attempt;
  }
  const Matrix root = sqrt_psd(p.t(), p.tol());
  MinimizationResult out;
  out.method = Method::Cor1Shortcut;
  out.xhat = min_norm_ls(p.a(), p.b(), p.tol());
  out.min_value = (root * out.xhat).squaredNorm();
  out.feasibility_residual = (p.a() * out.xhat - p.b()).norm();
  check_min_value(out, p.t());
  attempt.result = std::move(out);
  return attempt;
}

}  // namespace

QpProblem::QpProblem(Matrix t, Matrix a, Vector b, TolConfig tol)
    : t_(std::move(t)), a_(std::move(a)), b_(std::move(b)), tol_(tol) {
  require_finite(t_, "T");
  require_finite(a_, "A");
  require_finite(b_, "b");
  if (t_.rows() != t_.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "T must be square");
  }
  if (a_.cols() != t_.rows()) {
    throw Error(ErrorKind::DimensionMismatch, "A must have as many columns as T has rows");
  }
  if (b_.size() != a_.rows()) {
    throw Error(ErrorKind::DimensionMismatch, "b must have as many entries as A has rows");
  }
  if (!is_hermitian(t_, tol_.htol)) {
    throw Error(ErrorKind::NotHermitian, "T is not Hermitian", (t_ - t_.adjoint()).norm());
  }
}

const char* to_string(Method method) {
  switch (method) {
    case Method::PosDefDiag: return "posdef-diag";
    case Method::PosDef: return "posdef";
    case Method::Cor1Shortcut: return "cor1-shortcut";
    case Method::PsdComplement: return "psd-complement";
    case Method::MinNormLs: return "min-norm-ls";
  }
  return "unknown";
}

Vector min_norm_ls(const Matrix& a, const Vector& b, const TolConfig& tol) {
  if (a.rows() != b.size()) {
    throw Error(ErrorKind::DimensionMismatch, "min_norm_ls: A and b disagree on the number of rows");
  }
  return pinv(a, tol) * b;
}

bool feasible(const Matrix& a, const Vector& b, const TolConfig& tol) {
  const Vector residual = a * min_norm_ls(a, b, tol) - b;
  return residual.norm() <= tol.feas_tol * rel_scale(b);
}

SpectrumReport classify_spectrum(const Matrix& t, const TolConfig& tol) {
  const EigResult dec = eigh(t, tol);
  SpectrumReport out;
  out.q = dec.q;
  out.lambda = dec.lambda;
  const Index n = dec.lambda.size();
  if (n == 0) {
    out.kind = Definiteness::PsdSingular;
    return out;
  }
  const double lmax = dec.lambda(n - 1);
  const double scale = std::max(std::abs(dec.lambda(0)), std::abs(lmax));
  if (dec.lambda(0) < -tol.neg_tol * scale) {
    out.kind = Definiteness::Indefinite;
    return out;
  }
  const double gate = std::max(tol.definiteness_tol(n) * lmax, tol.abs_floor);
  out.rank = (dec.lambda.array() > gate).count();
  out.kind = out.rank == n ? Definiteness::PositiveDefinite : Definiteness::PsdSingular;
  return out;
}

MinimizationResult minimize_posdef_diag(const QpProblem& p) {
  const SpectrumReport spec = classify_spectrum(p.t(), p.tol());
  require_positive_definite(spec, "minimize_posdef_diag");
  require_feasible(p, "minimize_posdef_diag");
  if (auto trivial = invertible_constraint(p, Method::PosDefDiag)) return *trivial;

  // T = U^* T_k U with U^* = q; scaled = U^* X^-1.
  const RealVector inv_root = spec.lambda.array().rsqrt();
  const Matrix scaled = spec.q * inv_root.cast<Scalar>().asDiagonal();
  const Matrix constraint = p.a() * scaled;
  const Vector y = min_norm_ls(constraint, p.b(), p.tol());

  MinimizationResult out;
  out.method = Method::PosDefDiag;
  out.xhat = scaled * y;
  out.min_value = y.squaredNorm();
  out.feasibility_residual = (p.a() * out.xhat - p.b()).norm();
  note_conditioning(out, constraint, p.tol());
  check_min_value(out, p.t());
  return out;
}

MinimizationResult minimize_posdef(const QpProblem& p) {
  const SpectrumReport spec = classify_spectrum(p.t(), p.tol());
  require_positive_definite(spec, "minimize_posdef");
  require_feasible(p, "minimize_posdef");
  if (auto trivial = invertible_constraint(p, Method::PosDef)) return *trivial;

  const Matrix root = sqrt_psd(p.t(), p.tol());
  const Matrix root_inv = root.partialPivLu().inverse();
  const Matrix constraint = p.a() * root_inv;
  const Vector y = min_norm_ls(constraint, p.b(), p.tol());

  MinimizationResult out;
  out.method = Method::PosDef;
  out.xhat = root_inv * y;
  out.min_value = y.squaredNorm();
  out.feasibility_residual = (p.a() * out.xhat - p.b()).norm();
  note_conditioning(out, constraint, p.tol());
  check_min_value(out, p.t());
  return out;
}

std::optional<MinimizationResult> try_cor1_shortcut(const QpProblem& p) { return attempt_cor1(p).result; }

MinimizationResult minimize_psd_complement(const QpProblem& p) {
  const SpectrumReport spec = classify_spectrum(p.t(), p.tol());
  if (spec.kind == Definiteness::Indefinite) {
    throw Error(ErrorKind::NotPsd, "minimize_psd_complement: T has a negative eigenvalue", spec.lambda(0));
  }
  if (spec.kind == Definiteness::PositiveDefinite) {
    throw Error(ErrorKind::NotSingular, "minimize_psd_complement: T is invertible, use minimize_posdef",
                spec.lambda(0));
  }

  // Rank decisions on T follow the definiteness gate so the EP split agrees
  // with the spectral classification.
  TolConfig gate = p.tol();
  gate.rtol = std::max(p.tol().rank_rtol(p.n(), p.n()), p.tol().definiteness_tol(p.n()));

  const Matrix proj_t = projector_range(p.t(), gate);
  {
    const Matrix restricted = p.a() * proj_t;
    const Vector residual = restricted * min_norm_ls(restricted, p.b(), p.tol()) - p.b();
    if (residual.norm() > p.tol().feas_tol * rel_scale(p.b())) {
      throw Error(ErrorKind::InfeasibleOnComplement,
                  "minimize_psd_complement: no x in N(T)^perp satisfies A x = b", residual.norm());
    }
  }

  const EpDecomposition ep = ep_decompose(p.t(), gate);
  const Index r = ep.rank;
  Matrix root_pinv = Matrix::Zero(p.n(), p.n());  // R^+ = R^-1 (+) 0
  if (r > 0) {
    const Matrix root = sqrt_psd(ep.a1, p.tol());
    root_pinv.topLeftCorner(r, r) = root.partialPivLu().inverse();
  }
  const Matrix lift = ep.u1 * root_pinv;  // U1 R^+
  const Matrix constraint = p.a() * lift;
  const Vector y = min_norm_ls(constraint, p.b(), p.tol());

  MinimizationResult out;
  out.method = Method::PsdComplement;
  out.xhat = lift * y;
  out.min_value = y.squaredNorm();
  out.feasibility_residual = (p.a() * out.xhat - p.b()).norm();

  const double outside = ((identity(p.n()) - proj_t) * out.xhat).norm();
  if (outside > kMinValueAgreement * std::max(1.0, out.xhat.norm())) {
    out.diagnostics.push_back({"outside_complement", "minimizer has a component in N(T)", outside});
  }
  const Matrix coupling = projector_rangestar(p.a(), p.tol()) * proj_t;  // P_{A^*} P_T
  const RankDecision coupling_rank = numerical_rank(coupling, p.tol());
  if (coupling_rank.ill_conditioned) {
    out.diagnostics.push_back({"closed_range_conditioning",
                               "P_{A*} P_T is close to rank deficient; the restricted problem is ill-posed",
                               coupling_rank.sigma_kept_min});
  }
  note_conditioning(out, constraint, p.tol());
  check_min_value(out, p.t());
  return out;
}

MinimizationResult solve(const QpProblem& p, MethodChoice method) {
  switch (method) {
    case MethodChoice::PosDefDiag: return minimize_posdef_diag(p);
    case MethodChoice::PosDef: return minimize_posdef(p);
    case MethodChoice::PsdComplement: return minimize_psd_complement(p);
    case MethodChoice::Auto: break;
  }

  const SpectrumReport spec = classify_spectrum(p.t(), p.tol());
  switch (spec.kind) {
    case Definiteness::Indefinite:
      throw Error(ErrorKind::NotPositive, "solve: T has a negative eigenvalue", spec.lambda(0));
    case Definiteness::PsdSingular:
      return minimize_psd_complement(p);
    case Definiteness::PositiveDefinite:
      break;
  }

  ShortcutAttempt shortcut = attempt_cor1(p);
  MinimizationResult out = minimize_posdef(p);
  if (shortcut.result) {
    const double gap = (shortcut.result->xhat - out.xhat).norm();
    out.diagnostics.push_back(
        {"cor1_shortcut", "R(A) is T-invariant; A^+ b reproduces the minimizer", gap});
  } else {
    out.diagnostics.push_back({"cor1_shortcut_skipped", shortcut.reason, 0.0});
  }
  return out;
}

}  // namespace qfmin
