#include "qfmin/l2_models.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace qfmin::l2 {

double shift_example_limit() { return 7.0 * std::numbers::pi * std::numbers::pi / 24.0; }

Matrix diag_operator(const DiagonalSpec& spec) {
  if (spec.n < 1 || spec.period_values.empty()) {
    throw Error(ErrorKind::InvalidArgument, "diag_operator: need n >= 1 and a nonempty pattern");
  }
  const auto period = spec.period_values.size();
  Matrix out = Matrix::Zero(spec.n, spec.n);
  for (Index i = 0; i < spec.n; ++i) {
    const double v = spec.period_values[static_cast<std::size_t>(i) % period];
    if (!std::isfinite(v)) {
      throw Error(ErrorKind::NonFinite, "diag_operator: pattern has a non-finite value");
    }
    out(i, i) = v;
  }
  return out;
}

Matrix left_shift(Index n) {
  if (n < 2) throw Error(ErrorKind::InvalidArgument, "left_shift: need n >= 2");
  Matrix out = Matrix::Zero(n, n);
  for (Index i = 0; i + 1 < n; ++i) out(i, i + 1) = 1.0;
  return out;
}

Vector harmonic_b(Index n) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "harmonic_b: need n >= 1");
  Vector out(n);
  for (Index i = 0; i < n; ++i) out(i) = 1.0 / static_cast<double>(i + 1);
  return out;
}

QpProblem shift_problem(Index n) {
  Matrix t = diag_operator({{1.0, 2.0}, n + 1});
  Matrix a = left_shift(n + 1);
  Vector b = Vector::Zero(n + 1);
  b.head(n) = harmonic_b(n);
  return QpProblem(std::move(t), std::move(a), std::move(b));
}

StructuredSolution solve_diag_shift(const std::vector<double>& pattern, Index n) {
  if (n < 1 || pattern.empty()) {
    throw Error(ErrorKind::InvalidArgument, "solve_diag_shift: need n >= 1 and a nonempty pattern");
  }
  const Index dim = n + 1;
  RealVector inv_root(dim);
  for (Index j = 0; j < dim; ++j) {
    const double k = pattern[static_cast<std::size_t>(j) % pattern.size()];
    if (!(k > 0.0)) {
      throw Error(ErrorKind::NotPositiveDefinite, "solve_diag_shift: diagonal entry is not positive", k);
    }
    inv_root(j) = 1.0 / std::sqrt(k);
  }

  // (A R^-1)(i, i+1) = inv_root(i+1); its pseudoinverse sends b_i to
  // y_{i+1} = b_i / inv_root(i+1). Row n of A is zero and b_n = 0.
  StructuredSolution out;
  out.xhat = RealVector::Zero(dim);
  for (Index i = 0; i < n; ++i) {
    const double b = 1.0 / static_cast<double>(i + 1);
    const double y = b / inv_root(i + 1);
    out.xhat(i + 1) = inv_root(i + 1) * y;
    out.min_value += y * y;
  }
  return out;
}

TruncationSeries example1_convergence(const std::vector<Index>& sizes, Index dense_limit) {
  if (sizes.empty()) throw Error(ErrorKind::InvalidArgument, "example1_convergence: no sizes given");
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (sizes[i] < 1 || (i > 0 && sizes[i] <= sizes[i - 1])) {
      throw Error(ErrorKind::InvalidArgument, "example1_convergence: sizes must be positive and ascending");
    }
  }

  TruncationSeries out;
  out.limit = shift_example_limit();
  for (const Index n : sizes) {
    double value = 0.0;
    if (n <= dense_limit) {
      value = minimize_posdef(shift_problem(n)).min_value;
    } else {
      value = solve_diag_shift({1.0, 2.0}, n).min_value;
    }
    out.sizes.push_back(n);
    out.min_values.push_back(value);
    out.errors.push_back(std::abs(value - out.limit));
  }
  return out;
}

}  // namespace qfmin::l2
