#pragma once

#include <vector>

#include "qfmin/dense_core.hpp"
#include "qfmin/minimizers.hpp"

// Finite sections of diagonal and shift operators on l2.
namespace qfmin::l2 {

struct DiagonalSpec {
  std::vector<double> period_values;  // repeating diagonal pattern
  Index n = 1;
};

struct TruncationSeries {
  std::vector<Index> sizes;
  std::vector<double> min_values;
  double limit = 0.0;
  std::vector<double> errors;  // |min_value - limit|
};

/// 7 pi^2 / 24, the infinite-dimensional minimum of the shift example.
double shift_example_limit();

Matrix diag_operator(const DiagonalSpec& spec);

/// n x n section of the left shift: ones on the first superdiagonal.
Matrix left_shift(Index n);

/// (1, 1/2, ..., 1/n).
Vector harmonic_b(Index n);

/// Dense instance of size n: T = diag(1, 2, 1, 2, ...), A = left_shift(n + 1),
/// b = harmonic_b(n) padded with a trailing zero.
QpProblem shift_problem(Index n);

/// Minimizer of the diagonal + shift problem using the structure directly:
/// R^-1 is diagonal and A R^-1 has at most one nonzero per row and column,
/// so its pseudoinverse is the transposed matrix with inverted entries.
/// O(n) instead of the dense O(n^3) route.
struct StructuredSolution {
  RealVector xhat;
  double min_value = 0.0;
};
StructuredSolution solve_diag_shift(const std::vector<double>& pattern, Index n);

/// For each size, the minimum of the shift example truncated at n. Sizes up
/// to `dense_limit` go through the dense minimize_posdef; larger ones through
/// solve_diag_shift. Throws InvalidArgument unless sizes are ascending and
/// positive.
TruncationSeries example1_convergence(const std::vector<Index>& sizes, Index dense_limit = 64);

}  // namespace qfmin::l2
