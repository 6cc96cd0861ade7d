#pragma once

#include <cstdint>

#include "qfmin/dense_core.hpp"

// Brute-force verifiers. They deliberately avoid the pseudoinverse formulas of
// the minimizers: the PD case goes through the Lagrange (KKT) block system and
// the semidefinite case through an explicit parametrization of R(T). Linear
// solves use Eigen's complete orthogonal decomposition, not qfmin::pinv.
namespace qfmin::oracle {

struct OracleResult {
  Vector x;
  double min_value = 0.0;
  double kkt_residual = 0.0;  // relative residual of the block system
};

/// Solves [2T, A^*; A, 0] [x; lambda] = [0; b].
OracleResult kkt_solve(const Matrix& t, const Matrix& a, const Vector& b);

/// x = B z with B an orthonormal basis of R(T) and z the KKT solution of the
/// reduced problem min z^* (B^* T B) z s.t. (A B) z = b.
OracleResult reduced_solve(const Matrix& t, const Matrix& a, const Vector& b);

enum class Perturbations { Constraint, ConstraintAndRange };

/// Samples feasible points around `candidate` and reports whether none
/// improves on f(candidate) by more than 1e-10. `Constraint` moves along
/// N(A); `ConstraintAndRange` along N(A) cap R(T).
bool grid_refute(const Matrix& t, const Matrix& a, const Vector& b, const Vector& candidate, int n_samples,
                 Perturbations mode = Perturbations::Constraint, std::uint64_t seed = 7);

/// Orthonormal basis of the directions d with A d = 0 (and d in R(T) for
/// `ConstraintAndRange`).
Matrix feasible_directions(const Matrix& t, const Matrix& a, Perturbations mode);

/// f(x + d) - f(x) evaluated without forming either value.
double objective_increase(const Matrix& t, const Vector& x, const Vector& d);

}  // namespace qfmin::oracle
