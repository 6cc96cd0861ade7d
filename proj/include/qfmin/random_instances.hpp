#pragma once

#include <random>

#include "qfmin/dense_core.hpp"
#include "qfmin/minimizers.hpp"

namespace qfmin::random {

/// Gaussian entries; imaginary parts are zero unless `complex` is set.
Matrix gaussian(std::mt19937_64& rng, Index rows, Index cols, bool complex = false);
Vector gaussian_vector(std::mt19937_64& rng, Index n, bool complex = false);

/// Random unitary from the QR factorization of a Gaussian matrix.
Matrix unitary(std::mt19937_64& rng, Index n, bool complex = false);

/// rows x cols matrix of exact rank `rank` (product of Gaussian factors).
Matrix low_rank(std::mt19937_64& rng, Index rows, Index cols, Index rank, bool complex = false);

/// T = M^* M + 0.1 I, A Gaussian m x n, b = A x0.
QpProblem posdef_instance(std::mt19937_64& rng, Index n, Index m, bool complex = false);

/// T = M_r^* M_r with rank n - deficiency, b = A P_T x0.
QpProblem psd_instance(std::mt19937_64& rng, Index n, Index m, Index deficiency, bool complex = false);

}  // namespace qfmin::random
