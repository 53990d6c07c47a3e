#pragma once

#include <vector>

#include "grace/matrix.hpp"

namespace grace {

/// Full spectrum of a symmetric matrix. Eigenvalues ascending; eigenvectors
/// are the matching orthonormal columns of `eigenvectors`.
struct EigenResult {
  std::vector<double> eigenvalues;
  Matrix eigenvectors;
};

// Cyclic Jacobi on (m + m^T)/2. `tol` bounds the final off-diagonal Frobenius
// norm relative to max(1, ||m||_F); the sweep budget is 100. Throws
// std::invalid_argument for non-square or visibly asymmetric input and
// std::runtime_error (with the achieved residual) if the budget is exhausted.
EigenResult sym_eigen(const Matrix& m, double tol = 1e-12);

// Largest singular value via an eigensolve of the smaller Gram matrix.
double spectral_norm(const Matrix& m);

}  // namespace grace
