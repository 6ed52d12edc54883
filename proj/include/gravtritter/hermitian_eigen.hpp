#pragma once

#include <Eigen/Dense>

namespace gravtritter {

struct JacobiOptions {
  /// Stop once the off-diagonal Frobenius norm falls below this.
  double off_diagonal_tolerance = 1e-13;
  int max_sweeps = 100;
};

/// Eigenvalues of a Hermitian matrix, ascending, by cyclic complex Jacobi
/// rotations. Only the Hermitian part (A + A^dagger) / 2 is used. Throws
/// ConvergenceError (carrying the remaining off-diagonal norm) when
/// max_sweeps is exhausted.
Eigen::VectorXd hermitian_eigenvalues(const Eigen::MatrixXcd& a, const JacobiOptions& options = {});

}  // namespace gravtritter
