#include "gravtritter/hermitian_eigen.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include <fmt/format.h>

#include "gravtritter/error.hpp"

namespace gravtritter {
namespace {

double off_diagonal_norm(const Eigen::MatrixXcd& a) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      if (i != j) sum += std::norm(a(i, j));
  return std::sqrt(sum);
}

// Zeroes a(p, q) with the unitary G = D R, where D rotates the phase of
// column q so a(p, q) becomes real and R is the real Jacobi rotation.
void rotate(Eigen::MatrixXcd& a, Eigen::Index p, Eigen::Index q) {
  const std::complex<double> apq = a(p, q);
  const double r = std::abs(apq);
  if (r == 0.0) return;
  const std::complex<double> phase = apq / r;  // e^{i alpha}

  const double app = a(p, p).real();
  const double aqq = a(q, q).real();
  const double tau = (aqq - app) / (2.0 * r);
  const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
  const double c = 1.0 / std::sqrt(1.0 + t * t);
  const double s = t * c;
  const std::complex<double> conj_phase = std::conj(phase);

  // A <- A G
  for (Eigen::Index k = 0; k < a.rows(); ++k) {
    const std::complex<double> akp = a(k, p);
    const std::complex<double> akq = a(k, q);
    a(k, p) = c * akp - s * conj_phase * akq;
    a(k, q) = s * akp + c * conj_phase * akq;
  }
  // A <- G^dagger A
  for (Eigen::Index k = 0; k < a.cols(); ++k) {
    const std::complex<double> apk = a(p, k);
    const std::complex<double> aqk = a(q, k);
    a(p, k) = c * apk - s * phase * aqk;
    a(q, k) = s * apk + c * phase * aqk;
  }
  a(p, q) = 0.0;
  a(q, p) = 0.0;
  a(p, p) = a(p, p).real();
  a(q, q) = a(q, q).real();
}

}  // namespace

Eigen::VectorXd hermitian_eigenvalues(const Eigen::MatrixXcd& input, const JacobiOptions& options) {
  if (input.rows() != input.cols()) throw DomainError("hermitian_eigenvalues: matrix must be square");
  Eigen::MatrixXcd a = 0.5 * (input + input.adjoint());
  const Eigen::Index n = a.rows();

  double off = off_diagonal_norm(a);
  int sweep = 0;
  while (off >= options.off_diagonal_tolerance) {
    if (sweep++ >= options.max_sweeps)
      throw ConvergenceError(
          fmt::format("hermitian_eigenvalues: no convergence after {} sweeps, off-diagonal norm {:.3e}",
                      options.max_sweeps, off),
          off);
    for (Eigen::Index p = 0; p + 1 < n; ++p)
      for (Eigen::Index q = p + 1; q < n; ++q) rotate(a, p, q);
    off = off_diagonal_norm(a);
  }

  Eigen::VectorXd values = a.diagonal().real();
  std::sort(values.data(), values.data() + values.size());
  return values;
}

}  // namespace gravtritter
