#include "gravtritter/fock.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "gravtritter/error.hpp"

namespace gravtritter {
namespace {

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

std::size_t basis_index(int total, const Occupation& occ) {
  // Position of (n1, n2, n3) in ascending lexicographic order.
  const int n1 = occ[0], n2 = occ[1];
  std::size_t before = 0;
  for (int a = 0; a < n1; ++a) before += static_cast<std::size_t>(total - a + 1);
  return before + static_cast<std::size_t>(n2);
}

bool valid_occupation(int total, const Occupation& occ) {
  return occ[0] >= 0 && occ[1] >= 0 && occ[2] >= 0 && occ[0] + occ[1] + occ[2] == total;
}

void require_unitary(const MixerMatrix& u, const char* where) {
  const double residual = unitarity_residual(u);
  if (!(residual <= kMixerUnitarityTolerance))
    throw DomainError(fmt::format("{}: mixer is not unitary (|UU^dagger - 1| = {:.3e})", where, residual));
}

// Row (or column) index list with index i repeated counts[i] times.
std::vector<int> repeated(const Occupation& counts) {
  std::vector<int> out;
  for (int i = 0; i < 3; ++i) out.insert(out.end(), static_cast<std::size_t>(counts[i]), i);
  return out;
}

}  // namespace

std::vector<Occupation> occupation_basis(int total) {
  if (total < 0) throw DomainError("occupation_basis: negative photon number");
  std::vector<Occupation> basis;
  for (int n1 = 0; n1 <= total; ++n1)
    for (int n2 = 0; n2 <= total - n1; ++n2) basis.push_back({n1, n2, total - n1 - n2});
  return basis;
}

FockState::FockState(int total, std::vector<Complex> amplitudes)
    : total_(total), basis_(occupation_basis(total)), amplitudes_(std::move(amplitudes)) {}

FockState FockState::basis_state(const Occupation& occupation) {
  if (occupation[0] < 0 || occupation[1] < 0 || occupation[2] < 0)
    throw DomainError("basis_state: negative occupation");
  const int total = occupation[0] + occupation[1] + occupation[2];
  std::vector<Complex> amplitudes(occupation_basis(total).size(), 0.0);
  amplitudes[basis_index(total, occupation)] = 1.0;
  return FockState(total, std::move(amplitudes));
}

FockState FockState::from_amplitudes(int total, std::vector<Complex> amplitudes) {
  const std::size_t expected = occupation_basis(total).size();
  if (amplitudes.size() != expected)
    throw DomainError(fmt::format("FockState: {} amplitudes for N={} (expected {})", amplitudes.size(),
                                  total, expected));
  FockState state(total, std::move(amplitudes));
  const double n2 = state.norm_squared();
  if (std::abs(n2 - 1.0) > 1e-10)
    throw DomainError(fmt::format("FockState: sum |a|^2 = {:.12f}, expected 1", n2));
  return state;
}

Complex FockState::amplitude(const Occupation& occupation) const {
  if (!valid_occupation(total_, occupation)) return 0.0;
  return amplitudes_[basis_index(total_, occupation)];
}

double FockState::norm_squared() const {
  double sum = 0.0;
  for (const Complex& a : amplitudes_) sum += std::norm(a);
  return sum;
}

Complex permanent(const Eigen::MatrixXcd& a) {
  if (a.rows() != a.cols()) throw DomainError("permanent: matrix must be square");
  const auto n = static_cast<int>(a.rows());
  if (n == 0) return 1.0;
  if (n > 30) throw DomainError("permanent: matrix too large");

  // Ryser: perm A = (-1)^n sum_S (-1)^|S| prod_i sum_{j in S} a_ij, walking
  // subsets S in Gray-code order so each step toggles one column.
  Eigen::VectorXcd row_sums = Eigen::VectorXcd::Zero(n);
  Complex total = 0.0;
  std::uint64_t gray = 0;
  const std::uint64_t subsets = std::uint64_t{1} << n;
  for (std::uint64_t k = 1; k < subsets; ++k) {
    const std::uint64_t next = k ^ (k >> 1);
    const std::uint64_t changed = next ^ gray;
    const int column = std::countr_zero(changed);
    if (next & changed)
      row_sums += a.col(column);
    else
      row_sums -= a.col(column);
    gray = next;
    const Complex product = row_sums.prod();
    const int size = std::popcount(gray);
    total += (size % 2 == 0) ? product : -product;
  }
  return (n % 2 == 0) ? total : -total;
}

FockState apply_mixer(const FockState& state, const MixerMatrix& u) {
  require_unitary(u, "apply_mixer");
  const int total = state.total();
  const std::vector<Occupation>& basis = state.occupations();
  std::vector<Complex> out(basis.size(), 0.0);

  for (std::size_t in = 0; in < basis.size(); ++in) {
    const Complex a = state.amplitudes()[in];
    if (a == 0.0) continue;
    const std::vector<int> rows = repeated(basis[in]);
    const double in_norm = factorial(basis[in][0]) * factorial(basis[in][1]) * factorial(basis[in][2]);
    for (std::size_t o = 0; o < basis.size(); ++o) {
      const std::vector<int> cols = repeated(basis[o]);
      Eigen::MatrixXcd sub(total, total);
      for (int i = 0; i < total; ++i)
        for (int j = 0; j < total; ++j) sub(i, j) = u(rows[i], cols[j]);
      const double out_norm = factorial(basis[o][0]) * factorial(basis[o][1]) * factorial(basis[o][2]);
      out[o] += a * permanent(sub) / std::sqrt(in_norm * out_norm);
    }
  }
  return FockState(total, std::move(out));
}

FockState evolve_two_photon(const MixerMatrix& u) {
  require_unitary(u, "evolve_two_photon");
  const double sqrt2 = std::numbers::sqrt2;
  // 0-based: U(0,0) is U11.
  std::vector<Complex> amp(occupation_basis(2).size(), 0.0);
  amp[basis_index(2, {0, 0, 2})] = sqrt2 * u(0, 2) * u(1, 2);
  amp[basis_index(2, {0, 2, 0})] = sqrt2 * u(0, 1) * u(1, 1);
  amp[basis_index(2, {2, 0, 0})] = sqrt2 * u(0, 0) * u(1, 0);
  amp[basis_index(2, {0, 1, 1})] = u(0, 2) * u(1, 1) + u(0, 1) * u(1, 2);
  amp[basis_index(2, {1, 1, 0})] = u(0, 0) * u(1, 1) + u(0, 1) * u(1, 0);
  amp[basis_index(2, {1, 0, 1})] = u(0, 0) * u(1, 2) + u(0, 2) * u(1, 0);
  return FockState(2, std::move(amp));
}

TwoModeDensityMatrix::TwoModeDensityMatrix(int n_max, Eigen::MatrixXcd matrix)
    : n_max_(n_max), matrix_(std::move(matrix)) {
  if (n_max < 0) throw DomainError("TwoModeDensityMatrix: negative cutoff");
  const Eigen::Index d = (n_max + 1) * (n_max + 1);
  if (matrix_.rows() != d || matrix_.cols() != d)
    throw DomainError(fmt::format("TwoModeDensityMatrix: expected {}x{} matrix for n_max={}, got {}x{}",
                                  d, d, n_max, matrix_.rows(), matrix_.cols()));
}

DensityMatrixCheck check_density_matrix(const TwoModeDensityMatrix& rho) {
  const Eigen::MatrixXcd& m = rho.matrix();
  DensityMatrixCheck check;
  check.trace_error = std::abs(m.trace() - Complex(1.0));
  check.hermiticity_error = (m - m.adjoint()).cwiseAbs().maxCoeff();
  check.min_eigenvalue = hermitian_eigenvalues(m).minCoeff();
  return check;
}

TwoModeDensityMatrix trace_out_third(const FockState& state, int n_max) {
  if (state.total() > n_max)
    throw DomainError(fmt::format("trace_out_third: {} photons do not fit cutoff n_max={}", state.total(), n_max));
  const int d = n_max + 1;
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(d * d, d * d);
  const auto& basis = state.occupations();
  const auto amps = state.amplitudes();
  for (std::size_t i = 0; i < basis.size(); ++i) {
    for (std::size_t j = 0; j < basis.size(); ++j) {
      if (basis[i][2] != basis[j][2]) continue;
      rho(basis[i][0] * d + basis[i][1], basis[j][0] * d + basis[j][1]) += amps[i] * std::conj(amps[j]);
    }
  }
  return TwoModeDensityMatrix(n_max, std::move(rho));
}

Eigen::MatrixXcd partial_transpose(const TwoModeDensityMatrix& rho) {
  const int d = rho.n_max() + 1;
  Eigen::MatrixXcd out(rho.dim(), rho.dim());
  for (int n = 0; n < d; ++n)
    for (int m = 0; m < d; ++m)
      for (int p = 0; p < d; ++p)
        for (int q = 0; q < d; ++q) out(n * d + q, p * d + m) = rho(n, m, p, q);
  return out;
}

double negativity(const TwoModeDensityMatrix& rho, const JacobiOptions& options) {
  const Eigen::VectorXd eigenvalues = hermitian_eigenvalues(partial_transpose(rho), options);
  double sum = 0.0;
  for (double lambda : eigenvalues)
    if (lambda < -kNegativeEigenvalueTolerance) sum += -lambda;
  return sum;
}

double negativity_lower_bound(const TwoModeDensityMatrix& rho) {
  if (rho.n_max() < 2) throw DomainError("negativity_lower_bound: needs n_max >= 2");
  const double r0101 = rho(0, 1, 0, 1).real();
  const double r1010 = rho(1, 0, 1, 0).real();
  const double c0211 = std::abs(rho(0, 2, 1, 1));
  const double c2011 = std::abs(rho(2, 0, 1, 1));
  return 0.5 * (std::sqrt(r0101 * r0101 + 4.0 * c0211 * c0211) - r0101) +
         0.5 * (std::sqrt(r1010 * r1010 + 4.0 * c2011 * c2011) - r1010);
}

double pure_state_negativity(const FockState& state) {
  const int total = state.total();
  Eigen::MatrixXcd psi = Eigen::MatrixXcd::Zero(total + 1, total + 1);
  double leaked = 0.0;
  for (std::size_t i = 0; i < state.occupations().size(); ++i) {
    const Occupation& occ = state.occupations()[i];
    if (occ[2] == 0)
      psi(occ[0], occ[1]) = state.amplitudes()[i];
    else
      leaked += std::norm(state.amplitudes()[i]);
  }
  if (leaked > 1e-12)
    throw DomainError(fmt::format("pure_state_negativity: third mode holds population {:.3e}", leaked));
  const Eigen::VectorXd schmidt = Eigen::JacobiSVD<Eigen::MatrixXcd>(psi).singularValues();
  const double sum = schmidt.sum();
  return 0.5 * (sum * sum - 1.0);
}

double hom_signed_value(const MixerMatrix& u) { return (u(0, 0) * u(1, 1) + u(0, 1) * u(1, 0)).real(); }

double hom_coefficient(const MixerMatrix& u) { return std::abs(u(0, 0) * u(1, 1) + u(0, 1) * u(1, 0)); }

HomRecord hom_record(const MixerMatrix& u, double tolerance) {
  HomRecord r;
  r.coefficient = hom_coefficient(u);
  r.signed_value = hom_signed_value(u);
  r.rho2020 = 2.0 * std::norm(u(0, 0) * u(1, 0));
  r.rho0202 = 2.0 * std::norm(u(0, 1) * u(1, 1));
  r.hom = r.coefficient < tolerance && r.rho2020 > tolerance && r.rho0202 > tolerance;
  return r;
}

}  // namespace gravtritter
