#pragma once

#include <array>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "gravtritter/hermitian_eigen.hpp"
#include "gravtritter/modes.hpp"
#include "gravtritter/tritter.hpp"

namespace gravtritter {

/// Photon numbers (n1, n2, n3) in the modes (A_1, A_2, A_perp).
using Occupation = std::array<int, 3>;

/// All occupations with n1 + n2 + n3 = total, in ascending lexicographic
/// order: (0,0,N), (0,1,N-1), ..., (N,0,0).
std::vector<Occupation> occupation_basis(int total);

/// Pure three-mode state at fixed total photon number.
class FockState {
 public:
  /// |n1 n2 n3>.
  static FockState basis_state(const Occupation& occupation);

  /// Amplitudes in occupation_basis(total) order. Throws DomainError when
  /// the count is wrong or sum |a|^2 deviates from 1 by more than 1e-10.
  static FockState from_amplitudes(int total, std::vector<Complex> amplitudes);

  int total() const noexcept { return total_; }
  const std::vector<Occupation>& occupations() const noexcept { return basis_; }
  std::span<const Complex> amplitudes() const noexcept { return amplitudes_; }

  /// Zero for occupations that do not sum to total().
  Complex amplitude(const Occupation& occupation) const;

  double norm_squared() const;

 private:
  FockState(int total, std::vector<Complex> amplitudes);

  int total_;
  std::vector<Occupation> basis_;
  std::vector<Complex> amplitudes_;

  friend FockState apply_mixer(const FockState&, const MixerMatrix&);
  friend FockState evolve_two_photon(const MixerMatrix&);
};

/// Permanent by Ryser's formula with Gray-code ordering. Square input.
Complex permanent(const Eigen::MatrixXcd& a);

/// Tolerance on |U U^dagger - 1| accepted by the evolution routines.
inline constexpr double kMixerUnitarityTolerance = 1e-10;

/// Passive linear-optics evolution, creation operators mapping as
/// A_i^dagger -> sum_j U_ij A_j^dagger. The transition amplitude from n to m
/// is perm(U[n; m]) / sqrt(prod n_i! prod m_j!), where U[n; m] repeats row i
/// n_i times and column j m_j times. Throws DomainError for a non-unitary U.
FockState apply_mixer(const FockState& state, const MixerMatrix& u);

/// Closed form of apply_mixer(|110>, U):
///   sqrt2 [U13 U23 |002> + U12 U22 |020> + U11 U21 |200>]
///   + (U13 U22 + U12 U23) |011> + (U11 U22 + U12 U21) |110>
///   + (U11 U23 + U13 U21) |101>.
FockState evolve_two_photon(const MixerMatrix& u);

/// Density matrix of modes (A_1, A_2) on the truncated basis |n m>,
/// n, m in 0..n_max, ordered lexicographically (index n * (n_max + 1) + m).
class TwoModeDensityMatrix {
 public:
  /// Throws DomainError when the matrix is not (n_max + 1)^2 square.
  TwoModeDensityMatrix(int n_max, Eigen::MatrixXcd matrix);

  int n_max() const noexcept { return n_max_; }
  Eigen::Index dim() const noexcept { return matrix_.rows(); }
  Eigen::Index index(int n, int m) const noexcept { return n * (n_max_ + 1) + m; }

  /// <n m| rho |p q>.
  Complex operator()(int n, int m, int p, int q) const { return matrix_(index(n, m), index(p, q)); }

  const Eigen::MatrixXcd& matrix() const noexcept { return matrix_; }

 private:
  int n_max_;
  Eigen::MatrixXcd matrix_;
};

struct DensityMatrixCheck {
  double trace_error;        // |tr rho - 1|
  double hermiticity_error;  // max |rho - rho^dagger|
  double min_eigenvalue;
};

DensityMatrixCheck check_density_matrix(const TwoModeDensityMatrix& rho);

/// rho(nm, pq) = sum_k a(n, m, k) conj(a(p, q, k)). Throws DomainError when
/// the state's photon number exceeds n_max.
TwoModeDensityMatrix trace_out_third(const FockState& state, int n_max = 2);

/// Transpose on the second mode: entry (n m, p q) moves to (n q, p m).
Eigen::MatrixXcd partial_transpose(const TwoModeDensityMatrix& rho);

/// Eigenvalues of the partial transpose below -this count as negative.
inline constexpr double kNegativeEigenvalueTolerance = 1e-11;

/// Sum of |lambda| over eigenvalues lambda < -1e-11 of the partial
/// transpose. ConvergenceError from the eigensolver propagates.
double negativity(const TwoModeDensityMatrix& rho, const JacobiOptions& options = {});

/// Sum of the two negative eigenvalues of the partial transpose that come
/// from the {|01>,|12>} and {|10>,|21>} blocks:
///   [sqrt(r0101^2 + 4|r0211|^2) - r0101] / 2 + [sqrt(r1010^2 + 4|r2011|^2) - r1010] / 2.
/// Needs n_max >= 2.
double negativity_lower_bound(const TwoModeDensityMatrix& rho);

/// Negativity of a pure state with an empty third mode, from its Schmidt
/// coefficients: ((sum_i s_i)^2 - 1) / 2. Throws DomainError when the
/// third mode carries more than 1e-12 of population.
double pure_state_negativity(const FockState& state);

/// Real part of U11 U22 + U12 U21; the zero-phase mixer makes it real.
double hom_signed_value(const MixerMatrix& u);

/// |U11 U22 + U12 U21|, the |11> amplitude after the two-photon input.
double hom_coefficient(const MixerMatrix& u);

struct HomRecord {
  double coefficient;
  double signed_value;
  double rho2020;  // 2 |U11 U21|^2
  double rho0202;  // 2 |U12 U22|^2
  bool hom;        // coefficient < tol and both populations > tol
};

HomRecord hom_record(const MixerMatrix& u, double tolerance = 1e-6);

}  // namespace gravtritter
