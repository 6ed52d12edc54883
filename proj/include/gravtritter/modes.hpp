#pragma once

#include <complex>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include "gravtritter/quadrature.hpp"

namespace gravtritter {

using Complex = std::complex<double>;

/// Normalized Gaussian amplitude profile
///   F(w) = (2 pi sigma^2)^(-1/4) exp(-(w - omega0)^2 / (4 sigma^2)) exp(i phase),
/// so that |F|^2 is a density with standard deviation sigma.
struct GaussianShape {
  double omega0;
  double sigma;
  double phase = 0.0;
};

/// One term of a comb: weight times a unit-norm Gaussian amplitude.
struct CombLobe {
  Complex weight;
  double center;
  double width;
};

struct CombShape {
  std::vector<CombLobe> lobes;
};

/// Samples on a strictly increasing grid, linearly interpolated. Zero
/// outside [omega.front(), omega.back()].
struct TabulatedShape {
  std::vector<double> omega;
  std::vector<Complex> value;
};

/// A photon frequency profile F(w) supported on w > 0.
///
/// Values are immutable; every transform returns a new profile.
class ModeProfile {
 public:
  using Shape = std::variant<GaussianShape, CombShape, TabulatedShape>;

  /// Validates parameters (peaks and widths > 0, grids strictly increasing)
  /// and throws DomainError otherwise. Gaussians with omega0 < 5 sigma log
  /// a warning: their (0, inf) norm deviates from 1 by more than 1e-7.
  static ModeProfile gaussian(double omega0, double sigma, double phase = 0.0);

  /// Comb with the weights taken as given; see make_comb for the
  /// normalizing constructor.
  static ModeProfile comb(std::vector<CombLobe> lobes, bool normalized);
  static ModeProfile tabulated(std::vector<double> omega, std::vector<Complex> value,
                               bool normalized);

  const Shape& shape() const noexcept { return shape_; }
  bool normalized() const noexcept { return normalized_; }

  bool is_gaussian() const noexcept { return std::holds_alternative<GaussianShape>(shape_); }
  bool is_comb() const noexcept { return std::holds_alternative<CombShape>(shape_); }
  bool is_tabulated() const noexcept { return std::holds_alternative<TabulatedShape>(shape_); }

  /// F(w); zero for w <= 0 and, for tabulated profiles, outside the grid.
  Complex operator()(double omega) const;

  /// Interval outside of which |F| < 1e-16 of its peak, clipped to w >= 0.
  std::pair<double, double> support() const;

  /// Points the quadrature must not straddle blindly: lobe centers and
  /// offsets for parametric shapes, grid nodes for tabulated ones.
  std::vector<double> breakpoints() const;

  /// Parametric shapes as a list of Gaussian lobes (a Gaussian becomes a
  /// single lobe). Throws DomainError for tabulated profiles.
  std::vector<CombLobe> lobes() const;

  /// c * F, keeping the shape family where possible (a Gaussian becomes a
  /// one-lobe comb).
  ModeProfile scaled(Complex factor, bool normalized) const;

 private:
  ModeProfile(Shape shape, bool normalized) : shape_(std::move(shape)), normalized_(normalized) {}

  Shape shape_;
  bool normalized_;
};

/// Number of widths from a lobe center at which |F| falls to 1e-16 of the
/// peak: sqrt(4 ln 1e16).
inline constexpr double kTailWidths = 12.14;

/// F(w), with the support convention of ModeProfile.
Complex evaluate(const ModeProfile& profile, double omega);

/// <F, G> = int_0^inf conj(F(w)) G(w) dw, computed by adaptive quadrature
/// over the intersection of both supports.
Complex inner_product(const ModeProfile& f, const ModeProfile& g,
                      const QuadratureOptions& options = {});

/// sqrt(<F, F>).
double norm(const ModeProfile& f, const QuadratureOptions& options = {});

/// F'(w) = chi F(chi^2 w). Parametric shapes map in closed form
/// (omega0 -> omega0 / chi^2, sigma -> sigma / chi^2); tabulated grids are
/// rescaled. No renormalization is applied. Throws DomainError for chi <= 0.
ModeProfile redshift_transform(const ModeProfile& f, double chi);

/// Gram-Schmidt anchored on the first argument:
/// (F1 / |F1|, (F2 - <F1,F2> F1) / |...|).
///
/// Gaussian and comb inputs stay in closed form (the residual is a comb);
/// anything involving a tabulated profile is resampled on a merged grid and
/// re-orthogonalized until the residual overlap is below 1e-13. Throws
/// DegeneracyError when |<F1,F2>| >= 1 - 1e-12 after normalization.
std::pair<ModeProfile, ModeProfile> orthonormalize_pair(const ModeProfile& f1,
                                                        const ModeProfile& f2,
                                                        const QuadratureOptions& options = {});

/// Normalized superposition of Gaussian lobes. Throws DomainError on an
/// empty list, non-positive centers or widths, or a zero-norm sum.
ModeProfile make_comb(std::span<const CombLobe> peaks, const QuadratureOptions& options = {});

}  // namespace gravtritter
