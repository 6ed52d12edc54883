#include "gravtritter/tritter.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "gravtritter/error.hpp"
#include "gravtritter/logging.hpp"

namespace gravtritter {
namespace {

constexpr double kBesselSlack = 1e-9;
constexpr double kDegenerateCosPhi = 1e-12;

double clamp_unit(double x, const char* what) {
  if (x < -kAngleClampSlack || x > 1.0 + kAngleClampSlack)
    throw InconsistencyError(fmt::format("angles_from_overlaps: {} = {:.12g} outside [0, 1]", what, x));
  return std::clamp(x, 0.0, 1.0);
}

}  // namespace

TritterAngles angles_from_overlaps(double o11, double o22, double o21) {
  if (!std::isfinite(o11) || !std::isfinite(o22) || !std::isfinite(o21))
    throw InconsistencyError("angles_from_overlaps: overlaps must be finite");
  if (o11 * o11 + o21 * o21 > 1.0 + kBesselSlack || o22 * o22 + o21 * o21 > 1.0 + kBesselSlack)
    throw InconsistencyError(fmt::format(
        "angles_from_overlaps: (o11, o22, o21) = ({}, {}, {}) violates the Bessel bound", o11, o22, o21));

  TritterAngles angles;
  angles.phi = std::asin(clamp_unit(o21, "o21"));
  const double cos_phi = std::cos(angles.phi);
  if (cos_phi < kDegenerateCosPhi) {
    if (o11 > 1e-9 || o22 > 1e-9)
      throw InconsistencyError("angles_from_overlaps: phi = pi/2 but o11 or o22 is nonzero");
    return angles;
  }
  angles.theta = std::acos(clamp_unit(o11 / cos_phi, "o11 / cos(phi)"));
  angles.psi = std::acos(clamp_unit(o22 / cos_phi, "o22 / cos(phi)"));
  return angles;
}

MixerMatrix build_tritter(const TritterAngles& angles) {
  const double ct = std::cos(angles.theta), st = std::sin(angles.theta);
  const double cf = std::cos(angles.phi), sf = std::sin(angles.phi);
  const double cp = std::cos(angles.psi), sp = std::sin(angles.psi);

  MixerMatrix u;
  u << ct * cf, -ct * sf * cp - st * sp, -ct * sf * sp + st * cp,
       sf,       cf * cp,                 cf * sp,
      -st * cf,  st * sf * cp - ct * sp,  st * sf * sp + ct * cp;
  return u;
}

double unitarity_residual(const MixerMatrix& u) {
  return (u * u.adjoint() - MixerMatrix::Identity()).cwiseAbs().maxCoeff();
}

TritterResult tritter_from_modes(const ModeProfile& f1, const ModeProfile& f2, double chi,
                                 const QuadratureOptions& options) {
  const double input_overlap = std::abs(inner_product(f1, f2, options));
  if (input_overlap > kInputOrthogonalityTolerance)
    throw DomainError(fmt::format(
        "tritter_from_modes: input modes not orthogonal (|<F1,F2>| = {:.3e}); orthonormalize first",
        input_overlap));

  const ModeProfile f1_shifted = redshift_transform(f1, chi);
  const ModeProfile f2_shifted = redshift_transform(f2, chi);

  TritterResult result;
  OverlapRecord& o = result.overlaps;
  o.o11 = inner_product(f1_shifted, f1, options);
  o.o22 = inner_product(f2_shifted, f2, options);
  o.o21 = inner_product(f2_shifted, f1, options);
  o.o12 = inner_product(f1_shifted, f2, options);
  o.input_overlap = input_overlap;

  result.angles = angles_from_overlaps(std::abs(o.o11), std::abs(o.o22), std::abs(o.o21));
  result.matrix = build_tritter(result.angles);
  o.fourth_overlap_residual = std::abs(result.matrix(0, 1)) - std::abs(o.o12);
  logger()->debug("tritter chi={} angles=({}, {}, {}) fourth-overlap residual {:.3e}", chi,
                  result.angles.theta, result.angles.phi, result.angles.psi,
                  o.fourth_overlap_residual);
  return result;
}

double nogo_normalization(double chi) {
  if (!std::isfinite(chi) || !(chi > 0.0))
    throw DomainError(fmt::format("nogo_normalization: chi must be positive, got {}", chi));
  return 1.0 / (chi * chi);
}

bool sharp_shift_is_nonunitary(double chi) { return std::abs(nogo_normalization(chi) - 1.0) > 1e-12; }

}  // namespace gravtritter
