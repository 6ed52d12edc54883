#pragma once

#include <Eigen/Dense>

#include "gravtritter/modes.hpp"

namespace gravtritter {

/// Angles of the zero-phase three-mode mixer, each in [0, pi/2].
struct TritterAngles {
  double theta = 0.0;
  double phi = 0.0;
  double psi = 0.0;
};

/// 3x3 unitary acting on (A_1, A_2, A_perp). Row a lists how input mode a
/// spreads over the output modes.
using MixerMatrix = Eigen::Matrix3cd;

/// Slack for float noise when inverting cos/sin of the overlap moduli.
inline constexpr double kAngleClampSlack = 1e-9;

/// Inverts
///   cos(theta) cos(phi) = o11,  cos(phi) cos(psi) = o22,  sin(phi) = o21.
///
/// Arguments of asin/acos within kAngleClampSlack outside [0, 1] are
/// clamped; larger excursions throw InconsistencyError, as does a violated
/// Bessel bound (o11^2 + o21^2 or o22^2 + o21^2 above 1 + 1e-9). When
/// cos(phi) < 1e-12 and both o11, o22 are at most 1e-9, theta and psi are
/// set to 0.
TritterAngles angles_from_overlaps(double o11, double o22, double o21);

/// The zero-phase tritter: product of three real beam-splitter rotations.
MixerMatrix build_tritter(const TritterAngles& angles);

/// max_ab |(U U^dagger - 1)_ab|.
double unitarity_residual(const MixerMatrix& u);

struct OverlapRecord {
  Complex o11;  // <F1', F1>
  Complex o22;  // <F2', F2>
  Complex o21;  // <F2', F1>
  Complex o12;  // <F1', F2>, not used to build the mixer
  double input_overlap = 0.0;  // |<F1, F2>|

  /// |U12| - |<F1', F2>|: how far the zero-phase mixer is from the fourth
  /// physical overlap.
  double fourth_overlap_residual = 0.0;
};

struct TritterResult {
  MixerMatrix matrix;
  TritterAngles angles;
  OverlapRecord overlaps;
};

/// Tolerance on |<F1, F2>| accepted by tritter_from_modes.
inline constexpr double kInputOrthogonalityTolerance = 1e-6;

/// Redshifts an orthonormal pair by chi and builds the mixer from the
/// overlap moduli. Throws DomainError when |<F1, F2>| exceeds
/// kInputOrthogonalityTolerance; quadrature and angle errors propagate.
TritterResult tritter_from_modes(const ModeProfile& f1, const ModeProfile& f2, double chi,
                                 const QuadratureOptions& options = {});

/// Value of U^dagger [A, A^dagger] U under the naive sharp-frequency
/// rescaling w -> chi^2 w: 1 / chi^2, which equals 1 only at chi = 1.
double nogo_normalization(double chi);

/// True when the sharp-frequency shift at chi cannot be unitary.
bool sharp_shift_is_nonunitary(double chi);

}  // namespace gravtritter
