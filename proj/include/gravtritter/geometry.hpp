#pragma once

namespace gravtritter {

/// Static emitter (A) and receiver (B) outside a Schwarzschild mass.
/// All lengths in meters.
struct StaticSchwarzschildConfig {
  double r_s;  // Schwarzschild radius
  double r_A;  // emitter areal radius
  double r_B;  // receiver areal radius
};

/// Redshift parameter of a static emitter/receiver pair, with chi - 1 kept
/// separately so Earth-scale shifts (~1e-12) survive double rounding.
struct RedshiftFactor {
  double chi;
  double chi_minus_one;

  double chi_squared() const { return chi * chi; }
};

/// chi^2 = (emitted frequency, emitter's clock) / (received frequency,
/// receiver's clock) = [(1 - r_s/r_B) / (1 - r_s/r_A)]^(1/2).
///
/// chi > 1 when the receiver sits higher in the potential (redshift).
/// Throws DomainError unless r_s >= 0, r_A > r_s and r_B > r_s.
RedshiftFactor schwarzschild_redshift(const StaticSchwarzschildConfig& cfg);

double schwarzschild_chi(const StaticSchwarzschildConfig& cfg);

inline constexpr double kSpeedOfLight = 299'792'458.0;

/// First-order chi = 1 + g h / (2 c^2) for a receiver a height h above the
/// emitter. Throws DomainError when |g h| / c^2 >= 1e-3 or c <= 0.
RedshiftFactor weak_field_redshift(double g, double h, double c = kSpeedOfLight);

double weak_field_chi(double g, double h, double c = kSpeedOfLight);

}  // namespace gravtritter
