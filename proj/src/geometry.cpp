#include "gravtritter/geometry.hpp"

#include <cmath>

#include <fmt/format.h>

#include "gravtritter/error.hpp"

namespace gravtritter {

RedshiftFactor schwarzschild_redshift(const StaticSchwarzschildConfig& cfg) {
  const auto [r_s, r_A, r_B] = cfg;
  if (!std::isfinite(r_s) || !std::isfinite(r_A) || !std::isfinite(r_B))
    throw DomainError("schwarzschild: radii must be finite");
  if (r_s < 0.0) throw DomainError(fmt::format("schwarzschild: r_s must be >= 0, got {}", r_s));
  if (!(r_A > r_s) || !(r_B > r_s))
    throw DomainError(fmt::format(
        "schwarzschild: no static observer at r_A={} / r_B={} (r_s={})", r_A, r_B, r_s));

  // ln chi = [ln(1 - r_s/r_B) - ln(1 - r_s/r_A)] / 4
  const double log_chi = 0.25 * (std::log1p(-r_s / r_B) - std::log1p(-r_s / r_A));
  return {std::exp(log_chi), std::expm1(log_chi)};
}

double schwarzschild_chi(const StaticSchwarzschildConfig& cfg) {
  return schwarzschild_redshift(cfg).chi;
}

RedshiftFactor weak_field_redshift(double g, double h, double c) {
  if (!std::isfinite(g) || !std::isfinite(h) || !std::isfinite(c) || !(c > 0.0))
    throw DomainError("weak_field: g, h must be finite and c positive");
  const double potential = g * h / (c * c);
  if (!(std::abs(potential) < 1e-3))
    throw DomainError(fmt::format("weak_field: |g h / c^2| = {:.3e} outside the first-order regime", std::abs(potential)));
  const double shift = 0.5 * potential;
  return {1.0 + shift, shift};
}

double weak_field_chi(double g, double h, double c) { return weak_field_redshift(g, h, c).chi; }

}  // namespace gravtritter
