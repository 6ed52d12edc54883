#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>

namespace gravtritter {

struct QuadratureOptions {
  double abs_tolerance = 1e-10;
  std::size_t max_evaluations = 1'000'000;
};

struct QuadratureResult {
  std::complex<double> value;
  double error_estimate = 0.0;
  std::size_t evaluations = 0;
};

using ComplexIntegrand = std::function<std::complex<double>(double)>;

/**
 * Globally adaptive 7/15-point Gauss-Kronrod integration of a complex
 * integrand.
 *
 * `breakpoints` must be sorted ascending and contain at least two points;
 * the first and last are the integration limits. Every interval between
 * consecutive breakpoints starts as its own segment, so narrow features
 * (Gaussian lobes, kinks of an interpolant) should be fenced by
 * breakpoints. The segment with the largest error estimate is bisected
 * until the summed estimate drops below `abs_tolerance`.
 *
 * Throws QuadratureError carrying the achieved error estimate when the
 * evaluation budget runs out first.
 */
QuadratureResult integrate(const ComplexIntegrand& f, std::span<const double> breakpoints,
                           const QuadratureOptions& options = {});

}  // namespace gravtritter
