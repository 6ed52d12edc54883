#include "gravtritter/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

#include <fmt/format.h>

#include "gravtritter/error.hpp"

namespace gravtritter {
namespace {

// Kronrod 15-point abscissae (non-negative half) and weights; the odd
// entries (1, 3, 5) are the 7-point Gauss nodes.
constexpr std::array<double, 8> kXk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a;
  double b;
  std::complex<double> value;
  double error;
};

struct ByError {
  bool operator()(const Segment& x, const Segment& y) const { return x.error < y.error; }
};

Segment gauss_kronrod(const ComplexIntegrand& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);

  const std::complex<double> fc = f(center);
  std::complex<double> kronrod = fc * kWk[7];
  std::complex<double> gauss = fc * kWg[3];
  for (std::size_t j = 0; j < 7; ++j) {
    const double dx = half * kXk[j];
    const std::complex<double> pair = f(center - dx) + f(center + dx);
    kronrod += kWk[j] * pair;
    if (j % 2 == 1) gauss += kWg[j / 2] * pair;
  }
  kronrod *= half;
  gauss *= half;
  return {a, b, kronrod, std::abs(kronrod - gauss)};
}

}  // namespace

QuadratureResult integrate(const ComplexIntegrand& f, std::span<const double> breakpoints,
                           const QuadratureOptions& options) {
  if (breakpoints.size() < 2) throw DomainError("integrate: need at least two breakpoints");

  std::priority_queue<Segment, std::vector<Segment>, ByError> queue;
  QuadratureResult result;
  double total_error = 0.0;
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    const double a = breakpoints[i];
    const double b = breakpoints[i + 1];
    if (!(b >= a)) throw DomainError("integrate: breakpoints must be sorted");
    if (b == a) continue;
    Segment s = gauss_kronrod(f, a, b);
    result.evaluations += 15;
    total_error += s.error;
    queue.push(s);
  }

  while (!queue.empty() && total_error > options.abs_tolerance) {
    if (result.evaluations + 30 > options.max_evaluations) {
      throw QuadratureError(
          fmt::format("integrate: evaluation budget {} exhausted, achieved error {:.3e}",
                      options.max_evaluations, total_error),
          total_error);
    }
    Segment worst = queue.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) {
      // Segment cannot be split further in double precision.
      throw QuadratureError(
          fmt::format("integrate: segment [{}, {}] underflowed, achieved error {:.3e}", worst.a,
                      worst.b, total_error),
          total_error);
    }
    queue.pop();
    Segment left = gauss_kronrod(f, worst.a, mid);
    Segment right = gauss_kronrod(f, mid, worst.b);
    result.evaluations += 30;
    total_error += left.error + right.error - worst.error;
    queue.push(left);
    queue.push(right);
  }

  // Sum in a fixed order so the result does not depend on heap layout.
  std::vector<Segment> segments;
  segments.reserve(queue.size());
  while (!queue.empty()) {
    segments.push_back(queue.top());
    queue.pop();
  }
  std::sort(segments.begin(), segments.end(),
            [](const Segment& x, const Segment& y) { return x.a < y.a; });
  double error = 0.0;
  for (const Segment& s : segments) {
    result.value += s.value;
    error += s.error;
  }
  result.error_estimate = error;
  return result;
}

}  // namespace gravtritter
