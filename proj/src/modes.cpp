#include "gravtritter/modes.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include <fmt/format.h>

#include "gravtritter/error.hpp"
#include "gravtritter/logging.hpp"

namespace gravtritter {
namespace {

// Lobe offsets (in widths) fed to the quadrature as breakpoints.
constexpr std::array<double, 9> kLobeOffsets = {-kTailWidths, -9.0, -6.0, -3.0, 0.0,
                                                3.0,          6.0,  9.0,  kTailWidths};

// Resampling density for the tabulated Gram-Schmidt fallback.
constexpr double kSamplesPerWidth = 32.0;

constexpr double kUnitNormSlack = 1e-12;

Complex unit_gaussian(double omega, double center, double width) {
  const double x = (omega - center) / width;
  return std::pow(2.0 * std::numbers::pi * width * width, -0.25) * std::exp(-0.25 * x * x);
}

void check_lobe(double center, double width) {
  if (!std::isfinite(center) || !(center > 0.0))
    throw DomainError(fmt::format("lobe center must be positive, got {}", center));
  if (!std::isfinite(width) || !(width > 0.0))
    throw DomainError(fmt::format("lobe width must be positive, got {}", width));
}

struct EvaluateVisitor {
  double omega;

  Complex operator()(const GaussianShape& g) const {
    return unit_gaussian(omega, g.omega0, g.sigma) * std::polar(1.0, g.phase);
  }

  Complex operator()(const CombShape& c) const {
    Complex sum = 0.0;
    for (const CombLobe& lobe : c.lobes) sum += lobe.weight * unit_gaussian(omega, lobe.center, lobe.width);
    return sum;
  }

  Complex operator()(const TabulatedShape& t) const {
    if (omega < t.omega.front() || omega > t.omega.back()) return 0.0;
    const auto hi = std::upper_bound(t.omega.begin(), t.omega.end(), omega);
    if (hi == t.omega.end()) return t.value.back();
    const auto i = static_cast<std::size_t>(hi - t.omega.begin());
    const double w0 = t.omega[i - 1];
    const double w1 = t.omega[i];
    const double s = (omega - w0) / (w1 - w0);
    return (1.0 - s) * t.value[i - 1] + s * t.value[i];
  }
};

// Merge lobes that share a center and width so repeated Gram-Schmidt
// passes do not grow the comb.
std::vector<CombLobe> merge_lobes(std::vector<CombLobe> lobes) {
  std::vector<CombLobe> merged;
  for (const CombLobe& lobe : lobes) {
    auto same = std::find_if(merged.begin(), merged.end(), [&](const CombLobe& m) {
      return m.center == lobe.center && m.width == lobe.width;
    });
    if (same == merged.end())
      merged.push_back(lobe);
    else
      same->weight += lobe.weight;
  }
  return merged;
}

std::vector<double> resampling_grid(const ModeProfile& p) {
  if (const auto* t = std::get_if<TabulatedShape>(&p.shape())) return t->omega;
  std::vector<double> grid;
  for (const CombLobe& lobe : p.lobes()) {
    const double lo = std::max(0.0, lobe.center - kTailWidths * lobe.width);
    const double hi = lobe.center + kTailWidths * lobe.width;
    const double step = lobe.width / kSamplesPerWidth;
    const auto n = static_cast<std::size_t>(std::ceil((hi - lo) / step));
    for (std::size_t i = 0; i <= n; ++i) grid.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n));
  }
  return grid;
}

ModeProfile unit_scaled(const ModeProfile& f, double n) {
  if (std::abs(n - 1.0) <= kUnitNormSlack) return f.normalized() ? f : f.scaled(1.0, true);
  return f.scaled(1.0 / n, true);
}

}  // namespace

ModeProfile ModeProfile::gaussian(double omega0, double sigma, double phase) {
  check_lobe(omega0, sigma);
  if (!std::isfinite(phase)) throw DomainError("gaussian phase must be finite");
  if (omega0 < 5.0 * sigma) {
    logger()->warn("gaussian(omega0={}, sigma={}): peak closer than 5 sigma to w = 0, "
                   "truncated norm deviates from 1 by more than 1e-7",
                   omega0, sigma);
  }
  return ModeProfile(GaussianShape{omega0, sigma, phase}, true);
}

ModeProfile ModeProfile::comb(std::vector<CombLobe> lobes, bool normalized) {
  if (lobes.empty()) throw DomainError("comb needs at least one lobe");
  for (const CombLobe& lobe : lobes) {
    check_lobe(lobe.center, lobe.width);
    if (!std::isfinite(lobe.weight.real()) || !std::isfinite(lobe.weight.imag()))
      throw DomainError("comb weights must be finite");
  }
  return ModeProfile(CombShape{std::move(lobes)}, normalized);
}

ModeProfile ModeProfile::tabulated(std::vector<double> omega, std::vector<Complex> value,
                                   bool normalized) {
  if (omega.size() != value.size())
    throw DomainError(fmt::format("tabulated profile: {} grid points but {} values", omega.size(),
                                  value.size()));
  if (omega.size() < 2) throw DomainError("tabulated profile needs at least two grid points");
  for (std::size_t i = 0; i < omega.size(); ++i) {
    if (!std::isfinite(omega[i])) throw DomainError("tabulated grid must be finite");
    if (i > 0 && !(omega[i] > omega[i - 1]))
      throw DomainError("tabulated grid must be strictly increasing");
  }
  return ModeProfile(TabulatedShape{std::move(omega), std::move(value)}, normalized);
}

Complex ModeProfile::operator()(double omega) const {
  if (!(omega > 0.0)) return 0.0;
  return std::visit(EvaluateVisitor{omega}, shape_);
}

std::pair<double, double> ModeProfile::support() const {
  if (const auto* t = std::get_if<TabulatedShape>(&shape_))
    return {std::max(0.0, t->omega.front()), std::max(0.0, t->omega.back())};
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (const CombLobe& lobe : lobes()) {
    lo = std::min(lo, lobe.center - kTailWidths * lobe.width);
    hi = std::max(hi, lobe.center + kTailWidths * lobe.width);
  }
  return {std::max(0.0, lo), hi};
}

std::vector<double> ModeProfile::breakpoints() const {
  if (const auto* t = std::get_if<TabulatedShape>(&shape_)) return t->omega;
  std::vector<double> points;
  for (const CombLobe& lobe : lobes())
    for (double k : kLobeOffsets) points.push_back(lobe.center + k * lobe.width);
  return points;
}

std::vector<CombLobe> ModeProfile::lobes() const {
  if (const auto* g = std::get_if<GaussianShape>(&shape_))
    return {CombLobe{std::polar(1.0, g->phase), g->omega0, g->sigma}};
  if (const auto* c = std::get_if<CombShape>(&shape_)) return c->lobes;
  throw DomainError("tabulated profile has no lobe decomposition");
}

ModeProfile ModeProfile::scaled(Complex factor, bool normalized) const {
  if (const auto* t = std::get_if<TabulatedShape>(&shape_)) {
    std::vector<Complex> value = t->value;
    for (Complex& v : value) v *= factor;
    return ModeProfile(TabulatedShape{t->omega, std::move(value)}, normalized);
  }
  std::vector<CombLobe> out = lobes();
  for (CombLobe& lobe : out) lobe.weight *= factor;
  return ModeProfile(CombShape{std::move(out)}, normalized);
}

Complex evaluate(const ModeProfile& profile, double omega) { return profile(omega); }

Complex inner_product(const ModeProfile& f, const ModeProfile& g, const QuadratureOptions& options) {
  const auto [f_lo, f_hi] = f.support();
  const auto [g_lo, g_hi] = g.support();
  const double lo = std::max(f_lo, g_lo);
  const double hi = std::min(f_hi, g_hi);
  if (!(hi > lo)) return 0.0;

  std::vector<double> points{lo, hi};
  for (const ModeProfile* p : {&f, &g})
    for (double x : p->breakpoints())
      if (x > lo && x < hi) points.push_back(x);
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());

  const auto integrand = [&](double omega) { return std::conj(f(omega)) * g(omega); };
  return integrate(integrand, points, options).value;
}

double norm(const ModeProfile& f, const QuadratureOptions& options) {
  return std::sqrt(std::max(0.0, inner_product(f, f, options).real()));
}

ModeProfile redshift_transform(const ModeProfile& f, double chi) {
  if (!std::isfinite(chi) || !(chi > 0.0))
    throw DomainError(fmt::format("redshift_transform: chi must be positive, got {}", chi));
  const double chi2 = chi * chi;

  if (const auto* g = std::get_if<GaussianShape>(&f.shape()))
    return ModeProfile::gaussian(g->omega0 / chi2, g->sigma / chi2, g->phase);

  if (const auto* c = std::get_if<CombShape>(&f.shape())) {
    // chi * g(chi^2 w; c, s) is exactly the unit Gaussian g(w; c/chi^2, s/chi^2).
    std::vector<CombLobe> lobes = c->lobes;
    for (CombLobe& lobe : lobes) {
      lobe.center /= chi2;
      lobe.width /= chi2;
    }
    return ModeProfile::comb(std::move(lobes), f.normalized());
  }

  const auto& t = std::get<TabulatedShape>(f.shape());
  std::vector<double> omega = t.omega;
  std::vector<Complex> value = t.value;
  for (double& w : omega) w /= chi2;
  for (Complex& v : value) v *= chi;
  return ModeProfile::tabulated(std::move(omega), std::move(value), f.normalized());
}

std::pair<ModeProfile, ModeProfile> orthonormalize_pair(const ModeProfile& f1, const ModeProfile& f2,
                                                        const QuadratureOptions& options) {
  const double n1 = norm(f1, options);
  const double n2 = norm(f2, options);
  if (!(n1 > 0.0) || !(n2 > 0.0)) throw DegeneracyError("orthonormalize_pair: zero-norm profile");
  const ModeProfile u1 = unit_scaled(f1, n1);
  const ModeProfile v2 = unit_scaled(f2, n2);

  const Complex c = inner_product(u1, v2, options);
  if (std::abs(c) >= 1.0 - 1e-12)
    throw DegeneracyError(
        fmt::format("orthonormalize_pair: profiles are parallel (|<F1,F2>| = {:.15f})", std::abs(c)));
  if (c == 0.0) return {u1, v2};

  if (!f1.is_tabulated() && !f2.is_tabulated()) {
    std::vector<CombLobe> residual = v2.lobes();
    for (CombLobe lobe : u1.lobes()) {
      lobe.weight *= -c;
      residual.push_back(lobe);
    }
    ModeProfile r = ModeProfile::comb(merge_lobes(std::move(residual)), false);
    // Second pass removes the cancellation error of the first.
    const Complex d = inner_product(u1, r, options);
    std::vector<CombLobe> corrected = r.lobes();
    for (CombLobe lobe : u1.lobes()) {
      lobe.weight *= -d;
      corrected.push_back(lobe);
    }
    r = ModeProfile::comb(merge_lobes(std::move(corrected)), false);
    return {u1, r.scaled(1.0 / norm(r, options), true)};
  }

  std::vector<double> grid = resampling_grid(u1);
  const std::vector<double> grid2 = resampling_grid(v2);
  grid.insert(grid.end(), grid2.begin(), grid2.end());
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  std::vector<Complex> anchor(grid.size());
  std::vector<Complex> value(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    anchor[i] = u1(grid[i]);
    value[i] = v2(grid[i]) - c * anchor[i];
  }
  ModeProfile r = ModeProfile::tabulated(grid, value, false);
  for (int pass = 0; pass < 4; ++pass) {
    const Complex d = inner_product(u1, r, options);
    if (std::abs(d) < 1e-13) break;
    for (std::size_t i = 0; i < grid.size(); ++i) value[i] -= d * anchor[i];
    r = ModeProfile::tabulated(grid, value, false);
  }
  const double nr = norm(r, options);
  if (!(nr > 1e-6)) throw DegeneracyError("orthonormalize_pair: residual vanished on resampling grid");
  ModeProfile out2 = r.scaled(1.0 / nr, true);
  const double leak = std::abs(inner_product(u1, out2, options));
  if (leak > 1e-8)
    throw DegeneracyError(fmt::format("orthonormalize_pair: residual overlap {:.3e} after resampling", leak));
  return {u1, out2};
}

ModeProfile make_comb(std::span<const CombLobe> peaks, const QuadratureOptions& options) {
  if (peaks.empty()) throw DomainError("make_comb: empty peak list");
  const ModeProfile raw = ModeProfile::comb({peaks.begin(), peaks.end()}, false);
  const double n = norm(raw, options);
  if (!(n > 0.0)) throw DomainError("make_comb: lobes cancel to a zero-norm profile");
  return raw.scaled(1.0 / n, true);
}

}  // namespace gravtritter
