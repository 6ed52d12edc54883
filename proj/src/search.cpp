#include "gravtritter/search.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <ostream>

#include <fmt/format.h>

#include "gravtritter/error.hpp"
#include "gravtritter/fock.hpp"
#include "gravtritter/logging.hpp"

namespace gravtritter {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool mode_based(FamilyKind kind) { return kind != FamilyKind::angles; }

bool is_angle_axis(SweepAxis axis) {
  return axis == SweepAxis::theta || axis == SweepAxis::phi || axis == SweepAxis::psi;
}

std::string sanitize(std::string s) {
  for (char& c : s)
    if (c == ',' || c == '\n' || c == '\r' || c == '"') c = ';';
  return s;
}

SweepRow failed_row(double parameter, double chi, const std::string& reason) {
  SweepRow r;
  r.parameter = parameter;
  r.chi = chi;
  r.angles = {kNaN, kNaN, kNaN};
  r.status = "error:" + sanitize(reason);
  r.hom_signed = r.hom_coefficient = r.rho2020 = r.rho0202 = r.rho1111 = kNaN;
  r.negativity = r.neg_bound = kNaN;
  logger()->info("sweep point {} failed: {}", parameter, reason);
  return r;
}

std::vector<CombLobe> comb_lobes(const ModeFamily& f, int offset) {
  std::vector<CombLobe> lobes;
  for (int k = 0; k < f.peak_count; ++k) {
    const double sign = (f.alternate && k % 2 == 1) ? -1.0 : 1.0;
    lobes.push_back({sign, f.omega0 + (2 * k + offset) * f.separation, f.sigma});
  }
  return lobes;
}

ModeFamily with_parameter(ModeFamily family, SweepAxis axis, double value) {
  switch (axis) {
    case SweepAxis::separation: family.separation = value; break;
    case SweepAxis::sigma: family.sigma = value; break;
    case SweepAxis::theta: family.angles.theta = value; break;
    case SweepAxis::phi: family.angles.phi = value; break;
    case SweepAxis::psi: family.angles.psi = value; break;
    case SweepAxis::chi: break;
  }
  return family;
}

// Evaluates pipeline rows; the mode pair is built once when it does not
// depend on the swept parameter.
class PointEvaluator {
 public:
  explicit PointEvaluator(const SweepSpec& spec) : spec_(spec) {
    if (spec.axis == SweepAxis::chi && mode_based(spec.family.kind)) {
      try {
        modes_ = family_modes(spec.family, spec.quadrature);
      } catch (const Error& e) {
        mode_error_ = e.what();
      }
    }
  }

  SweepRow row(double parameter) const {
    const double chi = spec_.axis == SweepAxis::chi ? parameter : spec_.chi;
    TritterAngles angles;
    MixerMatrix u;
    try {
      u = mixer(parameter, angles);
    } catch (const Error& e) {
      SweepRow r = failed_row(parameter, chi, e.what());
      return r;
    }
    return pipeline_row(parameter, chi, angles, u, spec_.thresholds);
  }

  // Signed HOM amplitude only (no reduced state), used by bisection.
  double signed_value(double parameter) const {
    TritterAngles unused;
    return hom_signed_value(mixer(parameter, unused));
  }

 private:
  MixerMatrix mixer(double parameter, TritterAngles& angles) const {
    const ModeFamily family = with_parameter(spec_.family, spec_.axis, parameter);
    if (!mode_based(family.kind)) {
      angles = family.angles;
      return build_tritter(angles);
    }
    const double chi = spec_.axis == SweepAxis::chi ? parameter : spec_.chi;
    if (!mode_error_.empty()) throw Error(mode_error_);
    const auto pair = modes_ ? *modes_ : family_modes(family, spec_.quadrature);
    const TritterResult t = tritter_from_modes(pair.first, pair.second, chi, spec_.quadrature);
    angles = t.angles;
    return t.matrix;
  }

  const SweepSpec& spec_;
  std::optional<std::pair<ModeProfile, ModeProfile>> modes_;
  std::string mode_error_;
};

std::vector<SweepRow> evaluate_grid(const SweepSpec& spec, const PointEvaluator& evaluator) {
  const std::vector<double> grid = sweep_grid(spec);
  std::vector<SweepRow> rows(grid.size());
  const unsigned workers = std::clamp<unsigned>(spec.threads, 1u, static_cast<unsigned>(grid.size()));
  if (workers == 1) {
    for (std::size_t i = 0; i < grid.size(); ++i) rows[i] = evaluator.row(grid[i]);
    return rows;
  }
  // Strided partition; each worker owns its slots of `rows`.
  std::vector<std::future<void>> jobs;
  for (unsigned w = 0; w < workers; ++w) {
    jobs.push_back(std::async(std::launch::async, [&, w] {
      for (std::size_t i = w; i < grid.size(); i += workers) rows[i] = evaluator.row(grid[i]);
    }));
  }
  for (auto& job : jobs) job.get();
  return rows;
}

std::string fmt_double(double x) {
  if (std::isnan(x)) return "nan";
  return fmt::format("{:.12e}", x);
}

}  // namespace

const char* to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::chi: return "chi";
    case SweepAxis::separation: return "separation";
    case SweepAxis::sigma: return "sigma";
    case SweepAxis::theta: return "theta";
    case SweepAxis::phi: return "phi";
    case SweepAxis::psi: return "psi";
  }
  return "?";
}

std::optional<SweepAxis> parse_axis(const std::string& name) {
  for (SweepAxis a : {SweepAxis::chi, SweepAxis::separation, SweepAxis::sigma, SweepAxis::theta,
                      SweepAxis::phi, SweepAxis::psi})
    if (name == to_string(a)) return a;
  return std::nullopt;
}

const char* to_string(FamilyKind kind) {
  switch (kind) {
    case FamilyKind::gaussian_pair: return "gaussian_pair";
    case FamilyKind::comb_pair: return "comb_pair";
    case FamilyKind::explicit_pair: return "explicit_pair";
    case FamilyKind::angles: return "angles";
  }
  return "?";
}

std::optional<FamilyKind> parse_family_kind(const std::string& name) {
  for (FamilyKind k : {FamilyKind::gaussian_pair, FamilyKind::comb_pair, FamilyKind::explicit_pair,
                       FamilyKind::angles})
    if (name == to_string(k)) return k;
  return std::nullopt;
}

void validate(const SweepSpec& spec) {
  if (spec.grid < 2) throw DomainError(fmt::format("sweep: grid size must be >= 2, got {}", spec.grid));
  if (!std::isfinite(spec.lo) || !std::isfinite(spec.hi) || !(spec.hi >= spec.lo))
    throw DomainError(fmt::format("sweep: invalid range [{}, {}]", spec.lo, spec.hi));
  if (!(spec.thresholds.population_floor > 0.0))
    throw DomainError("sweep: population floor must be positive");
  if (!(spec.thresholds.hom_tolerance > 0.0)) throw DomainError("sweep: hom tolerance must be positive");
  if (spec.thresholds.max_bisection_iterations < 1)
    throw DomainError("sweep: bisection iteration budget must be positive");

  const FamilyKind kind = spec.family.kind;
  if (kind == FamilyKind::explicit_pair && !spec.family.profiles)
    throw DomainError("sweep: explicit_pair family needs two profiles");
  if (spec.axis == SweepAxis::chi) {
    if (!mode_based(kind)) throw DomainError("sweep: the angles family does not depend on chi");
    if (!(spec.lo > 0.0)) throw DomainError(fmt::format("sweep: chi range must be positive, got lo={}", spec.lo));
  } else if (is_angle_axis(spec.axis)) {
    if (mode_based(kind))
      throw DomainError(fmt::format("sweep: axis {} needs the angles family", to_string(spec.axis)));
  } else {
    if (kind != FamilyKind::gaussian_pair && kind != FamilyKind::comb_pair)
      throw DomainError(fmt::format("sweep: axis {} needs a gaussian_pair or comb_pair family",
                                    to_string(spec.axis)));
    if (!(spec.lo > 0.0))
      throw DomainError(fmt::format("sweep: {} range must be positive", to_string(spec.axis)));
  }
  if (spec.axis != SweepAxis::chi && mode_based(kind) && !(spec.chi > 0.0))
    throw DomainError("sweep: fixed chi must be positive");
}

std::pair<ModeProfile, ModeProfile> family_modes(const ModeFamily& family, const QuadratureOptions& options) {
  switch (family.kind) {
    case FamilyKind::gaussian_pair:
      return orthonormalize_pair(ModeProfile::gaussian(family.omega0, family.sigma),
                                 ModeProfile::gaussian(family.omega0 + family.separation, family.sigma),
                                 options);
    case FamilyKind::comb_pair: {
      if (family.peak_count < 1) throw DomainError("comb_pair: peak_count must be >= 1");
      const std::vector<CombLobe> first = comb_lobes(family, 0);
      const std::vector<CombLobe> second = comb_lobes(family, 1);
      return orthonormalize_pair(make_comb(first, options), make_comb(second, options), options);
    }
    case FamilyKind::explicit_pair:
      if (!family.profiles) throw DomainError("explicit_pair: profiles missing");
      return orthonormalize_pair(family.profiles->first, family.profiles->second, options);
    case FamilyKind::angles:
      break;
  }
  throw DomainError("family_modes: the angles family has no modes");
}

std::vector<double> sweep_grid(const SweepSpec& spec) {
  std::vector<double> grid(static_cast<std::size_t>(spec.grid));
  const auto last = static_cast<double>(spec.grid - 1);
  for (int i = 0; i < spec.grid; ++i)
    grid[static_cast<std::size_t>(i)] = spec.lo + (spec.hi - spec.lo) * (static_cast<double>(i) / last);
  grid.back() = spec.hi;
  return grid;
}

SweepRow pipeline_row(double parameter, double chi, const TritterAngles& angles, const MixerMatrix& u,
                      const SweepThresholds& thresholds) {
  SweepRow r;
  r.parameter = parameter;
  r.chi = chi;
  r.angles = angles;
  try {
    const HomRecord hom = hom_record(u, thresholds.hom_tolerance);
    const TwoModeDensityMatrix rho = trace_out_third(evolve_two_photon(u), 2);
    r.hom_signed = hom.signed_value;
    r.hom_coefficient = hom.coefficient;
    r.rho2020 = rho(2, 0, 2, 0).real();
    r.rho0202 = rho(0, 2, 0, 2).real();
    r.rho1111 = rho(1, 1, 1, 1).real();
    r.negativity = negativity(rho);
    r.neg_bound = negativity_lower_bound(rho);
  } catch (const Error& e) {
    r = failed_row(parameter, chi, e.what());
    r.angles = angles;
  }
  return r;
}

SweepRow evaluate_point(const SweepSpec& spec, double parameter) {
  validate(spec);
  return PointEvaluator(spec).row(parameter);
}

std::vector<SweepRow> sweep_chi(const SweepSpec& spec) {
  if (spec.axis != SweepAxis::chi) throw DomainError("sweep_chi: spec axis must be chi");
  return sweep_axis(spec);
}

std::vector<SweepRow> sweep_axis(const SweepSpec& spec) {
  validate(spec);
  const PointEvaluator evaluator(spec);
  return evaluate_grid(spec, evaluator);
}

std::vector<HomRoot> find_hom(const SweepSpec& spec) {
  validate(spec);
  const PointEvaluator evaluator(spec);
  const std::vector<SweepRow> rows = evaluate_grid(spec, evaluator);
  const SweepThresholds& th = spec.thresholds;

  std::vector<HomRoot> roots;
  const auto accept = [&](HomRoot root) {
    const bool usable = root.row.ok() || root.row.status == "unconverged";
    if (usable && root.row.rho2020 > th.population_floor && root.row.rho0202 > th.population_floor)
      roots.push_back(std::move(root));
  };

  for (std::size_t i = 0; i < rows.size(); ++i) {
    const SweepRow& left = rows[i];
    if (!left.ok()) continue;
    if (left.hom_signed == 0.0) {
      accept({left, 0, true});
      continue;
    }
    if (i + 1 >= rows.size()) break;
    const SweepRow& right = rows[i + 1];
    if (!right.ok() || right.hom_signed == 0.0) continue;
    if ((left.hom_signed < 0.0) == (right.hom_signed < 0.0)) continue;

    double a = left.parameter, b = right.parameter;
    double fa = left.hom_signed;
    double mid = 0.5 * (a + b);
    HomRoot root;
    try {
      for (root.iterations = 1; root.iterations <= th.max_bisection_iterations; ++root.iterations) {
        mid = 0.5 * (a + b);
        const double fm = evaluator.signed_value(mid);
        if (std::abs(fm) < th.hom_tolerance) {
          root.converged = true;
          break;
        }
        if (mid <= a || mid >= b) break;  // interval exhausted
        if ((fm < 0.0) == (fa < 0.0)) {
          a = mid;
          fa = fm;
        } else {
          b = mid;
        }
      }
      root.iterations = std::min(root.iterations, th.max_bisection_iterations);
    } catch (const Error& e) {
      logger()->info("bisection in [{}, {}] failed: {}", a, b, e.what());
    }
    root.row = evaluator.row(mid);
    if (!root.converged && root.row.ok()) root.row.status = "unconverged";
    if (!root.converged) logger()->warn("find_hom: bracket [{}, {}] did not converge", left.parameter, right.parameter);
    accept(std::move(root));
  }
  return roots;
}

std::string format_sweep_row(const SweepRow& r) {
  return fmt::format("{},{},{},{},{},{},{},{},{},{},{}", fmt_double(r.chi), fmt_double(r.angles.theta),
                     fmt_double(r.angles.phi), fmt_double(r.angles.psi), fmt_double(r.hom_coefficient),
                     fmt_double(r.rho2020), fmt_double(r.rho0202), fmt_double(r.rho1111),
                     fmt_double(r.negativity), fmt_double(r.neg_bound), r.status);
}

void write_sweep_rows(std::ostream& out, const std::vector<SweepRow>& rows) {
  for (const SweepRow& r : rows) out << format_sweep_row(r) << '\n';
}

void write_root_rows(std::ostream& out, SweepAxis axis, const std::vector<HomRoot>& roots) {
  for (const HomRoot& root : roots) {
    const SweepRow& r = root.row;
    out << to_string(axis) << ',' << fmt_double(r.parameter) << ',' << fmt_double(r.chi) << ','
        << fmt_double(r.angles.theta) << ',' << fmt_double(r.angles.phi) << ',' << fmt_double(r.angles.psi)
        << ',' << fmt_double(r.hom_coefficient) << ',' << fmt_double(r.rho2020) << ','
        << fmt_double(r.rho0202) << ',' << fmt_double(r.rho1111) << ',' << fmt_double(r.negativity) << ','
        << fmt_double(r.neg_bound) << ',' << root.iterations << ',' << (root.converged ? "true" : "false")
        << ',' << r.status << '\n';
  }
}

}  // namespace gravtritter
