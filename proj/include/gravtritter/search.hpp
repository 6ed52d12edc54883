#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gravtritter/modes.hpp"
#include "gravtritter/tritter.hpp"

namespace gravtritter {

enum class FamilyKind {
  gaussian_pair,  // g(omega0, sigma) and g(omega0 + separation, sigma)
  comb_pair,      // interleaved combs, see ModeFamily
  explicit_pair,  // two user-supplied profiles
  angles,         // mixer angles given directly, no modes involved
};

/// Mode pair generator for sweeps. Pairs are orthonormalized (anchored on
/// the first mode) before the mixer is built.
///
/// comb_pair: the first mode has lobes at omega0 + 2k * separation and the
/// second at omega0 + (2k + 1) * separation, k = 0..peak_count-1, all of
/// width sigma; with `alternate` the k-th lobe of each carries sign (-1)^k.
struct ModeFamily {
  FamilyKind kind = FamilyKind::gaussian_pair;
  double omega0 = 100.0;
  double separation = 4.0;
  double sigma = 1.0;
  int peak_count = 3;
  bool alternate = true;
  std::optional<std::pair<ModeProfile, ModeProfile>> profiles;
  TritterAngles angles;
};

enum class SweepAxis { chi, separation, sigma, theta, phi, psi };

const char* to_string(SweepAxis axis);
std::optional<SweepAxis> parse_axis(const std::string& name);
const char* to_string(FamilyKind kind);
std::optional<FamilyKind> parse_family_kind(const std::string& name);

struct SweepThresholds {
  double hom_tolerance = 1e-8;
  double population_floor = 1e-6;
  int max_bisection_iterations = 200;
};

struct SweepSpec {
  ModeFamily family;
  SweepAxis axis = SweepAxis::chi;
  double lo = 1.0;
  double hi = 1.1;
  int grid = 11;
  double chi = 1.0;  // held fixed when axis != chi
  SweepThresholds thresholds;
  unsigned threads = 1;
  QuadratureOptions quadrature;
};

/// Throws DomainError for an invalid spec (chi range not positive,
/// grid < 2, population floor <= 0, axis not applicable to the family).
void validate(const SweepSpec& spec);

struct SweepRow {
  double parameter = 0.0;
  double chi = 0.0;
  TritterAngles angles;
  double hom_signed = 0.0;  // U11 U22 + U12 U21
  double hom_coefficient = 0.0;
  double rho2020 = 0.0;
  double rho0202 = 0.0;
  double rho1111 = 0.0;
  double negativity = 0.0;
  double neg_bound = 0.0;
  std::string status = "ok";  // "ok" or "error:<reason>"

  bool ok() const { return status == "ok"; }
};

/// Downstream half of the pipeline for a given mixer: two-photon state,
/// reduced state, negativity and its block lower bound, HOM populations.
/// Quantities are NaN and status carries the reason when a step throws.
SweepRow pipeline_row(double parameter, double chi, const TritterAngles& angles, const MixerMatrix& u,
                      const SweepThresholds& thresholds);

/// One pipeline evaluation (modes -> mixer -> two-photon state -> reduced
/// state) at a value of the sweep axis. Errors are caught and recorded in
/// the row's status.
SweepRow evaluate_point(const SweepSpec& spec, double parameter);

/// Grid values lo + (hi - lo) i / (grid - 1), endpoints exact.
std::vector<double> sweep_grid(const SweepSpec& spec);

/// Rows for every grid chi, ascending. Rows may be computed concurrently
/// (spec.threads) but are returned in grid order with identical values.
/// Requires axis == chi and a mode-based family.
std::vector<SweepRow> sweep_chi(const SweepSpec& spec);

/// Evaluates the grid along spec.axis (any axis) in grid order.
std::vector<SweepRow> sweep_axis(const SweepSpec& spec);

struct HomRoot {
  SweepRow row;
  int iterations = 0;
  bool converged = false;
};

/// Brackets sign changes of U11 U22 + U12 U21 on the grid and bisects each
/// to |value| < hom_tolerance within max_bisection_iterations. Roots whose
/// rho2020 or rho0202 do not exceed the population floor are dropped.
/// No bracket gives an empty list.
std::vector<HomRoot> find_hom(const SweepSpec& spec);

inline constexpr const char* kSweepCsvHeader =
    "chi,theta,phi,psi,hom_coeff,rho2020,rho0202,rho1111,negativity,neg_bound,status";
inline constexpr const char* kRootCsvHeader =
    "axis,value,chi,theta,phi,psi,hom_coeff,rho2020,rho0202,rho1111,negativity,neg_bound,iterations,"
    "converged,status";

/// One CSV line (no trailing newline) in kSweepCsvHeader column order.
std::string format_sweep_row(const SweepRow& row);

/// Fixed-format CSV rows (no header).
void write_sweep_rows(std::ostream& out, const std::vector<SweepRow>& rows);
void write_root_rows(std::ostream& out, SweepAxis axis, const std::vector<HomRoot>& roots);

/// Builds the orthonormal mode pair of a mode-based family with the axis
/// parameter applied.
std::pair<ModeProfile, ModeProfile> family_modes(const ModeFamily& family,
                                                 const QuadratureOptions& options = {});

}  // namespace gravtritter
