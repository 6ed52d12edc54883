// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "../unit/oracles.hpp"
#include "gravtritter/cli.hpp"
#include "gravtritter/fock.hpp"
#include "gravtritter/geometry.hpp"
#include "gravtritter/modes.hpp"
#include "gravtritter/search.hpp"
#include "gravtritter/tritter.hpp"

using namespace gravtritter;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) pass = false;
    if (!detail.empty()) detail += "; ";
    detail += what + (ok ? "" : " [violated]");
  }
};

struct Criterion {
  int id;
  const char* name;
  double budget_seconds;
  std::function<Outcome()> body;
};

std::string sci(double x) { return fmt::format("{:.2e}", x); }

double offdiag_max(const MixerMatrix& u) {
  double m = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (i != j) m = std::max(m, std::abs(u(i, j)));
  return m;
}

std::pair<ModeProfile, ModeProfile> gaussian_pair(double w1, double w2, double sigma) {
  return orthonormalize_pair(ModeProfile::gaussian(w1, sigma), ModeProfile::gaussian(w2, sigma));
}

std::pair<ModeProfile, ModeProfile> comb_pair(double omega0, double separation, double sigma, int peaks) {
  ModeFamily f;
  f.kind = FamilyKind::comb_pair;
  f.omega0 = omega0;
  f.separation = separation;
  f.sigma = sigma;
  f.peak_count = peaks;
  return family_modes(f);
}

std::vector<oracle::Lobe> lobes_of(const ModeProfile& f) {
  std::vector<oracle::Lobe> out;
  for (const CombLobe& l : f.lobes()) out.push_back({l.weight, l.center, l.width});
  return out;
}

Outcome identity_limit() {
  Outcome o;
  double off = 0.0, fidelity = 1.0, neg = 0.0;
  for (const auto& [f1, f2] : {gaussian_pair(100, 104, 1), comb_pair(100, 4, 1, 3)}) {
    const TritterResult t = tritter_from_modes(f1, f2, 1.0);
    const FockState out = evolve_two_photon(t.matrix);
    off = std::max(off, offdiag_max(t.matrix));
    fidelity = std::min(fidelity, std::norm(out.amplitude({1, 1, 0})));
    neg = std::max(neg, negativity(trace_out_third(out)));
  }
  o.require(off < 1e-8, "max off-diagonal " + sci(off));
  o.require(fidelity > 1.0 - 1e-10, fmt::format("fidelity with |110> 1 - {}", sci(1.0 - fidelity)));
  o.require(neg < 1e-10, "negativity " + sci(neg));
  return o;
}

Outcome unitarity_suite() {
  Outcome o;
  std::mt19937_64 rng(2024);
  double residual = 0.0, det = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const MixerMatrix u = build_tritter(oracle::random_angles(rng));
    residual = std::max(residual, (u * u.adjoint() - MixerMatrix::Identity()).cwiseAbs().maxCoeff());
    det = std::max(det, std::abs(u.determinant() - Complex(1.0)));
  }
  o.require(residual < 1e-12, "max |UU^dagger - 1| " + sci(residual));
  o.require(det < 1e-12, "max |det U - 1| " + sci(det));
  return o;
}

Outcome closed_form_vs_permanent() {
  Outcome o;
  std::mt19937_64 rng(99);
  const FockState in = FockState::basis_state({1, 1, 0});
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const MixerMatrix u = build_tritter(oracle::random_angles(rng));
    const FockState a = evolve_two_photon(u);
    const FockState b = apply_mixer(in, u);
    for (std::size_t k = 0; k < a.amplitudes().size(); ++k)
      worst = std::max(worst, std::abs(a.amplitudes()[k] - b.amplitudes()[k]));
  }
  o.require(worst < 1e-12, "max amplitude difference " + sci(worst));
  return o;
}

Outcome hom_reproduction() {
  Outcome o;
  const MixerMatrix u = build_tritter({0.0, std::numbers::pi / 4, 0.0});
  const FockState out = evolve_two_photon(u);
  const TwoModeDensityMatrix rho = trace_out_third(out);
  Eigen::MatrixXcd expected = Eigen::MatrixXcd::Zero(9, 9);
  const auto i20 = rho.index(2, 0), i02 = rho.index(0, 2);
  expected(i20, i20) = 0.5;
  expected(i02, i02) = 0.5;
  expected(i20, i02) = -0.5;
  expected(i02, i20) = -0.5;
  const double rho_err = (rho.matrix() - expected).cwiseAbs().maxCoeff();

  // Bell-like oracle: Schmidt coefficients 1/sqrt2, 1/sqrt2 give ((sum s)^2 - 1) / 2
  const double bell = 0.5 * (std::pow(2.0 * std::numbers::sqrt2 / 2.0, 2) - 1.0);
  const double pure = pure_state_negativity(out);

  o.require(hom_coefficient(u) < 1e-14, "hom coefficient " + sci(hom_coefficient(u)));
  o.require(std::abs(out.amplitude({1, 1, 0})) < 1e-14, "|110> amplitude " + sci(std::abs(out.amplitude({1, 1, 0}))));
  o.require(rho_err < 1e-14, "reduced state error " + sci(rho_err));
  o.require(std::abs(pure - bell) < 1e-10, fmt::format("pure-state negativity {:.12f}", pure));
  return o;
}

Outcome bound_dominance() {
  Outcome o;
  std::mt19937_64 rng(7);
  double worst_gap = 1.0;
  int strict = 0;
  for (int i = 0; i < 1000; ++i) {
    const TwoModeDensityMatrix rho = trace_out_third(evolve_two_photon(build_tritter(oracle::random_angles(rng))));
    const double n = negativity(rho), b = negativity_lower_bound(rho);
    worst_gap = std::min(worst_gap, n - b);
    const bool coherent = std::abs(rho(0, 2, 1, 1)) > 1e-3 || std::abs(rho(2, 0, 1, 1)) > 1e-3;
    if (coherent && n > b + 1e-10) ++strict;
  }
  o.require(worst_gap >= -1e-10, "min(negativity - bound) " + sci(worst_gap));
  o.require(strict > 0, fmt::format("strict cases with coherence > 1e-3: {}", strict));
  return o;
}

Outcome hom_structure() {
  Outcome o;
  std::vector<SweepSpec> specs;
  for (double sep : {2.0, 3.0, 4.0, 6.0})
    for (int peaks : {2, 3}) {
      SweepSpec s;
      s.family.kind = FamilyKind::comb_pair;
      s.family.separation = sep;
      s.family.peak_count = peaks;
      s.lo = 1.0;
      s.hi = 1.2;
      s.grid = 41;
      s.thresholds.hom_tolerance = 1e-12;
      specs.push_back(s);
    }
  SweepSpec g;
  g.family.kind = FamilyKind::gaussian_pair;
  g.lo = 1.0;
  g.hi = 1.1;
  g.grid = 41;
  g.thresholds.hom_tolerance = 1e-12;
  specs.push_back(g);

  int points = 0, roots = 0;
  double worst = 0.0;
  const auto inspect = [&](const SweepRow& r) {
    if (!r.ok() || !(r.hom_coefficient < 1e-10)) return;
    ++points;
    const TwoModeDensityMatrix rho = trace_out_third(evolve_two_photon(build_tritter(r.angles)));
    worst = std::max({worst, std::abs(rho(1, 1, 1, 1)), std::abs(rho(0, 2, 1, 1)), std::abs(rho(2, 0, 1, 1))});
  };
  for (const SweepSpec& s : specs) {
    for (const SweepRow& r : sweep_chi(s)) inspect(r);
    for (const HomRoot& root : find_hom(s)) {
      if (root.row.hom_coefficient < 1e-10) ++roots;
      inspect(root.row);
    }
  }
  o.require(roots > 0, fmt::format("{} points below 1e-10 ({} refined roots)", points, roots));
  o.require(worst < 1e-9, "max of rho1111, |rho0211|, |rho2011| " + sci(worst));
  return o;
}

Outcome transform_invariances() {
  Outcome o;
  double norm_err = 0.0, inner_err = 0.0, oracle_err = 0.0;
  for (const auto& [f1, f2] : {gaussian_pair(100, 103, 1.5), comb_pair(100, 4, 1, 3)}) {
    const Complex before = inner_product(f1, f2);
    for (double chi : {0.5, 0.9, 1.1, 2.0}) {
      const ModeProfile g1 = redshift_transform(f1, chi), g2 = redshift_transform(f2, chi);
      norm_err = std::max({norm_err, std::abs(norm(g1) - 1.0), std::abs(norm(g2) - 1.0)});
      inner_err = std::max(inner_err, std::abs(inner_product(g1, g2) - before));
      // quadrature against the closed-form lobe sum for every cross overlap
      for (const ModeProfile* a : {&f1, &f2, &g1, &g2})
        for (const ModeProfile* b : {&f1, &f2, &g1, &g2})
          oracle_err = std::max(oracle_err, std::abs(inner_product(*a, *b) - oracle::comb_overlap(lobes_of(*a), lobes_of(*b))));
    }
  }
  o.require(norm_err < 1e-8, "max |norm - 1| " + sci(norm_err));
  o.require(inner_err < 1e-8, "max inner product drift " + sci(inner_err));
  o.require(oracle_err < 1e-8, "max quadrature vs closed form " + sci(oracle_err));
  return o;
}

Outcome geometry() {
  Outcome o;
  const double chi = schwarzschild_chi({2.0, 4.0, 8.0});
  o.require(std::abs(chi - 1.10668) < 1e-5, fmt::format("chi(2, 4, 8) = {:.8f}", chi));

  double recip = 0.0;
  for (double rs : {0.0, 0.1, 1.0, 2.0})
    for (double ra : {2.5, 4.0, 10.0, 1e3})
      for (double rb : {2.2, 8.0, 50.0, 1e5})
        recip = std::max(recip, std::abs(schwarzschild_chi({rs, rb, ra}) - 1.0 / schwarzschild_chi({rs, ra, rb})));
  o.require(recip < 1e-14, "reciprocity " + sci(recip));

  const double rs = 8.87e-3, ra = 6.371e6, h = 1e5;
  const double g = rs * kSpeedOfLight * kSpeedOfLight / (2.0 * ra * ra);
  const double exact = schwarzschild_chi({rs, ra, ra + h});
  const double weak = weak_field_chi(g, h);
  const double rel = std::abs(exact - weak) / exact;
  o.require(rel < 1e-6, "weak-field relative error " + sci(rel));
  return o;
}

Outcome nogo() {
  Outcome o;
  double worst = 0.0;
  int unit = 0;
  bool unit_only_at_one = true;
  for (int i = 0; i <= 300; ++i) {
    const double chi = 0.5 + 1.5 * i / 300.0;  // hits chi = 1 at i = 100
    const double n = nogo_normalization(chi);
    worst = std::max(worst, std::abs(n - 1.0 / (chi * chi)));
    if (std::abs(n - 1.0) <= 1e-12) {
      ++unit;
      unit_only_at_one = unit_only_at_one && chi == 1.0;
    }
  }
  o.require(worst < 1e-15, "max |N - 1/chi^2| " + sci(worst));
  o.require(unit == 1 && unit_only_at_one, fmt::format("grid points with N = 1: {} (chi = 1 only)", unit));
  return o;
}

Outcome disjoint_modes() {
  Outcome o;
  SweepSpec s;
  s.family.kind = FamilyKind::gaussian_pair;
  s.family.omega0 = 100;
  s.family.separation = 25;  // 25 sigma apart
  s.family.sigma = 1;
  s.lo = 1.0;
  s.hi = 1.05;
  s.grid = 51;
  const auto [f1, f2] = family_modes(s.family);
  double u21 = 0.0, u12 = 0.0, fourth = 0.0;
  for (double chi : sweep_grid(s)) {
    const TritterResult t = tritter_from_modes(f1, f2, chi);
    u21 = std::max(u21, std::abs(t.matrix(1, 0)));
    u12 = std::max(u12, std::abs(t.matrix(0, 1)));
    fourth = std::max(fourth, std::abs(t.overlaps.o12));
  }
  o.require(u21 < 1e-9, "max |U21| " + sci(u21));
  o.require(u12 < 1e-9, fmt::format("max |U12| {} (physical |<F1',F2>| {})", sci(u12), sci(fourth)));
  const auto roots = find_hom(s);
  o.require(roots.empty(), fmt::format("find_hom roots: {}", roots.size()));
  return o;
}

Outcome determinism() {
  Outcome o;
  const Json config = Json::parse(
      R"({"family":{"kind":"comb_pair","omega0":100,"separation":4,"sigma":1,"peak_count":3,"alternate":true},)"
      R"("chi_range":[1,1.2],"grid":21,"threads":4})");
  std::vector<std::string> outputs;
  for (int i = 0; i < 3; ++i) outputs.push_back(cli::cmd_sweep(config).csv);
  const bool same = std::all_of(outputs.begin(), outputs.end(), [&](const std::string& s) { return s == outputs[0]; });
  o.require(same, fmt::format("3 runs, {} bytes each", outputs[0].size()));
  return o;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "identity limit", 1.0, identity_limit},
      {2, "unitarity suite", 1.0, unitarity_suite},
      {3, "two-photon closed form vs permanent rule", 5.0, closed_form_vs_permanent},
      {4, "HOM reproduction", 1.0, hom_reproduction},
      {5, "negativity dominates its lower bound", 10.0, bound_dominance},
      {6, "HOM structure", 10.0, hom_structure},
      {7, "mode-transform invariances", 5.0, transform_invariances},
      {8, "geometry", 1.0, geometry},
      {9, "no-go normalization", 1.0, nogo},
      {10, "disjoint-modes negative control", 5.0, disjoint_modes},
      {11, "determinism", 5.0, determinism},
  };

  int failed = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.body();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("threw: ") + e.what();
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (seconds > c.budget_seconds) o.require(false, fmt::format("runtime over {} s", c.budget_seconds));
    if (!o.pass) ++failed;
    std::printf("%s [%2d] %s: %s (%.3f s)\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), seconds);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
