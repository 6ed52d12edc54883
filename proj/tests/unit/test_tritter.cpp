#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "gravtritter/error.hpp"
#include "gravtritter/modes.hpp"
#include "gravtritter/tritter.hpp"
#include "oracles.hpp"

using namespace gravtritter;
constexpr double kHalfPi = std::numbers::pi / 2.0;

TEST_CASE("angles from overlaps") {
  auto a = angles_from_overlaps(1, 1, 0);
  CHECK(a.theta == 0.0);
  CHECK(a.phi == 0.0);
  CHECK(a.psi == 0.0);

  a = angles_from_overlaps(0, 0, 0);
  CHECK(std::abs(a.theta - kHalfPi) < 1e-15);
  CHECK(a.phi == 0.0);
  CHECK(std::abs(a.psi - kHalfPi) < 1e-15);

  a = angles_from_overlaps(0.8, 0.6, 0.36);
  CHECK(std::abs(a.phi - 0.36826789343663998) < 1e-12);
  CHECK(std::abs(a.theta - 0.54041950027058416) < 1e-12);
  CHECK(std::abs(a.psi - 0.87223104145534738) < 1e-12);
  CHECK(std::abs(std::cos(a.theta) * std::cos(a.phi) - 0.8) < 1e-12);
  CHECK(std::abs(std::cos(a.phi) * std::cos(a.psi) - 0.6) < 1e-12);
  CHECK(std::abs(std::sin(a.phi) - 0.36) < 1e-12);
}

TEST_CASE("angles: clamping and inconsistency") {
  // within slack: clamped
  const auto a = angles_from_overlaps(1.0 + 5e-10, 1.0, 0.0);
  CHECK(a.theta == 0.0);
  CHECK_THROWS_AS(angles_from_overlaps(0.9, 0.1, 0.5), InconsistencyError);
  CHECK_THROWS_AS(angles_from_overlaps(0.1, 0.9, 0.5), InconsistencyError);
  const auto d = angles_from_overlaps(0.0, 0.0, 1.0);
  CHECK(d.theta == 0.0);
  CHECK(d.psi == 0.0);
  CHECK(std::abs(d.phi - kHalfPi) < 1e-15);
}

TEST_CASE("build tritter examples") {
  CHECK((build_tritter({0, 0, 0}) - MixerMatrix::Identity()).cwiseAbs().maxCoeff() == 0.0);

  MixerMatrix swap;
  swap << 0, -1, 0, 0, 0, 1, -1, 0, 0;
  CHECK((build_tritter({kHalfPi, 0, kHalfPi}) - swap).cwiseAbs().maxCoeff() < 1e-15);

  const double r = std::numbers::sqrt2 / 2.0;
  MixerMatrix bs;
  bs << r, -r, 0, r, r, 0, 0, 0, 1;
  CHECK((build_tritter({0, std::numbers::pi / 4, 0}) - bs).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("property: unitarity, determinant, angle round trip") {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 1000; ++i) {
    const TritterAngles a = oracle::random_angles(rng);
    const MixerMatrix u = build_tritter(a);
    CHECK(unitarity_residual(u) < 1e-12);
    CHECK(std::abs(u.determinant() - Complex(1.0)) < 1e-12);
    const auto back = angles_from_overlaps(std::abs(u(0, 0)), std::abs(u(1, 1)), std::abs(u(1, 0)));
    const MixerMatrix again = build_tritter(back);
    CHECK(std::abs(std::abs(again(0, 0)) - std::abs(u(0, 0))) < 1e-12);
    CHECK(std::abs(std::abs(again(1, 1)) - std::abs(u(1, 1))) < 1e-12);
    CHECK(std::abs(std::abs(again(1, 0)) - std::abs(u(1, 0))) < 1e-12);
    // rounding of sin(phi) costs ~1e-16 tan(phi) / cos(phi) relative in cos(phi)
    if (std::cos(a.phi) < 1e-3) continue;
    CHECK(std::abs(back.theta - a.theta) < 1e-9);
    CHECK(std::abs(back.phi - a.phi) < 1e-9);
    CHECK(std::abs(back.psi - a.psi) < 1e-9);
  }
}

TEST_CASE("tritter from modes") {
  const auto [f1, f2] = orthonormalize_pair(ModeProfile::gaussian(100, 1), ModeProfile::gaussian(104, 1));

  SUBCASE("chi = 1 gives identity") {
    const auto t = tritter_from_modes(f1, f2, 1.0);
    CHECK((t.matrix - MixerMatrix::Identity()).cwiseAbs().maxCoeff() < 1e-8);
  }
  SUBCASE("closed-form overlaps, chi^2 = 1.02") {
    const double chi = std::sqrt(1.02);
    const auto t = tritter_from_modes(f1, f2, chi);
    CHECK(std::abs(std::abs(t.overlaps.o11) - 0.6125051000404576) < 1e-10);
    CHECK(std::abs(std::abs(t.overlaps.o22) - 0.5249732652956037) < 1e-10);
    CHECK(std::abs(std::abs(t.overlaps.o21) - 0.5345292935726943) < 1e-10);
    CHECK(std::abs(std::abs(t.overlaps.o12) - 0.07277601921138144) < 1e-10);
    CHECK(std::abs(std::abs(t.matrix(0, 0)) - std::abs(t.overlaps.o11)) < 1e-12);
    CHECK(std::abs(std::abs(t.matrix(1, 1)) - std::abs(t.overlaps.o22)) < 1e-12);
    CHECK(std::abs(std::abs(t.matrix(1, 0)) - std::abs(t.overlaps.o21)) < 1e-12);
    CHECK(std::abs(t.overlaps.fourth_overlap_residual -
                   (std::abs(t.matrix(0, 1)) - std::abs(t.overlaps.o12))) < 1e-15);
  }
  SUBCASE("non-orthogonal inputs rejected") {
    CHECK_THROWS_AS(tritter_from_modes(ModeProfile::gaussian(100, 1), ModeProfile::gaussian(101, 1), 1.01),
                    DomainError);
  }
}

TEST_CASE("property: continuity in chi near 1") {
  const auto [f1, f2] = orthonormalize_pair(ModeProfile::gaussian(100, 1), ModeProfile::gaussian(103, 1.5));
  MixerMatrix previous = tritter_from_modes(f1, f2, 1.0).matrix;
  const double step = 1e-5;
  for (int i = 1; i <= 100; ++i) {
    const MixerMatrix u = tritter_from_modes(f1, f2, 1.0 + i * step).matrix;
    // slopes stay below ~ omega0 / sigma
    CHECK((u - previous).cwiseAbs().maxCoeff() / step < 2000.0);
    previous = u;
  }
}

TEST_CASE("no-go normalization") {
  CHECK(nogo_normalization(1.0) == 1.0);
  CHECK(std::abs(nogo_normalization(std::sqrt(2.0)) - 0.5) < 1e-15);
  CHECK(nogo_normalization(0.5) == 4.0);
  CHECK_FALSE(sharp_shift_is_nonunitary(1.0));
  CHECK(sharp_shift_is_nonunitary(1.0 + 1e-9));
  CHECK_THROWS_AS(nogo_normalization(0.0), DomainError);
}
