#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "doctest.h"
#include "gravtritter/error.hpp"
#include "gravtritter/modes.hpp"
#include "oracles.hpp"

using namespace gravtritter;

namespace {

std::vector<oracle::Lobe> as_lobes(const ModeProfile& f) {
  std::vector<oracle::Lobe> out;
  for (const CombLobe& l : f.lobes()) out.push_back({l.weight, l.center, l.width});
  return out;
}

ModeProfile tabulate(const ModeProfile& f, double lo, double hi, int n) {
  std::vector<double> w;
  std::vector<Complex> v;
  for (int i = 0; i < n; ++i) {
    w.push_back(lo + (hi - lo) * i / (n - 1));
    v.push_back(f(w.back()));
  }
  return ModeProfile::tabulated(w, v, false);
}

}  // namespace

TEST_CASE("evaluate gaussian") {
  const auto g = ModeProfile::gaussian(10.0, 1.0);
  CHECK(std::abs(g(10.0).real() - 0.6316187777460647) < 1e-15);
  CHECK(std::abs(g(12.0).real() - 0.23235956299061171) < 1e-15);
  CHECK(g(-1.0) == Complex(0.0));
  CHECK(g(0.0) == Complex(0.0));
  const auto p = ModeProfile::gaussian(10.0, 1.0, std::numbers::pi / 2);
  CHECK(std::abs(p(10.0) - Complex(0.0, 0.6316187777460647)) < 1e-15);
}

TEST_CASE("evaluate tabulated: linear interpolation, zero outside grid") {
  const auto t = ModeProfile::tabulated({1.0, 2.0, 4.0}, {1.0, Complex(0.0, 2.0), 0.0}, false);
  CHECK(t(1.5) == Complex(0.5, 1.0));
  CHECK(t(3.0) == Complex(0.0, 1.0));
  CHECK(t(0.5) == Complex(0.0));
  CHECK(t(4.5) == Complex(0.0));
  CHECK(t(-1.0) == Complex(0.0));
}

TEST_CASE("invalid parameters") {
  CHECK_THROWS_AS(ModeProfile::gaussian(10.0, 0.0), DomainError);
  CHECK_THROWS_AS(ModeProfile::gaussian(-1.0, 1.0), DomainError);
  CHECK_THROWS_AS(ModeProfile::tabulated({1.0, 1.0}, {0.0, 0.0}, false), DomainError);
  CHECK_THROWS_AS(make_comb(std::vector<CombLobe>{}), DomainError);
  CHECK_THROWS_AS(redshift_transform(ModeProfile::gaussian(10, 1), 0.0), DomainError);
  CHECK_THROWS_AS(redshift_transform(ModeProfile::gaussian(10, 1), -2.0), DomainError);
}

TEST_CASE("inner products against closed forms") {
  const auto g10 = ModeProfile::gaussian(10, 1);
  CHECK(std::abs(inner_product(g10, g10) - 1.0) < 1e-8);
  CHECK(std::abs(inner_product(g10, ModeProfile::gaussian(12, 1)) - 0.60653065971263342) < 1e-10);
  CHECK(std::abs(inner_product(g10, ModeProfile::gaussian(40, 1))) < 1e-12);

  const auto phased = ModeProfile::gaussian(12, 1, 0.7);
  const Complex expected = std::polar(0.60653065971263342, 0.7);
  CHECK(std::abs(inner_product(g10, phased) - expected) < 1e-10);
  CHECK(std::abs(inner_product(phased, g10) - std::conj(expected)) < 1e-10);
}

TEST_CASE("property: gaussian overlaps match closed form when omega0 > 8 sigma") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> width(0.2, 3.0), center(30.0, 60.0), phase(-3.0, 3.0);
  for (int i = 0; i < 100; ++i) {
    const double s1 = width(rng), s2 = width(rng), c1 = center(rng), c2 = center(rng);
    const double p1 = phase(rng), p2 = phase(rng);
    const Complex got = inner_product(ModeProfile::gaussian(c1, s1, p1), ModeProfile::gaussian(c2, s2, p2));
    const Complex want = std::polar(oracle::gaussian_overlap(c1, s1, c2, s2), p2 - p1);
    CHECK(std::abs(got - want) < 1e-8);
  }
}

TEST_CASE("property: cauchy-schwarz on normalized profiles") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> width(0.2, 3.0), center(20.0, 40.0);
  for (int i = 0; i < 50; ++i) {
    const auto f = make_comb(std::vector<CombLobe>{{1.0, center(rng), width(rng)}, {-0.5, center(rng), width(rng)}});
    const auto g = ModeProfile::gaussian(center(rng), width(rng));
    CHECK(std::abs(inner_product(f, g)) <= 1.0 + 1e-10);
  }
}

TEST_CASE("redshift transform") {
  const auto g = ModeProfile::gaussian(10, 1);
  const auto same = redshift_transform(g, 1.0);
  CHECK(std::abs(same(9.3) - g(9.3)) < 1e-15);

  const auto shifted = redshift_transform(g, std::sqrt(2.0));
  REQUIRE(shifted.is_gaussian());
  const auto& s = std::get<GaussianShape>(shifted.shape());
  CHECK(std::abs(s.omega0 - 5.0) < 1e-14);
  CHECK(std::abs(s.sigma - 0.5) < 1e-14);
  for (double w : {4.0, 5.0, 5.7})
    CHECK(std::abs(shifted(w) - std::sqrt(2.0) * g(2.0 * w)) < 1e-14);
}

TEST_CASE("property: norm preserved under redshift for every kind") {
  const auto gauss = ModeProfile::gaussian(40, 1.5, 0.3);
  const auto comb = make_comb(std::vector<CombLobe>{{1.0, 30, 0.5}, {-1.0, 32, 0.5}, {1.0, 34, 0.5}});
  const auto table = tabulate(ModeProfile::gaussian(40, 1.5), 25.0, 55.0, 3001);
  const double table_norm2 = norm(table) * norm(table);
  for (double chi : {0.5, 0.9, 1.0, 1.1, 2.0}) {
    CHECK(std::abs(norm(redshift_transform(gauss, chi)) - 1.0) < 1e-8);
    CHECK(std::abs(norm(redshift_transform(comb, chi)) - 1.0) < 1e-8);
    const double t = norm(redshift_transform(table, chi));
    CHECK(std::abs(t * t - table_norm2) < 1e-8);
  }
}

TEST_CASE("property: inner product invariant under redshift") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> width(0.5, 2.0), center(30.0, 50.0);
  for (int i = 0; i < 20; ++i) {
    const auto [f1, f2] = orthonormalize_pair(ModeProfile::gaussian(center(rng), width(rng)),
                                              ModeProfile::gaussian(center(rng), width(rng)));
    const Complex before = inner_product(f1, f2);
    for (double chi : {0.5, 0.9, 1.1, 2.0}) {
      const Complex after = inner_product(redshift_transform(f1, chi), redshift_transform(f2, chi));
      CHECK(std::abs(after - before) < 1e-8);
    }
  }
}

TEST_CASE("orthonormalize pair") {
  SUBCASE("already orthonormal pair comes back unchanged") {
    const auto a = ModeProfile::gaussian(10, 1);
    const auto b = ModeProfile::gaussian(40, 1);
    const auto [o1, o2] = orthonormalize_pair(a, b);
    for (double w : {9.0, 10.0, 39.0, 40.5}) {
      CHECK(std::abs(o1(w) - a(w)) < 1e-8);
      CHECK(std::abs(o2(w) - b(w)) < 1e-8);
    }
  }
  SUBCASE("overlapping gaussians") {
    const auto a = ModeProfile::gaussian(10, 1);
    const auto [o1, o2] = orthonormalize_pair(a, ModeProfile::gaussian(12, 1));
    CHECK(std::abs(inner_product(o1, o2)) < 1e-8);
    CHECK(std::abs(norm(o2) - 1.0) < 1e-8);
    CHECK(std::abs(o1(10.3) - a(10.3)) < 1e-12);
    // closed-form check of the residual lobes
    CHECK(std::abs(oracle::comb_overlap(as_lobes(o1), as_lobes(o2))) < 1e-12);
  }
  SUBCASE("parallel inputs") {
    CHECK_THROWS_AS(orthonormalize_pair(ModeProfile::gaussian(10, 1), ModeProfile::gaussian(10, 1)),
                    DegeneracyError);
  }
  SUBCASE("tabulated input falls back to a tabulated result") {
    const auto t = tabulate(ModeProfile::gaussian(30, 1), 15.0, 45.0, 1501);
    const auto [o1, o2] = orthonormalize_pair(ModeProfile::gaussian(31, 1), t);
    CHECK(o2.is_tabulated());
    CHECK(std::abs(inner_product(o1, o2)) < 1e-8);
    CHECK(std::abs(norm(o2) - 1.0) < 1e-8);
  }
}

TEST_CASE("make_comb") {
  const auto single = make_comb(std::vector<CombLobe>{{1.0, 10, 1}});
  const auto g = ModeProfile::gaussian(10, 1);
  for (double w : {8.0, 10.0, 11.5}) CHECK(std::abs(single(w) - g(w)) < 1e-12);

  const auto pair = make_comb(std::vector<CombLobe>{{1.0, 10, 0.5}, {1.0, 20, 0.5}});
  CHECK(std::abs(norm(pair) - 1.0) < 1e-8);
  const auto lobes = pair.lobes();
  REQUIRE(lobes.size() == 2);
  CHECK(std::abs(std::norm(lobes[0].weight) - 0.5) < 1e-8);
  CHECK(std::abs(std::norm(lobes[1].weight) - 0.5) < 1e-8);

  const auto alt = make_comb(std::vector<CombLobe>{{1.0, 10, 0.5}, {-1.0, 12, 0.5}, {1.0, 14, 0.5}});
  CHECK(alt.lobes().size() == 3);
  CHECK(std::abs(norm(alt) - 1.0) < 1e-8);
  CHECK(std::abs(oracle::comb_overlap(as_lobes(alt), as_lobes(alt)) - 1.0) < 1e-12);
  CHECK(alt(12.0).real() < 0.0);
}
