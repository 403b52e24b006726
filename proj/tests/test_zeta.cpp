#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "resonator/errors.hpp"
#include "resonator/thermo.hpp"
#include "resonator/zeta.hpp"

using namespace resonator;

namespace {

const SchottkyData& funnel() {
  static const SchottkyData s =
      build_schottky(SurfaceDescription::symmetric_funnel(2, 4.0));
  return s;
}

const SchottkyData& cylinder() {
  static const SchottkyData s =
      build_schottky(SurfaceDescription::cylinder(2.0));
  return s;
}

ScanRectangle rect(double reMin, double reMax, double imMin, double imMax,
                   int M = 16) {
  ScanRectangle r;
  r.reMin = reMin;
  r.reMax = reMax;
  r.imMin = imMin;
  r.imMax = imMax;
  r.M = M;
  return r;
}

}  // namespace

TEST_CASE("cylinder Euler product: two primitive classes") {
  // The cylinder group has the two primitive classes [gamma] and
  // [gamma^{-1}], so the product squares the one-class factor.
  const Complex s0(3.0, 0.0);
  Complex oneClass(1.0, 0.0);
  for (int k = 0; k <= 40; ++k) {
    oneClass *= 1.0 - std::exp(-(s0.real() + k) * 2.0);
  }
  double tail = 0.0;
  const Complex euler =
      zeta_euler(cylinder(), s0, trivial_twist(1), 6, 40, &tail, 0.0);
  CHECK(std::abs(euler - oneClass * oneClass) <= 1e-12);
  CHECK(std::abs(euler - fredholm_det(cylinder(), s0, trivial_twist(1), 24)) <=
        1e-10);
}

TEST_CASE("Euler product matches the Fredholm determinant on the funnel") {
  const double delta = hausdorff_dimension(funnel(), 1e-8, 16);
  for (const Complex s0 : {Complex(3.0, 0.0), Complex(2.5, 1.0)}) {
    double tail = 0.0;
    const Complex euler = zeta_euler(funnel(), s0, trivial_twist(2), 10, 30,
                                     &tail, delta);
    const Complex det = fredholm_det(funnel(), s0, trivial_twist(2), 24);
    CHECK(std::abs(det - euler) / std::abs(euler) <= 1e-6);
    CHECK(tail <= 1e-8);
  }
}

TEST_CASE("Euler product rejects points outside the convergence domain") {
  CHECK_THROWS_AS(
      zeta_euler(funnel(), Complex(0.3, 0.0), trivial_twist(2), 6, 10, nullptr,
                 0.31),
      ConvergenceDomain);
}

TEST_CASE("zero counting: Patterson half-plane and the leading zero") {
  const double delta = hausdorff_dimension(funnel(), 1e-10, 16);
  CHECK(count_zeros(funnel(), rect(delta + 1e-3, delta + 0.8, -3.0, 3.0),
                    trivial_twist(2), 16) == 0);
  CHECK(count_zeros(funnel(),
                    rect(delta - 0.01, delta + 0.01, -0.01, 0.01, 24),
                    trivial_twist(2), 24) == 1);
}

TEST_CASE("cylinder: winding around i*pi counts both blocks") {
  // Each lattice zero of the cylinder determinant is double.
  CHECK(count_zeros(cylinder(),
                    rect(-0.2, 0.2, std::numbers::pi - 0.3,
                         std::numbers::pi + 0.3),
                    trivial_twist(1), 16) == 2);
}

TEST_CASE("cylinder zero locations on the standard rectangle") {
  const auto report = locate_zeros(cylinder(), rect(-0.4, 0.4, -7.0, 7.0, 24),
                                   trivial_twist(1), 24, 1e-8);
  REQUIRE(report.zeros.size() == 5);
  const double pi = std::numbers::pi;
  const Complex expected[5] = {Complex(0.0, -2.0 * pi), Complex(0.0, -pi),
                               Complex(0.0, 0.0), Complex(0.0, pi),
                               Complex(0.0, 2.0 * pi)};
  for (const Complex& e : expected) {
    bool found = false;
    for (const auto& z : report.zeros) {
      if (std::abs(z.s - e) <= 1e-6) {
        found = true;
        CHECK(z.multiplicity == 2);
      }
    }
    CHECK(found);
  }
  CHECK(report.windingTotal == 10);
  CHECK(conjugation_symmetric(report, 1e-8));
}

TEST_CASE("funnel: leading zero location matches the dimension") {
  const double delta = hausdorff_dimension(funnel(), 1e-10, 24);
  const auto report = locate_zeros(
      funnel(), rect(delta - 0.05, delta + 0.03, -0.05, 0.05, 24),
      trivial_twist(2), 24, 1e-9);
  REQUIRE(report.zeros.size() == 1);
  CHECK(report.zeros[0].multiplicity == 1);
  CHECK(std::abs(report.zeros[0].s - Complex(delta, 0.0)) <= 1e-6);
}

TEST_CASE("Venkov-Zograf factorization") {
  const double delta = hausdorff_dimension(funnel(), 1e-8, 16);
  const GroupHom z2 = make_hom(build_cyclic(2), {1, 1});
  const double gap = venkov_zograf_check(
      funnel(), z2,
      {Complex(2.0, 0.0), Complex(2.0, 1.0), Complex(delta + 0.3, 0.0)}, 16);
  CHECK(gap <= 1e-7);
  CHECK_THROWS_AS(
      venkov_zograf_check(funnel(), make_hom(build_cyclic(25), {1, 2}),
                          {Complex(2.0, 0.0)}, 8),
      TooLarge);
}

TEST_CASE("trivial group: both Venkov-Zograf sides are the untwisted det") {
  const GroupHom trivialHom = make_hom(build_cyclic(1), {0, 0});
  const double gap =
      venkov_zograf_check(funnel(), trivialHom, {Complex(2.0, 0.5)}, 16);
  CHECK(gap <= 1e-12);
}

TEST_CASE("new-zero scan on a Z/2 cover near the leading zero") {
  const SchottkyData& s = funnel();
  const double delta = hausdorff_dimension(s, 1e-8, 16);
  const GroupHom h = make_hom(build_cyclic(2), {1, 1});
  auto r = rect(delta - 0.08, delta + 0.02, -0.5, 0.5, 16);
  const CoverScan scan = new_zero_scan(s, h, r, 1e-7, 2);
  // Both generators map to the involution: the Cayley graph is bipartite,
  // the averaging operator has eigenvalue -1, and eps = 0. The scan still
  // runs; the theorem's hypothesis simply fails.
  CHECK(scan.epsilon == 0.0);
  CHECK(scan.empiricalEta > 0.0);
  // The base report contains exactly the leading zero.
  REQUIRE(scan.baseReport.zeros.size() == 1);
  CHECK(std::abs(scan.baseReport.zeros[0].s - Complex(delta, 0.0)) <= 1e-5);
  for (const auto& z : scan.newZeros) {
    CHECK(z.tag == ZeroEntry::Tag::New);
    CHECK(z.s.real() < delta);
  }
}

TEST_CASE("character scan: theta = 0 reproduces the trivial report") {
  const SchottkyData& s = funnel();
  const double delta = hausdorff_dimension(s, 1e-8, 16);
  auto r = rect(delta - 0.04, delta + 0.02, -0.05, 0.05, 16);
  const auto entries = character_zeta_scan(
      s, {{0.0, 0.0}, {0.5, 0.0}}, r, 1e-7, 2);
  REQUIRE(entries.size() == 2);
  REQUIRE(entries[0].report.zeros.size() == 1);
  CHECK(std::abs(entries[0].report.zeros[0].s - Complex(delta, 0.0)) <= 1e-5);
  // The nontrivial character has no zero this close to delta.
  CHECK(entries[1].report.zeros.empty());
  CHECK(entries[1].gap > 0.0);
}

TEST_CASE("classification against a base report") {
  ResonanceReport base;
  base.zeros.push_back({Complex(0.3, 0.0), 1, 0.0, ZeroEntry::Tag::Unclassified});
  ResonanceReport twisted;
  twisted.zeros.push_back(
      {Complex(0.3, 1e-9), 1, 0.0, ZeroEntry::Tag::Unclassified});
  twisted.zeros.push_back(
      {Complex(0.2, 0.1), 1, 0.0, ZeroEntry::Tag::Unclassified});
  classify_zeros(twisted, base, 1e-8);
  CHECK(twisted.zeros[0].tag == ZeroEntry::Tag::Old);
  CHECK(twisted.zeros[1].tag == ZeroEntry::Tag::New);
}
