#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "resonator/errors.hpp"
#include "resonator/schottky.hpp"

using namespace resonator;

namespace {

SchottkyData cylinder2() {
  return build_schottky(SurfaceDescription::cylinder(2.0));
}

SchottkyData funnel() {
  return build_schottky(SurfaceDescription::symmetric_funnel(2, 4.0));
}

}  // namespace

TEST_CASE("cylinder preset is valid Schottky data") {
  const SchottkyData s = cylinder2();
  CHECK(s.m == 1);
  CHECK(s.generators[0].trace() == doctest::Approx(2.0 * std::cosh(1.0)));
  CHECK(s.disks[0].center == doctest::Approx(-s.disks[1].center));
  CHECK(geodesic_length(s.generators[0]) == doctest::Approx(2.0));
}

TEST_CASE("invalid configurations are rejected eagerly") {
  // determinant != 1
  CHECK_THROWS_AS(
      build_schottky(SurfaceDescription::explicit_data(
          {Mat2{2, 0, 0, 2}}, {Disk{-2, 0.5}, Disk{2, 0.5}})),
      NonUnitDeterminant);
  // touching closures
  const SchottkyData cyl = cylinder2();
  CHECK_THROWS_AS(
      build_schottky(SurfaceDescription::explicit_data(
          {cyl.generators[0]}, {Disk{-1, 1}, Disk{1, 1}})),
      OverlappingDisks);
  // wrong disk for the pairing
  CHECK_THROWS_AS(
      build_schottky(SurfaceDescription::explicit_data(
          {cyl.generators[0]},
          {Disk{cyl.disks[0].center, cyl.disks[0].radius},
           Disk{cyl.disks[1].center + 0.05, cyl.disks[1].radius}})),
      MappingMismatch);
}

TEST_CASE("Moebius action basics") {
  CHECK(mobius_apply(Mat2::identity(), Complex(0.3, 0.1)) ==
        Complex(0.3, 0.1));
  const double e = std::exp(1.0);
  const Mat2 diag{e, 0.0, 0.0, 1.0 / e};
  CHECK(mobius_apply(diag, Complex(1.0, 0.0)).real() ==
        doctest::Approx(e * e));
  CHECK_THROWS_AS(mobius_apply(Mat2{1, 0, 1, 0}, Complex(0.0, 0.0)), PoleHit);
}

TEST_CASE("word matrix equals letter-by-letter application") {
  const SchottkyData s = funnel();
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> letter(0, 3);
  for (int trial = 0; trial < 20; ++trial) {
    ReducedWord w;
    const int len = 1 + trial % 8;
    while (w.length() < len) {
      const int l = letter(rng);
      if (w.empty() || letters_admissible(w.letters.back(), l, s.m)) {
        w.letters.push_back(l);
      }
    }
    const Complex z(0.1, 0.05);
    const Complex direct = mobius_apply(word_matrix(s, w), z);
    const Complex stepwise = apply_word(s, w, z);
    CHECK(std::abs(direct - stepwise) <= 1e-11 * std::max(1.0, std::abs(direct)));
  }
}

TEST_CASE("word derivative: identity, positivity, branch consistency") {
  const SchottkyData s = funnel();
  CHECK(word_derivative(s, ReducedWord{}, Complex(0.0, 0.0)).value ==
        Complex(1.0, 0.0));

  // Single letter at a real point: positive derivative, real log.
  const double x = s.disks[0].center + 0.2;
  const auto single = word_derivative(s, ReducedWord{{1}}, Complex(x, 0.0), 0);
  CHECK(single.value.real() > 0.0);
  CHECK(std::abs(single.value.imag()) < 1e-15);
  CHECK(std::abs(single.logValue.imag()) < 1e-15);

  // exp(logValue) = value on longer words, including complex points.
  const auto words = enumerate_words(s.m, 6, WordFilter::not_ending_in(0));
  for (std::size_t i = 0; i < words.size(); i += 37) {
    const Complex z(x, 0.3);
    const auto dv = word_derivative(s, words[i], z, 0);
    CHECK(std::abs(std::exp(dv.logValue) - dv.value) <=
          1e-10 * std::abs(dv.value));
  }
}

TEST_CASE("chain-rule derivative matches central differences") {
  // Central differences in double precision resolve |gamma'| down to roughly
  // eps*|gamma|/(2h); a wide-disk surface keeps length-5 derivatives above
  // that floor.
  const SchottkyData s =
      build_schottky(SurfaceDescription::symmetric_funnel(2, 2.05));
  const double x = s.disks[1].center + 0.3;
  const double h = 1e-4;
  const double fdFloor = 1e-11;  // eps * |gamma| / (2h) with safety margin
  int conditioned = 0;
  for_each_word(s.m, 5, WordFilter::not_ending_in(1),
                [&](std::span<const int> wl) {
                  ReducedWord w{std::vector<int>(wl.begin(), wl.end())};
                  const auto dv = word_derivative(s, w, Complex(x, 0.0), 1);
                  const Complex fd =
                      (apply_word(s, w, Complex(x + h, 0.0)) -
                       apply_word(s, w, Complex(x - h, 0.0))) /
                      (2.0 * h);
                  CHECK(std::abs(fd - dv.value) <=
                        std::max(1e-8 * std::abs(dv.value), fdFloor));
                  if (std::abs(dv.value) >= 8e-4) ++conditioned;
                });
  // At least one word is strong enough for the pure relative-1e-8 check.
  CHECK(conditioned > 0);
}

TEST_CASE("chain-rule derivative matches the composed-matrix derivative") {
  // gamma_w'(x) = (c x + d)^{-2} from the product matrix; a second route
  // through the same quantity that stays well-conditioned for every word.
  const SchottkyData s = funnel();
  for (int len : {3, 5, 8}) {
    const double x = s.disks[0].center - 0.5;
    std::size_t index = 0;
    for_each_word(s.m, len, WordFilter::not_ending_in(0),
                  [&](std::span<const int> wl) {
                    if (index++ % 17 != 0) return;
                    ReducedWord w{std::vector<int>(wl.begin(), wl.end())};
                    const auto dv = word_derivative(s, w, Complex(x, 0.0), 0);
                    const Mat2 g = word_matrix(s, w);
                    const double u = g.c * x + g.d;
                    const double direct = 1.0 / (u * u);
                    CHECK(std::abs(dv.value.real() - direct) <=
                          1e-10 * direct);
                  });
  }
}

TEST_CASE("word ending in the source disk letter is rejected") {
  const SchottkyData s = funnel();
  CHECK_THROWS_AS(word_derivative(s, ReducedWord{{0}}, Complex(0.0, 0.0), 0),
                  BranchObstruction);
}

TEST_CASE("limit points are verified fixed points inside the intervals") {
  const SchottkyData cyl = cylinder2();
  const auto cylPts = limit_points(cyl, 2, 10);
  CHECK(cylPts.size() == 2);  // the two fixed points of the generator

  const SchottkyData s = funnel();
  const auto pts = limit_points(s, 5, 20);
  CHECK(pts.size() == 4 * 20);
  for (const auto& p : pts) {
    CHECK(std::abs(p.x - s.disks[p.diskIndex].center) <=
          s.disks[p.diskIndex].radius);
    const double back = apply_word(s, p.witness, Complex(p.x, 0.0)).real();
    CHECK(std::abs(back - p.x) <= 1e-12);
  }
}

TEST_CASE("primitive classes: counts under both inverse conventions") {
  const SchottkyData cyl = cylinder2();
  CHECK(primitive_classes(cyl, 4, false).size() == 2);
  CHECK(primitive_classes(cyl, 4, true).size() == 1);
  CHECK(primitive_classes(cyl, 4, true)[0].length == doctest::Approx(2.0));

  const SchottkyData s = funnel();
  CHECK(primitive_classes(s, 1, false).size() == 4);
  CHECK(primitive_classes(s, 1, true).size() == 2);
  const auto classes = primitive_classes(s, 6);
  for (std::size_t i = 0; i + 1 < classes.size(); ++i) {
    CHECK(classes[i].length <= classes[i + 1].length);
  }
  for (const auto& c : classes) {
    CHECK(is_cyclically_reduced(c.representative.letters, s.m));
    CHECK(std::abs(word_matrix(s, c.representative).trace()) > 2.0);
  }
}

TEST_CASE("uniform hyperbolicity and bounded distortion diagnostics") {
  const SchottkyData s = funnel();
  const auto rep = contraction_report(s, 6);
  CHECK(rep.fittedTheta < 1.0);
  CHECK(rep.fittedTheta > 0.0);
  for (std::size_t i = 0; i + 1 < rep.supDerivative.size(); ++i) {
    CHECK(rep.supDerivative[i + 1] < rep.supDerivative[i]);
  }
  CHECK(rep.distortionMax >= 1.0);
  CHECK(rep.distortionMax < 50.0);  // uniformly bounded at this depth
}
