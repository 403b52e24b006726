#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "resonator/errors.hpp"
#include "resonator/thermo.hpp"

using namespace resonator;

namespace {

const SchottkyData& funnel() {
  static const SchottkyData s =
      build_schottky(SurfaceDescription::symmetric_funnel(2, 4.0));
  return s;
}

}  // namespace

TEST_CASE("pressure at sigma = 0 is log(2m-1)") {
  CHECK(pressure_eigen(funnel(), 0.0, 16).value ==
        doctest::Approx(std::log(3.0)).epsilon(1e-8));
  const SchottkyData cyl = build_schottky(SurfaceDescription::cylinder(2.0));
  CHECK(pressure_eigen(cyl, 0.0, 16).value == doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("pressure is strictly decreasing and stable under refinement") {
  const double p02 = pressure_eigen(funnel(), 0.2, 24).value;
  const double p04 = pressure_eigen(funnel(), 0.4, 24).value;
  CHECK(p02 > p04);
  for (double sigma : {0.1, 0.5, 1.0}) {
    CHECK(std::abs(pressure_eigen(funnel(), sigma, 16).value -
                   pressure_eigen(funnel(), sigma, 32).value) <= 1e-8);
  }
}

TEST_CASE("orbit sums agree with the eigenvalue pressure") {
  // sigma = 0: the orbit sum counts periodic points exactly.
  const double count12 = std::pow(3.0, 12) + 2.0 + 1.0;
  CHECK(pressure_orbit_sum(funnel(), 0.0, 12).value ==
        doctest::Approx(std::log(count12) / 12.0).epsilon(1e-12));

  const double sigma = 0.31;
  const double eig = pressure_eigen(funnel(), sigma, 24).value;
  double prevGap = 1e9;
  for (int n : {4, 8, 12}) {
    const double gap =
        std::abs(pressure_orbit_sum(funnel(), sigma, n).value - eig);
    CHECK(gap < prevGap);
    prevGap = gap;
  }
  CHECK(prevGap <= 1e-3);
}

TEST_CASE("cylinder orbit sum is -sigma*l + log(2)/n") {
  const SchottkyData cyl = build_schottky(SurfaceDescription::cylinder(2.0));
  for (int n : {3, 7}) {
    for (double sigma : {0.3, 1.0}) {
      CHECK(pressure_orbit_sum(cyl, sigma, n).value ==
            doctest::Approx(-2.0 * sigma + std::log(2.0) / n).epsilon(1e-10));
    }
  }
}

TEST_CASE("Hausdorff dimension: root of the pressure") {
  const SchottkyData cyl = build_schottky(SurfaceDescription::cylinder(2.0));
  CHECK(hausdorff_dimension(cyl, 1e-10) == 0.0);

  const double delta = hausdorff_dimension(funnel(), 1e-10, 24);
  CHECK(pressure_eigen(funnel(), delta, 24).value ==
        doctest::Approx(0.0).epsilon(1e-8));

  // Orbit-sum root as an independent oracle (bisection on n = 10 sums).
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 30; ++it) {
    const double mid = 0.5 * (lo + hi);
    (pressure_orbit_sum(funnel(), mid, 10).value > 0.0 ? lo : hi) = mid;
  }
  CHECK(std::abs(delta - 0.5 * (lo + hi)) <= 2e-3);
}

TEST_CASE("dimension decreases as the funnel separation grows") {
  double prev = 1.0;
  for (double sep : {3.0, 4.0, 5.0}) {
    const SchottkyData s =
        build_schottky(SurfaceDescription::symmetric_funnel(2, sep));
    const double delta = hausdorff_dimension(s, 1e-8, 16);
    CHECK(delta < prev);
    prev = delta;
  }
}

TEST_CASE("branch weights are positive and sum to one") {
  const SchottkyData& s = funnel();
  const int M = 24;
  const CollocationGrid grid(s, M);
  const double delta = hausdorff_dimension(s, 1e-10, M);
  const auto pts = limit_points(s, 6, 13);  // 52 points
  REQUIRE(pts.size() >= 50);
  for (double sigma : {delta, delta / 2.0, 0.1}) {
    const RpfData rpf = rpf_data(s, sigma, M);
    CHECK(rpf.spectralGapRatio < 1.0);
    for (std::size_t p = 0; p < pts.size(); p += 7) {
      for (int N = 1; N <= 6; ++N) {
        double sum = 0.0;
        for (const auto& [w, value] : weights(s, rpf, grid, pts[p], N)) {
          CHECK(value > 0.0);
          sum += value;
        }
        CHECK(std::abs(sum - 1.0) <= 1e-8);
      }
    }
  }
  // Positivity across the full 50-point sample at sigma = delta.
  const RpfData rpf = rpf_data(s, delta, M);
  for (const auto& p : pts) {
    for (const auto& [w, value] : weights(s, rpf, grid, p, 2)) {
      CHECK(value > 0.0);
    }
  }
}

TEST_CASE("cylinder: the single branch has weight one") {
  const SchottkyData cyl = build_schottky(SurfaceDescription::cylinder(2.0));
  const CollocationGrid grid(cyl, 16);
  const RpfData rpf = rpf_data(cyl, 0.4, 16);
  const auto pts = limit_points(cyl, 2, 2);
  const auto w = weights(cyl, rpf, grid, pts[0], 1);
  REQUIRE(w.size() == 1);
  // Exactly 1 in exact arithmetic; here up to eigen-residual/interpolation.
  CHECK(w[0].second == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("pressure-estimate ratio stays bounded in N") {
  const SchottkyData& s = funnel();
  const double delta = hausdorff_dimension(s, 1e-8, 16);
  for (double sigma : {0.0, delta / 2.0, delta, 1.0}) {
    const auto ratios = pressure_ratio_diagnostic(s, sigma, 8, 16);
    for (double r : ratios) {
      CHECK(r > 0.0);
      CHECK(r < 60.0);
    }
  }
}

TEST_CASE("orbit sums respect the enumeration cap") {
  CHECK_THROWS_AS(pressure_orbit_sum(funnel(), 0.5, 30), SizeLimit);
}
