#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include "resonator/errors.hpp"
#include "resonator/reps.hpp"

using namespace resonator;

TEST_CASE("basic group constructions") {
  CHECK(build_cyclic(1)->order == 1);
  CHECK(build_dihedral(4)->order == 8);
  CHECK(build_cyclic(6)->is_abelian());
  CHECK(!build_dihedral(3)->is_abelian());
  CHECK(build_cyclic(5)->cyclic_generator() >= 0);
  CHECK(build_dihedral(3)->cyclic_generator() == -1);
}

TEST_CASE("table validation rejects broken tables") {
  // 2x2 table that is not a Latin square.
  CHECK_THROWS_AS(build_from_table(2, {0, 0, 0, 0}), NotClosed);
  // Valid Z/2 table round-trips.
  const auto g = build_from_table(2, {0, 1, 1, 0});
  CHECK(g->identity == 0);
  CHECK(g->inv(1) == 1);
}

TEST_CASE("congruence closures of the SL2(Z) example surface") {
  const SchottkyData s = build_schottky(SurfaceDescription::sl2z_example());
  CHECK(congruence_hom(s, 2).group->order == 6);
  CHECK(congruence_hom(s, 3).group->order == 24);
  CHECK(congruence_hom(s, 5).group->order == 120);
  const GroupHom h5 = congruence_hom(s, 5);
  CHECK(h5.generates());
  // Images of inverse letters are inverse elements.
  for (int j = 0; j < 2 * s.m; ++j) {
    CHECK(h5.group->mul(h5.image_of_letter(j),
                        h5.image_of_letter((j + s.m) % (2 * s.m))) ==
          h5.group->identity);
  }
}

TEST_CASE("expansion constant: exact and degenerate cases") {
  // All images trivial: T is the identity, eps = 0.
  CHECK(expansion_epsilon(make_hom(build_cyclic(4), {0, 0})) == 0.0);

  // Z/3 with images (1,2): both nontrivial eigenvalues are -1/2.
  const auto rep = expansion_report(make_hom(build_cyclic(3), {1, 2}));
  REQUIRE(rep.nontrivialSpectrum.size() == 2);
  for (double l : rep.nontrivialSpectrum) {
    CHECK(l == doctest::Approx(-0.5).epsilon(1e-12));
  }
  CHECK(rep.epsilon == doctest::Approx(0.5).epsilon(1e-12));

  // Non-generating images keep eigenvalue 1 with multiplicity > 1.
  CHECK(expansion_epsilon(make_hom(build_cyclic(4), {2, 2})) == 0.0);
}

TEST_CASE("expansion agrees with an independent adjacency eigensolve") {
  const SchottkyData s = build_schottky(SurfaceDescription::sl2z_example());
  const GroupHom h = congruence_hom(s, 5);
  const auto rep = expansion_report(h);
  const int n = h.group->order;
  Eigen::MatrixXd adj = Eigen::MatrixXd::Zero(n, n);
  for (int x = 0; x < n; ++x) {
    for (int j = 0; j < 2 * h.m(); ++j) {
      adj(x, h.group->mul(x, h.images[j])) += 1.0;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(adj);
  double second = 0.0;
  for (int i = 0; i < n - 1; ++i) {
    second = std::max(second, std::abs(es.eigenvalues()[i]));
  }
  CHECK(rep.epsilon ==
        doctest::Approx(1.0 - second / (2.0 * h.m())).epsilon(1e-8));
}

TEST_CASE("expansion is invariant under relabeling the group") {
  const auto g = build_dihedral(4);
  const GroupHom h = make_hom(g, {1, 4});
  const double eps = expansion_epsilon(h);

  std::mt19937_64 rng(42);
  std::vector<int> perm(g->order);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<int> table(g->order * g->order);
  for (int a = 0; a < g->order; ++a) {
    for (int b = 0; b < g->order; ++b) {
      table[perm[a] * g->order + perm[b]] = perm[g->mul(a, b)];
    }
  }
  const auto relabeled = build_from_table(g->order, table, "relabeled");
  const GroupHom h2 = make_hom(relabeled, {perm[1], perm[4]});
  CHECK(std::abs(expansion_epsilon(h2) - eps) <= 1e-10);
}

TEST_CASE("irreps: abelian duality and classical dihedral table") {
  const auto z2 = irreps(build_cyclic(2));
  REQUIRE(z2.size() == 2);
  CHECK(z2[0].is_trivial());
  CHECK(z2[1].matrix(1)(0, 0).real() == doctest::Approx(-1.0));

  const auto d3 = irreps(build_dihedral(3));
  REQUIRE(d3.size() == 3);
  CHECK(d3[0].dim == 1);
  CHECK(d3[1].dim == 1);
  CHECK(d3[2].dim == 2);
  int sumSq = 0;
  for (const auto& r : d3) sumSq += r.dim * r.dim;
  CHECK(sumSq == 6);
}

TEST_CASE("numerical path reproduces the dihedral(3) character table") {
  const auto exact = build_dihedral(3);
  // Forcing the table path exercises the commutant decomposition.
  const auto tableGroup =
      build_from_table(exact->order, exact->table, "s3-table");
  const auto numeric = irreps(tableGroup);
  REQUIRE(numeric.size() == 3);
  std::vector<int> dims;
  for (const auto& r : numeric) dims.push_back(r.dim);
  std::sort(dims.begin(), dims.end());
  CHECK(dims == std::vector<int>{1, 1, 2});
  for (std::size_t i = 0; i < numeric.size(); ++i) {
    for (std::size_t j = 0; j < numeric.size(); ++j) {
      const double ip = character_inner_product(numeric[i], numeric[j]);
      CHECK(std::abs(ip - (i == j ? 1.0 : 0.0)) <= 1e-8);
    }
  }
}

TEST_CASE("numerical irreps of SL2(F3)") {
  const SchottkyData s = build_schottky(SurfaceDescription::sl2z_example());
  const GroupHom h = congruence_hom(s, 3);
  const auto reps = irreps(h.group);
  int sumSq = 0;
  std::vector<int> dims;
  for (const auto& r : reps) {
    sumSq += r.dim * r.dim;
    dims.push_back(r.dim);
  }
  CHECK(sumSq == 24);
  std::sort(dims.begin(), dims.end());
  CHECK(dims == std::vector<int>{1, 1, 1, 2, 2, 2, 3});
  for (std::size_t i = 0; i < reps.size(); ++i) {
    for (std::size_t j = i + 1; j < reps.size(); ++j) {
      CHECK(character_inner_product(reps[i], reps[j]) <= 1e-8);
    }
  }
}

TEST_CASE("regular representation character") {
  const auto g = build_dihedral(3);
  const UnitaryRep reg = regular_rep(g);
  const Eigen::VectorXcd chi = reg.character();
  CHECK(chi[g->identity].real() == doctest::Approx(6.0));
  for (int x = 0; x < g->order; ++x) {
    if (x == g->identity) continue;
    CHECK(std::abs(chi[x]) <= 1e-12);
  }
}

TEST_CASE("tensor-conjugate and the trivial projector") {
  const auto g = build_dihedral(3);
  const auto reps = irreps(g);

  // Trivial rho: nu is trivial and the projector is the identity.
  const UnitaryRep nuTrivial = tensor_conjugate(reps[0]);
  CHECK(nuTrivial.dim == 1);
  CHECK(trivial_projector(nuTrivial)(0, 0).real() == doctest::Approx(1.0));

  for (const auto& rho : reps) {
    const UnitaryRep nu = tensor_conjugate(rho);
    validate_rep(nu);
    const Eigen::MatrixXcd p = trivial_projector(nu);
    CHECK((p * p - p).norm() <= 1e-10);
    CHECK((p - p.adjoint()).norm() <= 1e-10);
  }
}

TEST_CASE("abelianization characters") {
  const Twist trivial = character_twist(2, {0.0, 0.0});
  CHECK(trivial.is_trivial());

  const std::vector<double> theta{0.3, 0.45};
  const Twist chi = character_twist(2, theta);
  // chi(gamma_1^2 gamma_2) = exp(2 pi i (2 theta_1 + theta_2))
  const ReducedWord w{{0, 0, 1}};
  const Complex got = chi.word(w)(0, 0);
  const double ang = 2.0 * std::numbers::pi * (2.0 * theta[0] + theta[1]);
  CHECK(std::abs(got - Complex(std::cos(ang), std::sin(ang))) <= 1e-12);
  const auto vec = abelianization_vector(w, 2);
  CHECK(vec == std::vector<long long>{2, 1});
  // Inverse letters count negatively.
  CHECK(abelianization_vector(ReducedWord{{2, 3, 3}}, 2) ==
        std::vector<long long>{-1, -2});
}

TEST_CASE("character-gap inequality for abelian images") {
  const GroupHom h = make_hom(build_cyclic(5), {1, 2});
  const double eps = expansion_epsilon(h);
  const auto chars = irreps(h.group);
  for (const auto& chi : chars) {
    if (chi.is_trivial()) continue;
    Complex avg(0.0, 0.0);
    for (int j = 0; j < 2 * h.m(); ++j) {
      avg += chi.matrix(h.image_of_letter(j))(0, 0);
    }
    avg /= 2.0 * h.m();
    CHECK(std::abs(avg) <= 1.0 - eps + 1e-10);
  }
}

TEST_CASE("oversized groups are rejected") {
  const SchottkyData s = build_schottky(SurfaceDescription::sl2z_example());
  // |SL2(Z/17)| = 4896, past the dense-table cap.
  CHECK_THROWS_AS(congruence_hom(s, 17), TooLarge);
}
