#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "resonator/groups.hpp"
#include "resonator/words.hpp"

namespace resonator {

// Unitary representation of a finite group, one matrix per element.
struct UnitaryRep {
  GroupPtr group;
  int dim = 1;
  std::vector<Eigen::MatrixXcd> matrices;  // size group->order
  std::string label;

  const Eigen::MatrixXcd& matrix(int g) const { return matrices[g]; }
  Eigen::VectorXcd character() const;
  bool is_trivial() const;
};

// Verifies homomorphism and unitarity residuals (<= 1e-10) on all pairs for
// order <= 24, on generator-style samples above.
void validate_rep(const UnitaryRep& rep);

UnitaryRep trivial_rep(GroupPtr group);
UnitaryRep regular_rep(GroupPtr group);

// nu = rho (x) conj(rho) on V (x) V.
UnitaryRep tensor_conjugate(const UnitaryRep& rho);

UnitaryRep direct_sum(const UnitaryRep& a, const UnitaryRep& b);

// (1/|G|) sum_g nu(g): the orthogonal projector onto the trivial isotypic
// subspace. Idempotent and self-adjoint to 1e-10.
Eigen::MatrixXcd trivial_projector(const UnitaryRep& nu);

// Complete list of irreducibles up to equivalence, trivial first. Cyclic and
// dihedral groups take the exact classical formulas; everything else goes
// through numerical block-diagonalization of the regular representation
// (random Hermitian commutant element), validated by character orthogonality
// and sum dim^2 = |G|, with up to 5 random retries.
std::vector<UnitaryRep> irreps(GroupPtr group, int numericalCap = 200,
                               std::uint64_t seed = 0x5eed);

double character_inner_product(const UnitaryRep& a, const UnitaryRep& b);
bool is_irreducible(const UnitaryRep& rep);

// Unitary twist of the Schottky free group: one matrix per generator letter,
// with gen[j+m] = gen[j]^{-1}. This is what transfer operators and word sums
// consume; finite-group representations enter through a homomorphism.
struct Twist {
  int m = 1;
  int dim = 1;
  std::vector<Eigen::MatrixXcd> gen;  // size 2m
  std::string label;

  int alphabet() const { return 2 * m; }
  const Eigen::MatrixXcd& letter(int j) const { return gen[j]; }
  Eigen::MatrixXcd word(const ReducedWord& w) const;
  Eigen::MatrixXcd word_inverse(const ReducedWord& w) const;
  bool is_trivial() const;
};

Twist trivial_twist(int m);
Twist twist_from_hom(const GroupHom& hom, const UnitaryRep& rep);
// chi_theta(gamma_j) = exp(2 pi i theta_j) for the m free generators,
// extended multiplicatively (abelianization character).
Twist character_twist(int m, const std::vector<double>& theta);
Twist direct_sum(const Twist& a, const Twist& b);

// Signed letter-count vector P(word) in Z^m.
std::vector<long long> abelianization_vector(const ReducedWord& w, int m);

}  // namespace resonator
