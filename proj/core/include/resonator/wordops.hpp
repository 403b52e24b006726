#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "resonator/reps.hpp"
#include "resonator/schottky.hpp"

namespace resonator {

// Sum of nu(gamma_a) over a designated word set, as an operator on the
// representation space.
struct WordOperator {
  int N = 0;
  WordFilter filter;
  Eigen::MatrixXcd matrix;

  double norm() const;  // largest singular value
};

// Brute-force sum over the word set. Throws SizeLimit past the cap.
WordOperator word_operator(const Twist& nu, const WordFilter& filter, int N,
                           std::uint64_t cap = kDefaultWordCap);

// W_N(nu) through the Ihara-type recursions
//   W_1^2 = W_2 + 2m I,  W_1 W_N = W_{N+1} + (2m-1) W_{N-1}.
WordOperator wn_recursion(const Twist& nu, int N);

// ||W_N(nu)|| = max_k |xi_{k,N} - xi_{k,N-2}| with
// omega_k^{+-} = (lambda_k +- sqrt(lambda_k^2 - 4(2m-1)))/2 and
// xi_{k,N} = sum_{l=0}^N (omega^+)^l (omega^-)^{N-l}, evaluated by the
// geometric-sum formula away from the confluent case.
double wn_norm_closed_form(const Twist& nu, int N);

// Eigenvalues lambda_k of the self-adjoint W_1(nu), ascending.
Eigen::VectorXd w1_eigenvalues(const Twist& nu);

struct DecayReport {
  double epsilon = 0.0;
  double maxOmega = 0.0;       // max_k |omega_k^{+-}| over all tested irreducibles
  double omegaBound = 0.0;     // (2m-1) e^{-eps/3}
  double maxLambda = 0.0;      // max_k |lambda_k|
  double lambdaBound = 0.0;    // 2m (1-eps)
  std::vector<double> wnRatio;     // ||W_N(nu)|| / |W_N|, N = 1..Nmax
  std::vector<double> aSetRatio;   // max_{i,j} ||A_N^{i,j}(nu)|| / |W_N|
  std::vector<double> reference4;  // e^{-eps N / 4}
  std::vector<double> reference6;  // e^{-eps N / 6}
};

// Verifies the eigenvalue-level bounds for a representation without trivial
// component and reports the measured decay of the word-operator norms.
// Requires m >= 2 (the omega bound is vacuous for the cylinder).
DecayReport verify_decay(const GroupHom& h, const UnitaryRep& nu, int Nmax,
                         std::uint64_t cap = kDefaultWordCap);

struct TwistedAverage {
  Eigen::VectorXcd full;
  Eigen::VectorXcd trivialPart;   // average of the projected function
  Eigen::VectorXcd residualPart;  // average of f minus its projection
};

// E_{a in W_N^j} ( nu(gamma_a)^{-1} f(gamma_a x) ), split along the trivial
// isotypic component. `f` is evaluated on the fly at the image points.
TwistedAverage twisted_average(
    const SchottkyData& s, const GroupHom& h, const UnitaryRep& nu,
    const std::function<Eigen::VectorXcd(double)>& f, const LimitPoint& x,
    int N);

struct SchurCheck {
  double lhs = 0.0;  // ||(1/|G|) sum_g nu(g) (v (x) conj v)||
  double rhs = 0.0;  // ||v||^2 / sqrt(dim)
};

// For irreducible rho the two sides agree exactly (Schur's lemma); asserts
// |lhs - rhs| <= 1e-9 and throws NotIrreducible otherwise.
SchurCheck schur_bound_check(const UnitaryRep& rho, const Eigen::VectorXcd& v);

}  // namespace resonator
