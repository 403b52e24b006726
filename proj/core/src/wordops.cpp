#include "resonator/wordops.hpp"

#include <cmath>
#include <string>

#include "resonator/errors.hpp"

namespace resonator {

double WordOperator::norm() const {
  if (matrix.size() == 0) return 0.0;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(matrix);
  return svd.singularValues()[0];
}

namespace {

// DFS over the word set keeping the running product nu(gamma_{a_1..a_k}),
// so each tree node costs one matrix multiplication. The accumulation is
// Kahan-compensated: the sums run over up to 2m(2m-1)^{N-1} unit-norm terms
// and plain summation already loses ~1e-10 absolute at N = 8.
struct CompensatedSum {
  Eigen::MatrixXcd acc;
  Eigen::MatrixXcd comp;
  explicit CompensatedSum(int dim)
      : acc(Eigen::MatrixXcd::Zero(dim, dim)),
        comp(Eigen::MatrixXcd::Zero(dim, dim)) {}
  void add(const Eigen::MatrixXcd& term) {
    const Eigen::MatrixXcd y = term - comp;
    const Eigen::MatrixXcd t = acc + y;
    comp = (t - acc) - y;
    acc = t;
  }
};

void sum_words(const Twist& nu, const WordFilter& filter, int N,
               std::vector<Eigen::MatrixXcd>& stack, std::vector<int>& word,
               CompensatedSum& acc) {
  const int depth = static_cast<int>(word.size());
  if (depth == N) {
    acc.add(stack.back());
    return;
  }
  const int k = 2 * nu.m;
  for (int l = 0; l < k; ++l) {
    if (depth == 0) {
      switch (filter.kind) {
        case WordFilter::Kind::FirstLast:
          if (l != filter.i) continue;
          break;
        case WordFilter::Kind::ZSet:
          if (l != inverse_letter(filter.i, nu.m)) continue;
          break;
        default:
          break;
      }
    } else if (!letters_admissible(word[depth - 1], l, nu.m)) {
      continue;
    }
    if (depth == N - 1) {
      const bool ok = filter.kind == WordFilter::Kind::All ||
                      (filter.kind == WordFilter::Kind::NotEndingIn && l != filter.j) ||
                      (filter.kind == WordFilter::Kind::FirstLast && l == filter.j) ||
                      (filter.kind == WordFilter::Kind::ZSet && l != filter.j);
      if (!ok) continue;
    }
    word.push_back(l);
    stack.push_back(stack[depth] * nu.gen[l]);
    sum_words(nu, filter, N, stack, word, acc);
    stack.pop_back();
    word.pop_back();
  }
}

}  // namespace

WordOperator word_operator(const Twist& nu, const WordFilter& filter, int N,
                           std::uint64_t cap) {
  const std::uint64_t count = count_words(nu.m, N, filter);
  if (count > cap) {
    throw SizeLimit("word operator over " + std::to_string(count) + " words");
  }
  WordOperator op;
  op.N = N;
  op.filter = filter;
  CompensatedSum acc(nu.dim);
  std::vector<Eigen::MatrixXcd> stack{Eigen::MatrixXcd::Identity(nu.dim, nu.dim)};
  std::vector<int> word;
  sum_words(nu, filter, N, stack, word, acc);
  op.matrix = std::move(acc.acc);
  return op;
}

WordOperator wn_recursion(const Twist& nu, int N) {
  const int twoM = 2 * nu.m;
  Eigen::MatrixXcd w1 = Eigen::MatrixXcd::Zero(nu.dim, nu.dim);
  for (const auto& g : nu.gen) w1 += g;
  Eigen::MatrixXcd prev = Eigen::MatrixXcd::Identity(nu.dim, nu.dim);  // W_0
  Eigen::MatrixXcd cur = w1;                                           // W_1
  if (N == 0) return WordOperator{0, WordFilter::all(), prev};
  for (int k = 1; k < N; ++k) {
    // W_{k+1} = W_1 W_k - (2m-1) W_{k-1}, except W_2 = W_1^2 - 2m I.
    const double tail = k == 1 ? twoM : twoM - 1;
    Eigen::MatrixXcd next = w1 * cur - tail * prev;
    prev = std::move(cur);
    cur = std::move(next);
  }
  return WordOperator{N, WordFilter::all(), cur};
}

Eigen::VectorXd w1_eigenvalues(const Twist& nu) {
  Eigen::MatrixXcd w1 = Eigen::MatrixXcd::Zero(nu.dim, nu.dim);
  for (const auto& g : nu.gen) w1 += g;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(w1);
  if (es.info() != Eigen::Success) {
    throw NoConvergence("W_1 eigensolve failed");
  }
  return es.eigenvalues();
}

namespace {

// xi_{k,N} for the quadratic 1 - lambda z + (2m-1) z^2 = (1-w+ z)(1-w- z).
Complex xi_value(Complex wp, Complex wm, int N, double confluentGap) {
  if (N < 0) return 0.0;
  if (std::abs(wp - wm) < confluentGap) {
    const Complex w = (wp + wm) / 2.0;
    return static_cast<double>(N + 1) * std::pow(w, N);
  }
  return (std::pow(wp, N + 1) - std::pow(wm, N + 1)) / (wp - wm);
}

struct OmegaPair {
  Complex plus, minus;
};

OmegaPair omegas(double lambda, int m) {
  const Complex disc(lambda * lambda - 4.0 * (2.0 * m - 1.0), 0.0);
  const Complex root = std::sqrt(disc);
  return {(lambda + root) / 2.0, (lambda - root) / 2.0};
}

}  // namespace

double wn_norm_closed_form(const Twist& nu, int N) {
  const Eigen::VectorXd lambdas = w1_eigenvalues(nu);
  const double confluentGap = 1e-8 * (2.0 * nu.m - 1.0);
  double best = 0.0;
  for (int k = 0; k < lambdas.size(); ++k) {
    const auto [wp, wm] = omegas(lambdas[k], nu.m);
    const Complex xiN = xi_value(wp, wm, N, confluentGap);
    const Complex xiN2 = xi_value(wp, wm, N - 2, confluentGap);
    best = std::max(best, std::abs(xiN - xiN2));
  }
  return best;
}

DecayReport verify_decay(const GroupHom& h, const UnitaryRep& nu, int Nmax,
                         std::uint64_t cap) {
  if (h.m() < 2) {
    throw ConfigError("decay verification needs m >= 2");
  }
  const Eigen::MatrixXcd proj = trivial_projector(nu);
  if (proj.norm() > 1e-9) {
    throw TrivialComponentPresent(
        "representation contains the trivial component");
  }
  const int m = h.m();
  DecayReport rep;
  rep.epsilon = expansion_epsilon(h);
  rep.lambdaBound = 2.0 * m * (1.0 - rep.epsilon);
  rep.omegaBound = (2.0 * m - 1.0) * std::exp(-rep.epsilon / 3.0);

  const Twist t = twist_from_hom(h, nu);
  const Eigen::VectorXd lambdas = w1_eigenvalues(t);
  for (int k = 0; k < lambdas.size(); ++k) {
    rep.maxLambda = std::max(rep.maxLambda, std::abs(lambdas[k]));
    const auto [wp, wm] = omegas(lambdas[k], m);
    rep.maxOmega = std::max({rep.maxOmega, std::abs(wp), std::abs(wm)});
  }
  if (rep.maxLambda > rep.lambdaBound + 1e-9) {
    throw NoConvergence("eigenvalue bound 2m(1-eps) violated");
  }
  if (rep.maxOmega > rep.omegaBound + 1e-9) {
    throw NoConvergence("omega bound (2m-1)exp(-eps/3) violated");
  }
  for (int N = 1; N <= Nmax; ++N) {
    const double sizeWn = static_cast<double>(count_words(m, N, WordFilter::all()));
    rep.wnRatio.push_back(word_operator(t, WordFilter::all(), N, cap).norm() /
                          sizeWn);
    double aMax = 0.0;
    for (int i = 0; i < 2 * m; ++i) {
      for (int j = 0; j < 2 * m; ++j) {
        if (count_words(m, N, WordFilter::first_last(i, j)) == 0) continue;
        aMax = std::max(
            aMax, word_operator(t, WordFilter::first_last(i, j), N, cap).norm());
      }
    }
    rep.aSetRatio.push_back(aMax / sizeWn);
    rep.reference4.push_back(std::exp(-rep.epsilon * N / 4.0));
    rep.reference6.push_back(std::exp(-rep.epsilon * N / 6.0));
  }
  return rep;
}

TwistedAverage twisted_average(
    const SchottkyData& s, const GroupHom& h, const UnitaryRep& nu,
    const std::function<Eigen::VectorXcd(double)>& f, const LimitPoint& x,
    int N) {
  const Eigen::MatrixXcd proj = trivial_projector(nu);
  TwistedAverage out;
  out.full = Eigen::VectorXcd::Zero(nu.dim);
  out.trivialPart = Eigen::VectorXcd::Zero(nu.dim);
  out.residualPart = Eigen::VectorXcd::Zero(nu.dim);
  std::uint64_t count = 0;
  for_each_word(s.m, N, WordFilter::not_ending_in(x.diskIndex),
                [&](std::span<const int> wl) {
                  ++count;
                  const ReducedWord w{std::vector<int>(wl.begin(), wl.end())};
                  const double gx = apply_word(s, w, Complex(x.x, 0.0)).real();
                  const Eigen::VectorXcd fx = f(gx);
                  const Eigen::MatrixXcd nuInv =
                      nu.matrix(h.group->inv(h.image_of_word(wl)));
                  out.full += nuInv * fx;
                  const Eigen::VectorXcd pfx = proj * fx;
                  out.trivialPart += nuInv * pfx;
                  out.residualPart += nuInv * (fx - pfx);
                });
  if (count == 0) throw SizeLimit("empty word set in twisted average");
  out.full /= static_cast<double>(count);
  out.trivialPart /= static_cast<double>(count);
  out.residualPart /= static_cast<double>(count);
  return out;
}

SchurCheck schur_bound_check(const UnitaryRep& rho, const Eigen::VectorXcd& v) {
  if (!is_irreducible(rho)) {
    throw NotIrreducible("Schur bound requires an irreducible representation");
  }
  const UnitaryRep nu = tensor_conjugate(rho);
  Eigen::VectorXcd h(nu.dim);
  for (int i = 0; i < rho.dim; ++i) {
    for (int j = 0; j < rho.dim; ++j) {
      h[i * rho.dim + j] = v[i] * std::conj(v[j]);
    }
  }
  Eigen::VectorXcd averaged = Eigen::VectorXcd::Zero(nu.dim);
  for (int g = 0; g < rho.group->order; ++g) averaged += nu.matrix(g) * h;
  averaged /= static_cast<double>(rho.group->order);
  SchurCheck out;
  out.lhs = averaged.norm();
  out.rhs = v.squaredNorm() / std::sqrt(static_cast<double>(rho.dim));
  if (std::abs(out.lhs - out.rhs) > 1e-9 * std::max(1.0, out.rhs)) {
    throw NoConvergence("Schur projection norm identity violated");
  }
  return out;
}

}  // namespace resonator
