#include "resonator/groups.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>
#include <tuple>

#include "resonator/errors.hpp"

namespace resonator {

bool FiniteGroupModel::is_abelian() const {
  for (int g = 0; g < order; ++g) {
    for (int h = g + 1; h < order; ++h) {
      if (mul(g, h) != mul(h, g)) return false;
    }
  }
  return true;
}

int FiniteGroupModel::cyclic_generator() const {
  for (int g = 0; g < order; ++g) {
    int x = g, steps = 1;
    while (x != identity && steps <= order) {
      x = mul(x, g);
      ++steps;
    }
    if (x == identity && steps == order) return g;
  }
  return order == 1 ? identity : -1;
}

namespace {

GroupPtr finalize(FiniteGroupModel g) {
  return std::make_shared<const FiniteGroupModel>(std::move(g));
}

void check_axioms(const FiniteGroupModel& g) {
  const int n = g.order;
  for (int x = 0; x < n; ++x) {
    if (g.mul(g.identity, x) != x || g.mul(x, g.identity) != x) {
      throw NotClosed("identity axiom fails");
    }
    if (g.mul(x, g.inv(x)) != g.identity || g.mul(g.inv(x), x) != g.identity) {
      throw NotClosed("inverse axiom fails");
    }
  }
  // Latin-square property (each row/column a permutation).
  std::vector<char> seen(n);
  for (int x = 0; x < n; ++x) {
    std::fill(seen.begin(), seen.end(), 0);
    for (int y = 0; y < n; ++y) {
      const int p = g.mul(x, y);
      if (p < 0 || p >= n || seen[p]) throw NotClosed("row is not a permutation");
      seen[p] = 1;
    }
  }
  // Associativity: full check for small groups, sampled otherwise.
  if (n <= 64) {
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) {
        for (int c = 0; c < n; ++c) {
          if (g.mul(g.mul(a, b), c) != g.mul(a, g.mul(b, c))) {
            throw NotClosed("associativity fails");
          }
        }
      }
    }
  } else {
    std::mt19937_64 rng(1234567);
    std::uniform_int_distribution<int> pick(0, n - 1);
    for (int t = 0; t < 20000; ++t) {
      const int a = pick(rng), b = pick(rng), c = pick(rng);
      if (g.mul(g.mul(a, b), c) != g.mul(a, g.mul(b, c))) {
        throw NotClosed("associativity fails on sampled triple");
      }
    }
  }
}

std::vector<int> inverses_from_table(const FiniteGroupModel& g) {
  std::vector<int> inv(g.order, -1);
  for (int x = 0; x < g.order; ++x) {
    for (int y = 0; y < g.order; ++y) {
      if (g.mul(x, y) == g.identity) {
        inv[x] = y;
        break;
      }
    }
    if (inv[x] < 0) throw NotClosed("element without inverse");
  }
  return inv;
}

}  // namespace

GroupPtr build_cyclic(int n) {
  if (n < 1) throw ConfigError("cyclic group needs n >= 1");
  FiniteGroupModel g;
  g.order = n;
  g.identity = 0;
  g.label = "cyclic(" + std::to_string(n) + ")";
  g.table.resize(static_cast<std::size_t>(n) * n);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) g.table[static_cast<std::size_t>(a) * n + b] = (a + b) % n;
  }
  g.inverse.resize(n);
  for (int a = 0; a < n; ++a) g.inverse[a] = (n - a) % n;
  return finalize(std::move(g));
}

GroupPtr build_dihedral(int n) {
  if (n < 1) throw ConfigError("dihedral group needs n >= 1");
  // Elements 0..n-1: rotations r^k; n..2n-1: reflections s r^k.
  const int N = 2 * n;
  FiniteGroupModel g;
  g.order = N;
  g.identity = 0;
  g.label = "dihedral(" + std::to_string(n) + ")";
  g.table.resize(static_cast<std::size_t>(N) * N);
  auto idx = [n](bool flip, int k) { return (flip ? n : 0) + ((k % n) + n) % n; };
  for (int x = 0; x < N; ++x) {
    const bool fx = x >= n;
    const int kx = fx ? x - n : x;
    for (int y = 0; y < N; ++y) {
      const bool fy = y >= n;
      const int ky = fy ? y - n : y;
      // (s^a r^kx)(s^b r^ky) = s^{a+b} r^{(-1)^b kx + ky}
      const bool f = fx != fy;
      const int k = (fy ? -kx : kx) + ky;
      g.table[static_cast<std::size_t>(x) * N + y] = idx(f, k);
    }
  }
  FiniteGroupModel tmp = g;
  tmp.inverse = inverses_from_table(tmp);
  check_axioms(tmp);
  return finalize(std::move(tmp));
}

GroupPtr build_from_table(int order, std::vector<int> table, std::string label) {
  if (order < 1 || table.size() != static_cast<std::size_t>(order) * order) {
    throw NotClosed("multiplication table has the wrong size");
  }
  if (order > kTableCap) {
    throw TooLarge("group order exceeds the dense-table cap");
  }
  FiniteGroupModel g;
  g.order = order;
  g.table = std::move(table);
  g.label = std::move(label);
  // Locate the identity.
  g.identity = -1;
  for (int e = 0; e < order; ++e) {
    bool ok = true;
    for (int x = 0; x < order && ok; ++x) {
      ok = g.mul(e, x) == x && g.mul(x, e) == x;
    }
    if (ok) {
      g.identity = e;
      break;
    }
  }
  if (g.identity < 0) throw NotClosed("table has no identity element");
  g.inverse = inverses_from_table(g);
  check_axioms(g);
  return finalize(std::move(g));
}

namespace {

struct ModMat {
  int a, b, c, d;
  bool operator<(const ModMat& o) const {
    return std::tie(a, b, c, d) < std::tie(o.a, o.b, o.c, o.d);
  }
};

ModMat reduce(const IntMat2& m, int q) {
  auto r = [q](long long v) { return static_cast<int>(((v % q) + q) % q); };
  return ModMat{r(m.a), r(m.b), r(m.c), r(m.d)};
}

ModMat mul_mod(const ModMat& x, const ModMat& y, int q) {
  return ModMat{static_cast<int>((1LL * x.a * y.a + 1LL * x.b * y.c) % q),
                static_cast<int>((1LL * x.a * y.b + 1LL * x.b * y.d) % q),
                static_cast<int>((1LL * x.c * y.a + 1LL * x.d * y.c) % q),
                static_cast<int>((1LL * x.c * y.b + 1LL * x.d * y.d) % q)};
}

}  // namespace

CongruenceGroup build_sl2_mod_q(const std::vector<IntMat2>& generators, int q) {
  if (q < 2) throw ConfigError("congruence reduction needs q >= 2");
  for (const auto& g : generators) {
    const long long det = g.a * g.d - g.b * g.c;
    if (((det % q) + q) % q != 1 % q) {
      throw NonUnitDeterminant("generator determinant is not 1 mod q");
    }
  }
  std::vector<ModMat> gens;
  gens.reserve(generators.size());
  for (const auto& g : generators) gens.push_back(reduce(g, q));

  std::map<ModMat, int> index;
  std::vector<ModMat> elements;
  const ModMat id{1 % q, 0, 0, 1 % q};
  index[id] = 0;
  elements.push_back(id);
  std::vector<int> frontier{0};
  while (!frontier.empty()) {
    std::vector<int> next;
    for (int xi : frontier) {
      for (const auto& g : gens) {
        const ModMat y = mul_mod(elements[xi], g, q);
        if (index.emplace(y, static_cast<int>(elements.size())).second) {
          elements.push_back(y);
          next.push_back(static_cast<int>(elements.size()) - 1);
          if (elements.size() > kClosureCap) {
            throw TooLarge("congruence closure exceeds the element cap");
          }
        }
      }
    }
    frontier.swap(next);
  }
  // With only forward generators the BFS computes the closed monoid; in a
  // finite group that closure is the generated subgroup.
  const int n = static_cast<int>(elements.size());
  if (n > kTableCap) {
    throw TooLarge("congruence group too large for a dense table (order " +
                   std::to_string(n) + ")");
  }
  FiniteGroupModel g;
  g.order = n;
  g.identity = 0;
  g.label = "sl2mod(" + std::to_string(q) + ")";
  g.table.resize(static_cast<std::size_t>(n) * n);
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) {
      const auto it = index.find(mul_mod(elements[x], elements[y], q));
      if (it == index.end()) throw NotClosed("closure is not multiplication-closed");
      g.table[static_cast<std::size_t>(x) * n + y] = it->second;
    }
  }
  g.inverse = inverses_from_table(g);
  check_axioms(g);

  CongruenceGroup out;
  out.group = finalize(std::move(g));
  out.generatorImages.reserve(gens.size());
  for (const auto& gm : gens) out.generatorImages.push_back(index.at(gm));
  return out;
}

int GroupHom::image_of_word(std::span<const int> letters) const {
  int x = group->identity;
  for (int l : letters) x = group->mul(x, images[l]);
  return x;
}

std::vector<int> GroupHom::generated_subgroup() const {
  std::set<int> seen{group->identity};
  std::vector<int> frontier{group->identity};
  while (!frontier.empty()) {
    std::vector<int> next;
    for (int x : frontier) {
      for (int g : images) {
        const int y = group->mul(x, g);
        if (seen.insert(y).second) next.push_back(y);
      }
    }
    frontier.swap(next);
  }
  return {seen.begin(), seen.end()};
}

bool GroupHom::generates() const {
  return static_cast<int>(generated_subgroup().size()) == group->order;
}

GroupHom make_hom(GroupPtr group, const std::vector<int>& generatorImages) {
  GroupHom h;
  h.group = std::move(group);
  const int m = static_cast<int>(generatorImages.size());
  h.images.resize(2 * m);
  for (int j = 0; j < m; ++j) {
    h.images[j] = generatorImages[j];
    h.images[j + m] = h.group->inv(generatorImages[j]);
  }
  return h;
}

GroupHom congruence_hom(const SchottkyData& s, int q) {
  std::vector<IntMat2> gens;
  gens.reserve(s.m);
  for (int j = 0; j < s.m; ++j) {
    const Mat2& g = s.generators[j];
    IntMat2 gi{std::llround(g.a), std::llround(g.b), std::llround(g.c),
               std::llround(g.d)};
    if (std::abs(g.a - gi.a) + std::abs(g.b - gi.b) + std::abs(g.c - gi.c) +
            std::abs(g.d - gi.d) >
        1e-9) {
      throw ConfigError("congruence reduction needs integer Schottky matrices");
    }
    gens.push_back(gi);
  }
  const CongruenceGroup cg = build_sl2_mod_q(gens, q);
  return make_hom(cg.group, cg.generatorImages);
}

ExpansionReport expansion_report(const GroupHom& h) {
  const auto& G = *h.group;
  const int n = G.order;
  if (n < 2) {
    return ExpansionReport{0.0, {}};
  }
  const int m = h.m();
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(n, n);
  for (int x = 0; x < n; ++x) {
    for (int j = 0; j < 2 * m; ++j) {
      T(x, G.mul(x, h.images[j])) += 1.0 / (2.0 * m);
    }
  }
  ExpansionReport rep;
  if (n <= 4096) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
    // The constant vector carries the trivial eigenvalue 1; the rest is the
    // mean-zero spectrum. Deflate by removing one eigenvalue closest to 1.
    std::vector<double> ev(es.eigenvalues().data(),
                           es.eigenvalues().data() + n);
    std::sort(ev.begin(), ev.end(), std::greater<>());
    auto it = std::min_element(ev.begin(), ev.end(), [](double a, double b) {
      return std::abs(a - 1.0) < std::abs(b - 1.0);
    });
    ev.erase(it);
    rep.nontrivialSpectrum = std::move(ev);
  } else {
    // Power iteration on mean-zero functions with deflation of constants.
    std::mt19937_64 rng(20240229);
    std::normal_distribution<double> gauss;
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v[i] = gauss(rng);
    v.array() -= v.mean();
    v.normalize();
    double mu = 0.0;
    for (int it = 0; it < 5000; ++it) {
      Eigen::VectorXd w = T * v;
      w.array() -= w.mean();
      const double nw = w.norm();
      if (nw < 1e-300) break;
      const double next = nw;
      v = w / nw;
      if (it > 10 && std::abs(next - mu) < 1e-12) {
        mu = next;
        break;
      }
      mu = next;
    }
    rep.nontrivialSpectrum = {mu};
  }
  double maxAbs = 0.0;
  for (double l : rep.nontrivialSpectrum) maxAbs = std::max(maxAbs, std::abs(l));
  rep.epsilon = std::max(0.0, 1.0 - maxAbs);
  // Non-generating images leave eigenvalue 1 with multiplicity > 1, which the
  // deflation above surfaces as maxAbs ~ 1 and hence eps ~ 0.
  if (rep.epsilon < 1e-12) rep.epsilon = 0.0;
  return rep;
}

double expansion_epsilon(const GroupHom& h) { return expansion_report(h).epsilon; }

}  // namespace resonator
