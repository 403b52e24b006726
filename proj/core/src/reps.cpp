#include "resonator/reps.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "resonator/errors.hpp"

namespace resonator {

namespace {

constexpr double kRepTol = 1e-10;

Eigen::MatrixXcd unit_scalar(Complex v) {
  Eigen::MatrixXcd m(1, 1);
  m(0, 0) = v;
  return m;
}

}  // namespace

Eigen::VectorXcd UnitaryRep::character() const {
  Eigen::VectorXcd chi(group->order);
  for (int g = 0; g < group->order; ++g) chi[g] = matrices[g].trace();
  return chi;
}

bool UnitaryRep::is_trivial() const {
  if (dim != 1) return false;
  for (const auto& m : matrices) {
    if (std::abs(m(0, 0) - 1.0) > 1e-9) return false;
  }
  return true;
}

void validate_rep(const UnitaryRep& rep) {
  const auto& G = *rep.group;
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(rep.dim, rep.dim);
  for (int g = 0; g < G.order; ++g) {
    if ((rep.matrix(g).adjoint() * rep.matrix(g) - id).norm() > kRepTol) {
      throw DecompositionFailure("representation matrix not unitary");
    }
  }
  auto check_pair = [&](int g, int h) {
    if ((rep.matrix(G.mul(g, h)) - rep.matrix(g) * rep.matrix(h)).norm() >
        kRepTol) {
      throw DecompositionFailure("homomorphism property fails");
    }
  };
  if (G.order <= 24) {
    for (int g = 0; g < G.order; ++g) {
      for (int h = 0; h < G.order; ++h) check_pair(g, h);
    }
  } else {
    std::mt19937_64 rng(987654);
    std::uniform_int_distribution<int> pick(0, G.order - 1);
    for (int t = 0; t < 2000; ++t) check_pair(pick(rng), pick(rng));
  }
}

UnitaryRep trivial_rep(GroupPtr group) {
  UnitaryRep r;
  r.group = std::move(group);
  r.dim = 1;
  r.label = "trivial";
  r.matrices.assign(r.group->order, unit_scalar(1.0));
  return r;
}

UnitaryRep regular_rep(GroupPtr group) {
  UnitaryRep r;
  r.group = std::move(group);
  const int n = r.group->order;
  r.dim = n;
  r.label = "regular";
  r.matrices.assign(n, Eigen::MatrixXcd::Zero(n, n));
  for (int g = 0; g < n; ++g) {
    for (int x = 0; x < n; ++x) {
      r.matrices[g](r.group->mul(g, x), x) = 1.0;  // left translation
    }
  }
  return r;
}

UnitaryRep tensor_conjugate(const UnitaryRep& rho) {
  UnitaryRep nu;
  nu.group = rho.group;
  nu.dim = rho.dim * rho.dim;
  nu.label = rho.label + "(x)conj";
  nu.matrices.reserve(rho.matrices.size());
  for (const auto& m : rho.matrices) {
    Eigen::MatrixXcd t(nu.dim, nu.dim);
    for (int i = 0; i < rho.dim; ++i) {
      for (int j = 0; j < rho.dim; ++j) {
        t.block(i * rho.dim, j * rho.dim, rho.dim, rho.dim) =
            m(i, j) * m.conjugate();
      }
    }
    nu.matrices.push_back(std::move(t));
  }
  return nu;
}

UnitaryRep direct_sum(const UnitaryRep& a, const UnitaryRep& b) {
  UnitaryRep r;
  r.group = a.group;
  r.dim = a.dim + b.dim;
  r.label = a.label + "+" + b.label;
  r.matrices.reserve(a.matrices.size());
  for (std::size_t g = 0; g < a.matrices.size(); ++g) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(r.dim, r.dim);
    m.topLeftCorner(a.dim, a.dim) = a.matrices[g];
    m.bottomRightCorner(b.dim, b.dim) = b.matrices[g];
    r.matrices.push_back(std::move(m));
  }
  return r;
}

Eigen::MatrixXcd trivial_projector(const UnitaryRep& nu) {
  Eigen::MatrixXcd p = Eigen::MatrixXcd::Zero(nu.dim, nu.dim);
  for (const auto& m : nu.matrices) p += m;
  p /= static_cast<double>(nu.group->order);
  return p;
}

double character_inner_product(const UnitaryRep& a, const UnitaryRep& b) {
  const Eigen::VectorXcd ca = a.character();
  const Eigen::VectorXcd cb = b.character();
  Complex s = 0.0;
  for (int g = 0; g < a.group->order; ++g) s += ca[g] * std::conj(cb[g]);
  return std::abs(s) / a.group->order;
}

bool is_irreducible(const UnitaryRep& rep) {
  return std::abs(character_inner_product(rep, rep) - 1.0) < 1e-6;
}

namespace {

std::vector<UnitaryRep> cyclic_irreps(const GroupPtr& group, int gen) {
  const int n = group->order;
  // Element g = gen^k: exponent k recovered by walking the cycle.
  std::vector<int> expOf(n, 0);
  int x = group->identity;
  for (int k = 0; k < n; ++k) {
    expOf[x] = k;
    x = group->mul(x, gen);
  }
  std::vector<UnitaryRep> out;
  for (int k = 0; k < n; ++k) {
    UnitaryRep r;
    r.group = group;
    r.dim = 1;
    r.label = k == 0 ? "trivial" : "character(" + std::to_string(k) + ")";
    r.matrices.reserve(n);
    for (int g = 0; g < n; ++g) {
      const double ang = 2.0 * std::numbers::pi * k * expOf[g] / n;
      r.matrices.push_back(unit_scalar(Complex(std::cos(ang), std::sin(ang))));
    }
    out.push_back(std::move(r));
  }
  return out;
}

// Dihedral of order 2n with the build_dihedral layout (rotations first).
std::vector<UnitaryRep> dihedral_irreps(const GroupPtr& group) {
  const int n = group->order / 2;
  std::vector<UnitaryRep> out;
  auto add_char = [&](const std::string& label, auto value) {
    UnitaryRep r;
    r.group = group;
    r.dim = 1;
    r.label = label;
    for (int g = 0; g < group->order; ++g) {
      const bool flip = g >= n;
      const int k = flip ? g - n : g;
      r.matrices.push_back(unit_scalar(value(flip, k)));
    }
    out.push_back(std::move(r));
  };
  add_char("trivial", [](bool, int) { return Complex(1.0); });
  add_char("sign", [](bool flip, int) { return Complex(flip ? -1.0 : 1.0); });
  if (n % 2 == 0) {
    add_char("alt", [n](bool, int k) { return Complex(k % 2 == 0 ? 1.0 : -1.0); });
    add_char("alt*sign", [n](bool flip, int k) {
      return Complex((k % 2 == 0 ? 1.0 : -1.0) * (flip ? -1.0 : 1.0));
    });
  }
  for (int h = 1; h <= (n - 1) / 2; ++h) {
    UnitaryRep r;
    r.group = group;
    r.dim = 2;
    r.label = "rot(" + std::to_string(h) + ")";
    for (int g = 0; g < group->order; ++g) {
      const bool flip = g >= n;
      const int k = flip ? g - n : g;
      const double ang = 2.0 * std::numbers::pi * h * k / n;
      Eigen::MatrixXcd m(2, 2);
      // s r^k acts by reflection diag(1,-1) times rotation.
      m(0, 0) = std::cos(ang);
      m(0, 1) = -std::sin(ang);
      m(1, 0) = std::sin(ang);
      m(1, 1) = std::cos(ang);
      if (flip) {
        Eigen::MatrixXcd s(2, 2);
        s << 1.0, 0.0, 0.0, -1.0;
        m = s * m;
      }
      r.matrices.push_back(std::move(m));
    }
    out.push_back(std::move(r));
  }
  // Even n also needs the h = n/2 pair folded into characters, handled above.
  return out;
}

// Numerical path: diagonalize a random Hermitian element of the commutant of
// the left regular representation (i.e. an element of the right group
// algebra), whose eigenspaces are irreducible left-submodules.
std::vector<UnitaryRep> numerical_irreps(const GroupPtr& group,
                                         std::uint64_t seed) {
  const int n = group->order;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  // H = sum_g c_g R_right(g), then Hermitize. Right translations commute with
  // the left regular representation.
  Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(n, n);
  for (int g = 0; g < n; ++g) {
    const Complex cg(gauss(rng), gauss(rng));
    for (int x = 0; x < n; ++x) {
      H(group->mul(x, g), x) += cg;
    }
  }
  H = Eigen::MatrixXcd((H + H.adjoint()) / 2.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H);
  if (es.info() != Eigen::Success) {
    throw DecompositionFailure("commutant eigensolve failed");
  }
  const Eigen::VectorXd ev = es.eigenvalues();
  const Eigen::MatrixXcd V = es.eigenvectors();
  // Cluster eigenvalues; each cluster spans one irreducible left-submodule.
  const double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());
  const double tol = 1e-8 * scale;
  std::vector<std::pair<int, int>> clusters;  // [begin, end)
  int begin = 0;
  for (int i = 1; i <= n; ++i) {
    if (i == n || ev[i] - ev[i - 1] > tol) {
      clusters.emplace_back(begin, i);
      begin = i;
    }
  }
  std::vector<UnitaryRep> reps;
  for (const auto& [lo, hi] : clusters) {
    const int d = hi - lo;
    const Eigen::MatrixXcd basis = V.middleCols(lo, d);  // orthonormal
    UnitaryRep r;
    r.group = group;
    r.dim = d;
    r.matrices.reserve(n);
    for (int g = 0; g < n; ++g) {
      // Left action restricted to the submodule, in the orthonormal basis.
      Eigen::MatrixXcd LgB(n, d);
      for (int x = 0; x < n; ++x) LgB.row(group->mul(g, x)) = basis.row(x);
      r.matrices.push_back(basis.adjoint() * LgB);
    }
    reps.push_back(std::move(r));
  }
  // Group equivalent blocks by character inner products, keep one of each.
  std::vector<UnitaryRep> unique;
  for (auto& r : reps) {
    if (!is_irreducible(r)) {
      throw DecompositionFailure("cluster is not an irreducible submodule");
    }
    bool dup = false;
    for (const auto& u : unique) {
      if (r.dim == u.dim && character_inner_product(r, u) > 0.5) {
        dup = true;
        break;
      }
    }
    if (!dup) unique.push_back(std::move(r));
  }
  int sumSq = 0;
  for (const auto& u : unique) sumSq += u.dim * u.dim;
  if (sumSq != n) {
    throw DecompositionFailure("irreducible dimensions do not fill the group");
  }
  // Orthonormality of distinct characters.
  for (std::size_t i = 0; i < unique.size(); ++i) {
    for (std::size_t j = i + 1; j < unique.size(); ++j) {
      if (character_inner_product(unique[i], unique[j]) > 1e-8) {
        throw DecompositionFailure("characters not orthogonal");
      }
    }
  }
  return unique;
}

}  // namespace

std::vector<UnitaryRep> irreps(GroupPtr group, int numericalCap,
                               std::uint64_t seed) {
  std::vector<UnitaryRep> out;
  const int cyc = group->cyclic_generator();
  if (cyc >= 0) {
    out = cyclic_irreps(group, cyc);
  } else if (group->label.rfind("dihedral(", 0) == 0) {
    out = dihedral_irreps(group);
  } else {
    if (group->order > numericalCap) {
      throw TooLarge("group order exceeds the numerical irrep cap");
    }
    std::exception_ptr last;
    for (int attempt = 0; attempt < 5; ++attempt) {
      try {
        out = numerical_irreps(group, seed + attempt);
        last = nullptr;
        break;
      } catch (const DecompositionFailure&) {
        last = std::current_exception();
      }
    }
    if (last) std::rethrow_exception(last);
  }
  for (auto& r : out) validate_rep(r);
  // Trivial representation first, then by dimension, then by label.
  std::stable_sort(out.begin(), out.end(),
                   [](const UnitaryRep& a, const UnitaryRep& b) {
                     const bool ta = a.is_trivial(), tb = b.is_trivial();
                     if (ta != tb) return ta;
                     return a.dim < b.dim;
                   });
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (out[i].label.empty()) {
      out[i].label = "irrep" + std::to_string(i) + "(d=" +
                     std::to_string(out[i].dim) + ")";
    }
  }
  if (!out.empty() && !out.front().is_trivial()) {
    throw DecompositionFailure("trivial representation missing from the list");
  }
  return out;
}

Eigen::MatrixXcd Twist::word(const ReducedWord& w) const {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Identity(dim, dim);
  for (int letter : w.letters) out = out * gen[letter];
  return out;
}

Eigen::MatrixXcd Twist::word_inverse(const ReducedWord& w) const {
  return word(w).adjoint();
}

bool Twist::is_trivial() const {
  if (dim != 1) return false;
  for (const auto& g : gen) {
    if (std::abs(g(0, 0) - 1.0) > 1e-12) return false;
  }
  return true;
}

Twist trivial_twist(int m) {
  Twist t;
  t.m = m;
  t.dim = 1;
  t.label = "trivial";
  t.gen.assign(2 * m, unit_scalar(1.0));
  return t;
}

Twist twist_from_hom(const GroupHom& hom, const UnitaryRep& rep) {
  Twist t;
  t.m = hom.m();
  t.dim = rep.dim;
  t.label = rep.label;
  t.gen.reserve(2 * t.m);
  for (int j = 0; j < 2 * t.m; ++j) {
    t.gen.push_back(rep.matrix(hom.image_of_letter(j)));
  }
  return t;
}

Twist character_twist(int m, const std::vector<double>& theta) {
  if (static_cast<int>(theta.size()) != m) {
    throw ConfigError("character twist needs theta in T^m");
  }
  Twist t;
  t.m = m;
  t.dim = 1;
  std::string label = "character(";
  for (int j = 0; j < m; ++j) {
    label += (j ? "," : "") + std::to_string(theta[j]);
  }
  t.label = label + ")";
  t.gen.resize(2 * m);
  for (int j = 0; j < m; ++j) {
    const double ang = 2.0 * std::numbers::pi * theta[j];
    t.gen[j] = unit_scalar(Complex(std::cos(ang), std::sin(ang)));
    t.gen[j + m] = unit_scalar(Complex(std::cos(ang), -std::sin(ang)));
  }
  return t;
}

Twist direct_sum(const Twist& a, const Twist& b) {
  Twist t;
  t.m = a.m;
  t.dim = a.dim + b.dim;
  t.label = a.label + "+" + b.label;
  t.gen.reserve(a.gen.size());
  for (std::size_t j = 0; j < a.gen.size(); ++j) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(t.dim, t.dim);
    m.topLeftCorner(a.dim, a.dim) = a.gen[j];
    m.bottomRightCorner(b.dim, b.dim) = b.gen[j];
    t.gen.push_back(std::move(m));
  }
  return t;
}

std::vector<long long> abelianization_vector(const ReducedWord& w, int m) {
  std::vector<long long> counts(m, 0);
  for (int letter : w.letters) {
    if (letter < m) {
      ++counts[letter];
    } else {
      --counts[letter - m];
    }
  }
  return counts;
}

}  // namespace resonator
