#include "resonator/schottky.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "resonator/errors.hpp"

namespace resonator {

namespace {

constexpr double kDetTol = 1e-9;
constexpr double kInverseTol = 1e-12;
constexpr double kMappingTol = 1e-9;
constexpr int kBoundarySamples = 32;

}  // namespace

Complex mobius_apply(const Mat2& g, Complex z) {
  const Complex den = g.c * z + g.d;
  if (std::abs(den) == 0.0) {
    throw PoleHit("Moebius map evaluated at its pole");
  }
  return (g.a * z + g.b) / den;
}

SurfaceDescription SurfaceDescription::cylinder(double length) {
  SurfaceDescription d;
  d.kind = Kind::Cylinder;
  d.length = length;
  return d;
}

SurfaceDescription SurfaceDescription::symmetric_funnel(int m, double separation) {
  SurfaceDescription d;
  d.kind = Kind::SymmetricFunnel;
  d.m = m;
  d.separation = separation;
  return d;
}

SurfaceDescription SurfaceDescription::sl2z_example() {
  SurfaceDescription d;
  d.kind = Kind::Sl2zExample;
  d.m = 2;
  return d;
}

SurfaceDescription SurfaceDescription::explicit_data(std::vector<Mat2> matrices,
                                                     std::vector<Disk> disks) {
  SurfaceDescription d;
  d.kind = Kind::Explicit;
  d.matrices = std::move(matrices);
  d.disks = std::move(disks);
  return d;
}

std::string SurfaceDescription::label() const {
  switch (kind) {
    case Kind::Cylinder:
      return "cylinder(l=" + std::to_string(length) + ")";
    case Kind::SymmetricFunnel:
      return "symmetric-funnel(m=" + std::to_string(m) +
             ",sep=" + std::to_string(separation) + ")";
    case Kind::Sl2zExample:
      return "sl2z";
    case Kind::Explicit:
      return "explicit(m=" + std::to_string(matrices.size() / 2) + ")";
  }
  return "?";
}

int SchottkyData::disk_of(double x, double slack) const {
  for (int j = 0; j < alphabet(); ++j) {
    if (std::abs(x - disks[j].center) <= disks[j].radius + slack) return j;
  }
  return -1;
}

namespace {

// Hyperbolic element whose isometric circle is the boundary of (c1, r) and
// which maps its exterior onto the interior of (c2, r).
Mat2 pairing_generator(double c1, double c2, double r) {
  return Mat2{c2 / r, -(c1 * c2 + r * r) / r, 1.0 / r, -c1 / r};
}

struct RawData {
  std::vector<Mat2> gens;   // 2m
  std::vector<Disk> disks;  // 2m
};

RawData assemble(const SurfaceDescription& d) {
  RawData raw;
  switch (d.kind) {
    case SurfaceDescription::Kind::Cylinder: {
      if (d.length <= 0.0) throw ConfigError("cylinder length must be positive");
      const double t = d.length / 2.0;
      const Mat2 g{std::cosh(t), std::sinh(t), std::sinh(t), std::cosh(t)};
      const double c = std::cosh(t) / std::sinh(t);
      const double r = 1.0 / std::sinh(t);
      raw.gens = {g, g.inverse()};
      raw.disks = {Disk{-c, r}, Disk{c, r}};
      break;
    }
    case SurfaceDescription::Kind::SymmetricFunnel: {
      if (d.m < 1) throw ConfigError("symmetric funnel needs m >= 1");
      if (d.separation <= 2.0) {
        throw OverlappingDisks("symmetric funnel needs separation > 2 (unit radii)");
      }
      const int k = 2 * d.m;
      std::vector<double> centers(k);
      for (int j = 0; j < k; ++j) {
        centers[j] = (j - (k - 1) / 2.0) * d.separation;
      }
      raw.gens.resize(k);
      raw.disks.resize(k);
      for (int j = 0; j < k; ++j) raw.disks[j] = Disk{centers[j], 1.0};
      for (int j = 0; j < d.m; ++j) {
        raw.gens[j] = pairing_generator(centers[j], centers[j + d.m], 1.0);
        raw.gens[j + d.m] = raw.gens[j].inverse();
      }
      break;
    }
    case SurfaceDescription::Kind::Sl2zExample: {
      // A = [[2,1],[1,1]] pairs D(-1,1) -> D(2,1); B = [[13,-59],[2,-9]]
      // pairs D(4.5,1/2) -> D(6.5,1/2). Both matrices lie in SL2(Z).
      const Mat2 A{2, 1, 1, 1};
      const Mat2 B{13, -59, 2, -9};
      raw.gens = {A, B, A.inverse(), B.inverse()};
      raw.disks = {Disk{-1.0, 1.0}, Disk{4.5, 0.5}, Disk{2.0, 1.0}, Disk{6.5, 0.5}};
      break;
    }
    case SurfaceDescription::Kind::Explicit: {
      const std::size_t nd = d.disks.size();
      if (nd == 0 || nd % 2 != 0) {
        throw ConfigError("explicit data needs 2m disks");
      }
      const std::size_t m = nd / 2;
      raw.disks = d.disks;
      if (d.matrices.size() == m) {
        raw.gens = d.matrices;
        raw.gens.resize(nd);
        for (std::size_t j = 0; j < m; ++j) raw.gens[j + m] = d.matrices[j].inverse();
      } else if (d.matrices.size() == nd) {
        raw.gens = d.matrices;
      } else {
        throw ConfigError("explicit data needs m or 2m matrices");
      }
      break;
    }
  }
  return raw;
}

void validate(SchottkyData& s) {
  const int k = s.alphabet();
  for (int j = 0; j < k; ++j) {
    if (s.disks[j].radius <= 0.0) {
      throw ConfigError("disk radius must be positive");
    }
    if (std::abs(s.generators[j].det() - 1.0) > kDetTol) {
      throw NonUnitDeterminant("generator " + std::to_string(j) +
                               " has determinant " +
                               std::to_string(s.generators[j].det()));
    }
  }
  // Exact inverse pairing.
  for (int j = 0; j < k; ++j) {
    const Mat2 p = s.generators[s.inverse_index(j)] * s.generators[j];
    const double err = std::max({std::abs(p.a - 1.0), std::abs(p.b),
                                 std::abs(p.c), std::abs(p.d - 1.0)});
    if (err > kInverseTol) {
      throw MappingMismatch("generator " + std::to_string(j + s.m) +
                            " is not the inverse of generator " + std::to_string(j));
    }
  }
  // Pairwise disjoint closed disks.
  for (int i = 0; i < k; ++i) {
    for (int j = i + 1; j < k; ++j) {
      const double gap = std::abs(s.disks[i].center - s.disks[j].center) -
                         (s.disks[i].radius + s.disks[j].radius);
      if (gap <= 0.0) {
        throw OverlappingDisks("closed disks " + std::to_string(i) + " and " +
                               std::to_string(j) + " intersect");
      }
    }
  }
  // Boundary circle of D_j maps onto boundary circle of D_{j+m}.
  for (int j = 0; j < k; ++j) {
    const Disk& src = s.disks[j];
    const Disk& dst = s.disks[s.inverse_index(j)];
    for (int t = 0; t < kBoundarySamples; ++t) {
      const double ang = 2.0 * std::numbers::pi * t / kBoundarySamples;
      const Complex z = Complex(src.center, 0.0) +
                        src.radius * Complex(std::cos(ang), std::sin(ang));
      const Complex w = mobius_apply(s.generators[j], z);
      const double dist = std::abs(w - Complex(dst.center, 0.0));
      if (std::abs(dist - dst.radius) > kMappingTol * std::max(1.0, dst.radius)) {
        throw MappingMismatch("generator " + std::to_string(j) +
                              " does not carry boundary of disk " +
                              std::to_string(j) + " to boundary of disk " +
                              std::to_string(s.inverse_index(j)));
      }
    }
  }
  // Branch table: for every letter i and source disk j != i the image of D_j
  // under z -> c z + d must avoid the closed negative real axis after the
  // sign normalization, which for a real-centered disk means 0 lies outside.
  s.branchSign.assign(static_cast<std::size_t>(k) * k, 0.0);
  for (int i = 0; i < k; ++i) {
    const Mat2& g = s.generators[i];
    for (int j = 0; j < k; ++j) {
      if (j == i) continue;
      const double uc = g.c * s.disks[j].center + g.d;
      const double ur = std::abs(g.c) * s.disks[j].radius;
      if (std::abs(uc) <= ur) {
        throw BranchObstruction(
            "image of disk " + std::to_string(j) + " under letter " +
            std::to_string(i) + " meets the closed negative real axis");
      }
      s.branchSign[static_cast<std::size_t>(i) * k + j] = uc > 0.0 ? 1.0 : -1.0;
    }
  }
}

}  // namespace

SchottkyData build_schottky(const SurfaceDescription& description) {
  RawData raw = assemble(description);
  SchottkyData s;
  s.m = static_cast<int>(raw.disks.size()) / 2;
  s.generators = std::move(raw.gens);
  s.disks = std::move(raw.disks);
  s.description = description;
  validate(s);
  return s;
}

DerivativeResult word_derivative(const SchottkyData& s, const ReducedWord& w,
                                 Complex z, int sourceDisk) {
  if (w.empty()) return {Complex(1.0, 0.0), Complex(0.0, 0.0)};
  int disk = sourceDisk;
  if (disk < 0) {
    disk = s.disk_of(std::real(z), 1e-9);
    if (disk < 0) {
      throw BranchObstruction("word derivative evaluated outside the disk system");
    }
  }
  if (w.letters.back() == disk) {
    throw BranchObstruction("word ends in the source disk letter");
  }
  Complex logSum(0.0, 0.0);
  Complex point = z;
  for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it) {
    const int letter = *it;
    const Mat2& g = s.generators[letter];
    const double sign = s.branch_sign(letter, disk);
    const Complex u = sign * (g.c * point + g.d);
    logSum += -2.0 * std::log(u);  // principal log; u stays in the right half-plane
    point = mobius_apply(g, point);
    disk = s.inverse_index(letter);
  }
  return {std::exp(logSum), logSum};
}

Complex apply_word(const SchottkyData& s, const ReducedWord& w, Complex z) {
  Complex point = z;
  for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it) {
    point = mobius_apply(s.generators[*it], point);
  }
  return point;
}

Mat2 word_matrix(const SchottkyData& s, const ReducedWord& w) {
  Mat2 g = Mat2::identity();
  for (int letter : w.letters) g = g * s.generators[letter];
  return g;
}

double geodesic_length(const Mat2& g) {
  const double t = std::abs(g.trace()) / 2.0;
  if (t <= 1.0) {
    throw BranchObstruction("geodesic length of a non-hyperbolic element");
  }
  return 2.0 * std::acosh(t);
}

double attracting_fixed_point(const Mat2& g) {
  const double tr = g.trace();
  const double disc = tr * tr - 4.0;
  if (disc <= 0.0) {
    throw BranchObstruction("fixed point of a non-hyperbolic element");
  }
  if (g.c == 0.0) {
    // Fixed points are b/(d-a) and infinity; the finite one attracts iff |a|<|d|.
    if (std::abs(g.a) < std::abs(g.d)) return g.b / (g.d - g.a);
    throw BranchObstruction("attracting fixed point at infinity");
  }
  const double sgn = tr >= 0.0 ? 1.0 : -1.0;
  return (g.a - g.d + sgn * std::sqrt(disc)) / (2.0 * g.c);
}

std::vector<LimitPoint> limit_points(const SchottkyData& s, int depth,
                                     int perDisk) {
  if (depth < 2) throw ConfigError("limit_points needs depth >= 2");
  std::vector<LimitPoint> out;
  std::vector<int> perDiskCount(s.alphabet(), 0);
  for_each_cyclic_word(s.m, depth, [&](std::span<const int> wl) {
    const int disk = s.inverse_index(wl.front());
    if (perDiskCount[disk] >= perDisk) return;
    ReducedWord w{std::vector<int>(wl.begin(), wl.end())};
    const Mat2 g = word_matrix(s, w);
    const double x = attracting_fixed_point(g);
    const double residual = std::abs(apply_word(s, w, Complex(x, 0.0)).real() - x);
    if (residual > 1e-12) {
      throw NoConvergence("limit point fixed-point residual " +
                          std::to_string(residual));
    }
    ++perDiskCount[disk];
    out.push_back(LimitPoint{x, std::move(w), disk});
  });
  return out;
}

std::vector<PrimitiveClass> primitive_classes(const SchottkyData& s,
                                              int maxWordLength,
                                              bool mergeInverses,
                                              std::uint64_t cap) {
  auto reps = primitive_word_classes(s.m, maxWordLength, cap);
  std::vector<PrimitiveClass> out;
  out.reserve(reps.size());
  std::map<std::vector<int>, bool> seen;
  for (auto& w : reps) {
    if (mergeInverses) {
      auto inv = inverse_word(w, s.m);
      auto invCanon = canonical_rotation(inv.letters);
      if (seen.count(invCanon)) continue;
      seen[w.letters] = true;
    }
    const Mat2 g = word_matrix(s, w);
    out.push_back(PrimitiveClass{std::move(w), geodesic_length(g)});
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const PrimitiveClass& a, const PrimitiveClass& b) {
                     return a.length < b.length;
                   });
  return out;
}

ContractionReport contraction_report(const SchottkyData& s, int Nmax,
                                     int samplesPerInterval) {
  ContractionReport rep;
  rep.supDerivative.assign(Nmax, 0.0);
  rep.distortionMax = 1.0;
  for (int N = 1; N <= Nmax; ++N) {
    double sup = 0.0;
    for (int j = 0; j < s.alphabet(); ++j) {
      const Disk& dj = s.disks[j];
      std::vector<double> pts(samplesPerInterval);
      for (int t = 0; t < samplesPerInterval; ++t) {
        pts[t] = dj.left() + (dj.right() - dj.left()) * (t + 0.5) / samplesPerInterval;
      }
      for_each_word(s.m, N, WordFilter::not_ending_in(j),
                    [&](std::span<const int> wl) {
                      ReducedWord w{std::vector<int>(wl.begin(), wl.end())};
                      double lo = 0.0, hi = 0.0;
                      bool first = true;
                      for (double x : pts) {
                        const auto dv =
                            word_derivative(s, w, Complex(x, 0.0), j);
                        const double av = std::abs(dv.value);
                        if (first) {
                          lo = hi = av;
                          first = false;
                        } else {
                          lo = std::min(lo, av);
                          hi = std::max(hi, av);
                        }
                      }
                      sup = std::max(sup, hi);
                      if (lo > 0.0) {
                        rep.distortionMax = std::max(rep.distortionMax, hi / lo);
                      }
                    });
    }
    rep.supDerivative[N - 1] = sup;
  }
  // Least-squares geometric rate through log(sup_N).
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int N = 1; N <= Nmax; ++N) {
    const double x = N, y = std::log(rep.supDerivative[N - 1]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double slope = (Nmax * sxy - sx * sy) / (Nmax * sxx - sx * sx);
  rep.fittedTheta = std::exp(slope);
  return rep;
}

}  // namespace resonator
