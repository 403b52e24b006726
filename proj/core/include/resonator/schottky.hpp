#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "resonator/words.hpp"

namespace resonator {

using Complex = std::complex<double>;

// Real 2x2 matrix acting by Moebius transformations. Unit determinant is an
// invariant of everything built here; `inverse()` relies on it.
struct Mat2 {
  double a = 1.0, b = 0.0, c = 0.0, d = 1.0;

  double det() const { return a * d - b * c; }
  double trace() const { return a + d; }
  Mat2 inverse() const { return {d, -b, -c, a}; }
  Mat2 operator*(const Mat2& rhs) const {
    return {a * rhs.a + b * rhs.c, a * rhs.b + b * rhs.d,
            c * rhs.a + d * rhs.c, c * rhs.b + d * rhs.d};
  }
  static Mat2 identity() { return {}; }
};

struct Disk {
  double center = 0.0;
  double radius = 0.0;

  double left() const { return center - radius; }
  double right() const { return center + radius; }
  bool contains(Complex z, double slack = 0.0) const {
    return std::abs(z - Complex(center, 0.0)) <= radius + slack;
  }
};

// (az+b)/(cz+d). Throws PoleHit when cz+d vanishes.
Complex mobius_apply(const Mat2& g, Complex z);

// How a surface is specified. Explicit data takes m or 2m matrices (the
// missing inverses are filled in exactly); presets are built from the
// isometric-circle construction.
struct SurfaceDescription {
  enum class Kind { Explicit, Cylinder, SymmetricFunnel, Sl2zExample };
  Kind kind = Kind::Cylinder;
  // Explicit
  std::vector<Mat2> matrices;
  std::vector<Disk> disks;
  // Cylinder
  double length = 2.0;
  // SymmetricFunnel
  int m = 2;
  double separation = 4.0;

  static SurfaceDescription cylinder(double length);
  static SurfaceDescription symmetric_funnel(int m, double separation);
  // A fixed convex cocompact Schottky pair inside SL2(Z); reduction mod q
  // yields SL2(F_q) for q in {2,3,5,7}.
  static SurfaceDescription sl2z_example();
  static SurfaceDescription explicit_data(std::vector<Mat2> matrices,
                                          std::vector<Disk> disks);
  std::string label() const;
};

// Validated Schottky data: 2m unit-determinant generators pairing 2m disjoint
// real-centered disks, generator j carrying the boundary of disk j onto the
// boundary of disk j+m (indices mod 2m, 0-based). Immutable after build.
struct SchottkyData {
  int m = 1;
  std::vector<Mat2> generators;  // size 2m; generators[j+m] = generators[j]^{-1}
  std::vector<Disk> disks;       // size 2m
  SurfaceDescription description;

  // branchSign[letter * 2m + disk]: sign making letter's c*z+d positive at the
  // disk's center. Filled during validation together with the admissibility
  // check that the image of the disk under z -> c z + d misses the closed
  // negative real axis.
  std::vector<double> branchSign;

  int alphabet() const { return 2 * m; }
  int inverse_index(int j) const { return inverse_letter(j, m); }
  const Mat2& generator(int j) const { return generators[j]; }
  const Disk& disk(int j) const { return disks[j]; }
  double branch_sign(int letter, int diskIndex) const {
    return branchSign[static_cast<std::size_t>(letter) * alphabet() + diskIndex];
  }
  // Disk whose closed interval contains x, or -1.
  int disk_of(double x, double slack = 1e-12) const;
};

// Validates eagerly: unit determinants, exact inverse pairing, disjoint closed
// disks, boundary mapping at 32 sampled points (tolerance 1e-9), and branch
// admissibility for every (letter, source disk) pair.
SchottkyData build_schottky(const SurfaceDescription& description);

struct DerivativeResult {
  Complex value;     // gamma_a'(z) by the chain rule
  Complex logValue;  // branch of log gamma_a'(z); real for real z
};

// Chain-rule derivative of the word map at z with the per-letter branch
// -2 log(sign * (c z + d)). `sourceDisk` is the disk containing z; pass -1 to
// infer it. The last letter of `w` must differ from the source disk index.
DerivativeResult word_derivative(const SchottkyData& s, const ReducedWord& w,
                                 Complex z, int sourceDisk = -1);

Complex apply_word(const SchottkyData& s, const ReducedWord& w, Complex z);
Mat2 word_matrix(const SchottkyData& s, const ReducedWord& w);

// 2 arccosh(|tr|/2); requires |tr| > 2.
double geodesic_length(const Mat2& g);

// Attracting fixed point of a hyperbolic matrix (the fixed point where
// |gamma'| < 1). Throws for non-hyperbolic input.
double attracting_fixed_point(const Mat2& g);

struct LimitPoint {
  double x = 0.0;
  ReducedWord witness;  // cyclically reduced word fixing x
  int diskIndex = 0;    // x lies in I_{diskIndex}
};

// Attracting fixed points of cyclically reduced words of length `depth`,
// up to `perDisk` points per disk, each verified fixed to 1e-12.
std::vector<LimitPoint> limit_points(const SchottkyData& s, int depth,
                                     int perDisk);

struct PrimitiveClass {
  ReducedWord representative;  // cyclically reduced, minimal rotation
  double length = 0.0;         // geodesic length
};

// One entry per conjugacy class of primitive hyperbolic elements represented
// by words of length <= maxWordLength, sorted by geodesic length. With
// mergeInverses the classes of w and w^{-1} are identified; the determinant
// cross-check in the zeta module selects the unmerged convention.
std::vector<PrimitiveClass> primitive_classes(const SchottkyData& s,
                                              int maxWordLength,
                                              bool mergeInverses = false,
                                              std::uint64_t cap = kDefaultWordCap);

// Diagnostics for the uniform-hyperbolicity and bounded-distortion estimates.
struct ContractionReport {
  std::vector<double> supDerivative;  // per N = 1..Nmax, over words and sample points
  double fittedTheta = 0.0;           // geometric rate fitted to supDerivative
  double distortionMax = 0.0;         // empirical c4: max |g'(z1)/g'(z2)| within a word
};
ContractionReport contraction_report(const SchottkyData& s, int Nmax,
                                     int samplesPerInterval = 8);

}  // namespace resonator
