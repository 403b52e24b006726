#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "resonator/groups.hpp"
#include "resonator/reps.hpp"
#include "resonator/schottky.hpp"
#include "resonator/transfer.hpp"

namespace resonator {

struct ScanRectangle {
  double reMin = 0.0, reMax = 0.0;
  double imMin = 0.0, imMax = 0.0;
  int gridRe = 2, gridIm = 2;
  int M = 24;

  double width() const { return reMax - reMin; }
  double height() const { return imMax - imMin; }
  bool contains(Complex s, double slack = 0.0) const {
    return s.real() >= reMin - slack && s.real() <= reMax + slack &&
           s.imag() >= imMin - slack && s.imag() <= imMax + slack;
  }
  void validate() const;
};

struct ZeroEntry {
  Complex s;
  int multiplicity = 1;
  double newtonResidual = 0.0;  // |det| at the refined zero
  enum class Tag { Unclassified, Old, New };
  Tag tag = Tag::Unclassified;
};

struct ResonanceReport {
  ScanRectangle rectangle;
  std::string repLabel;
  std::vector<ZeroEntry> zeros;  // sorted by (Re, Im)
  int windingTotal = 0;
};

// Truncated Euler product over primitive classes (inverse classes counted
// separately, the convention singled out by the Fredholm cross-check).
// `tailEstimate`, when given, receives a geometric extrapolation of the
// truncation error from the last level of the length spectrum.
Complex zeta_euler(const SchottkyData& s, Complex point, const Twist& twist,
                   int maxWordLength, int kMax,
                   double* tailEstimate = nullptr,
                   std::optional<double> knownDelta = std::nullopt);

// Number of zeros (with multiplicity) of det(I - L) inside the rectangle, by
// the argument principle with adaptive Gauss-Legendre edges. Rectangles with
// a zero too close to an edge are inflated by 1e-4 of the span and retried.
int count_zeros(const SchottkyData& s, const ScanRectangle& rect,
                const Twist& twist, int M);
int count_zeros(const DetEvaluator& eval, double reMin, double reMax,
                double imMin, double imMax);

// Zero location by recursive subdivision (multiplicity from the enclosing
// winding number) followed by Newton refinement to `tol`.
ResonanceReport locate_zeros(const SchottkyData& s, const ScanRectangle& rect,
                             const Twist& twist, int M, double tol);

// Tags zeros Old when they match a zero of the base (trivial-rep) report
// within 10*tol, New otherwise.
void classify_zeros(ResonanceReport& report, const ResonanceReport& base,
                    double tol);

// True when the zero multiset is symmetric under conjugation (as far as the
// rectangle allows); meaningful when the twist has real matrices.
bool conjugation_symmetric(const ResonanceReport& report, double tol);

// Max relative gap between the regular-representation determinant and the
// product over irreducibles with dimension multiplicities.
double venkov_zograf_check(const SchottkyData& s, const GroupHom& h,
                           const std::vector<Complex>& samplePoints, int M);

struct CoverScan {
  double epsilon = 0.0;
  double delta = 0.0;
  double empiricalEta = 0.0;
  ResonanceReport baseReport;                 // trivial rep on the same rectangle
  std::vector<ResonanceReport> irrepReports;  // nontrivial irreducibles
  std::vector<ZeroEntry> newZeros;            // union over irreps
};

// Locates the new zeros of the cover determined by `h` inside `rect`:
// by the factorization formula these are the zeros of the nontrivial
// irreducible twists. empiricalEta = delta - max Re(new zero), or the
// rectangle width when none are found.
CoverScan new_zero_scan(const SchottkyData& s, const GroupHom& h,
                        const ScanRectangle& rect, double tol,
                        int workers = 1);

struct CharacterScanEntry {
  std::vector<double> theta;
  ResonanceReport report;
  double gap = 0.0;  // delta - max Re(zero), rectangle width when empty
};

std::vector<CharacterScanEntry> character_zeta_scan(
    const SchottkyData& s, const std::vector<std::vector<double>>& thetaGrid,
    const ScanRectangle& rect, double tol, int workers = 1);

}  // namespace resonator
