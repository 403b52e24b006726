#include "resonator/zeta.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <future>
#include <limits>
#include <map>
#include <tuple>
#include <numbers>

#include "resonator/errors.hpp"
#include "resonator/thermo.hpp"

namespace resonator {

void ScanRectangle::validate() const {
  if (reMax < reMin || imMax < imMin) {
    throw ConfigError("scan rectangle is inverted");
  }
  if (gridRe < 2 || gridIm < 2) {
    throw ConfigError("scan rectangle needs grid >= 2 per axis");
  }
  if (M < 4) throw ConfigError("scan rectangle needs M >= 4");
}

Complex zeta_euler(const SchottkyData& s, Complex point, const Twist& twist,
                   int maxWordLength, int kMax, double* tailEstimate,
                   std::optional<double> knownDelta) {
  const double delta =
      knownDelta ? *knownDelta : hausdorff_dimension(s, 1e-8, 16);
  if (point.real() < 1.5 * delta + 0.5) {
    throw ConvergenceDomain("Re s below the Euler truncation heuristic");
  }
  const auto classes = primitive_classes(s, maxWordLength);
  Complex product(1.0, 0.0);
  std::vector<double> levelSum(maxWordLength + 1, 0.0);
  const Eigen::MatrixXcd id =
      Eigen::MatrixXcd::Identity(twist.dim, twist.dim);
  for (const auto& cls : classes) {
    const Eigen::MatrixXcd U = twist.word(cls.representative);
    levelSum[cls.representative.length()] +=
        twist.dim * std::exp(-point.real() * cls.length);
    for (int k = 0; k <= kMax; ++k) {
      const Complex c = std::exp(-(point + static_cast<double>(k)) * cls.length);
      if (twist.dim * std::abs(c) < 1e-18) break;  // remaining factors are 1
      if (twist.dim == 1) {
        product *= 1.0 - c * U(0, 0);
      } else {
        product *= Eigen::MatrixXcd(id - c * U).determinant();
      }
    }
  }
  if (tailEstimate != nullptr) {
    // Geometric extrapolation of the neglected levels: the level sums decay
    // like e^{L P(Re s)} with P < 0 on the convergence domain.
    double tail = 0.0;
    if (maxWordLength >= 2 && levelSum[maxWordLength - 1] > 0.0) {
      const double r = levelSum[maxWordLength] / levelSum[maxWordLength - 1];
      if (r < 1.0) {
        tail = levelSum[maxWordLength] * r / (1.0 - r);
      } else {
        throw ConvergenceDomain("length-spectrum tail is not decaying");
      }
    }
    *tailEstimate = tail;
  }
  return product;
}

namespace {

// 10-point Gauss-Legendre on [-1, 1].
constexpr std::array<double, 5> kGlNodes = {
    0.1488743389816312, 0.4333953941292472, 0.6794095682990244,
    0.8650633666889845, 0.9739065285171717};
constexpr std::array<double, 5> kGlWeights = {
    0.2955242247147529, 0.2692667193099963, 0.2190863625159820,
    0.1494513491505806, 0.0666713443086881};

struct SegmentKey {
  double ar, ai, br, bi;
  bool operator<(const SegmentKey& o) const {
    return std::tie(ar, ai, br, bi) < std::tie(o.ar, o.ai, o.br, o.bi);
  }
};

// Adaptive Gauss-Legendre edges with memoized segment integrals. During
// subdivision the children's outer edges are sub-segments of already
// integrated edges, and dyadic cut placement keeps them cache-aligned, so
// each split mostly pays for the new cut line only.
class EdgeIntegrator {
 public:
  explicit EdgeIntegrator(const DetEvaluator& eval) : eval_(eval) {}

  Complex edge(Complex a, Complex b) { return segment(a, b, 0); }

 private:
  Complex gl10(Complex a, Complex b) {
    const auto key = SegmentKey{a.real(), a.imag(), b.real(), b.imag()};
    if (const auto it = ruleCache_.find(key); it != ruleCache_.end()) {
      return it->second;
    }
    const Complex mid = (a + b) / 2.0;
    const Complex half = (b - a) / 2.0;
    Complex acc(0.0, 0.0);
    for (int i = 0; i < 5; ++i) {
      for (const double sign : {-1.0, 1.0}) {
        const Complex z = mid + sign * kGlNodes[i] * half;
        acc += kGlWeights[i] * eval_.det_and_derivative(z).logDerivative;
      }
    }
    acc *= half;
    ruleCache_.emplace(key, acc);
    return acc;
  }

  Complex segment(Complex a, Complex b, int depth) {
    const auto key = SegmentKey{a.real(), a.imag(), b.real(), b.imag()};
    if (const auto it = segmentCache_.find(key); it != segmentCache_.end()) {
      return it->second;
    }
    const Complex whole = gl10(a, b);
    const Complex mid = (a + b) / 2.0;
    const Complex refined = gl10(a, mid) + gl10(mid, b);
    Complex value;
    // Absolute floor plus a relative term: edges sweeping past many zeros
    // carry large integrals whose low digits do not affect the rounding.
    if (std::abs(refined - whole) <
        2.0 * std::numbers::pi *
            std::max(2e-3, 1e-3 * std::abs(refined) / (2.0 * std::numbers::pi))) {
      value = refined;
    } else if (depth >= 13) {
      throw ContourAmbiguity("edge integral did not stabilize");
    } else {
      value = segment(a, mid, depth + 1) + segment(mid, b, depth + 1);
    }
    segmentCache_.emplace(key, value);
    return value;
  }

  const DetEvaluator& eval_;
  std::map<SegmentKey, Complex> segmentCache_;
  std::map<SegmentKey, Complex> ruleCache_;
};

int winding_number(const DetEvaluator& eval, EdgeIntegrator& integ,
                   double reMin, double reMax, double imMin, double imMax) {
  (void)eval;
  const Complex c0(reMin, imMin), c1(reMax, imMin), c2(reMax, imMax),
      c3(reMin, imMax);
  const Complex total = integ.edge(c0, c1) + integ.edge(c1, c2) +
                        integ.edge(c2, c3) + integ.edge(c3, c0);
  const double w = (total / Complex(0.0, 2.0 * std::numbers::pi)).real();
  const double rounded = std::round(w);
  if (std::abs(w - rounded) > 0.1) {
    throw ContourAmbiguity("winding " + std::to_string(w) +
                           " is not integer-stable");
  }
  return static_cast<int>(rounded);
}

int winding_with_retry(const DetEvaluator& eval, EdgeIntegrator& integ,
                       double reMin, double reMax, double imMin, double imMax) {
  const double inflate =
      1e-4 * std::max({reMax - reMin, imMax - imMin, 1e-6});
  for (int attempt = 0;; ++attempt) {
    try {
      return winding_number(eval, integ, reMin, reMax, imMin, imMax);
    } catch (const ContourAmbiguity&) {
      if (attempt >= 5) throw;
      reMin -= inflate;
      reMax += inflate;
      imMin -= inflate;
      imMax += inflate;
    }
  }
}

struct PointKey {
  double re, im;
  bool operator<(const PointKey& o) const {
    return std::tie(re, im) < std::tie(o.re, o.im);
  }
};

// Winding numbers by phase continuation of cached determinant values. The
// wrapped argument increment of a step is exact once the absence of hidden
// full turns is certain; |d/ds log det| at the step endpoints bounds the
// local phase speed (a zero at distance ~h from a step of size h forces
// |dlog| ~ 1/h there), so steps are halved until h * |dlog| is small. This
// needs an order of magnitude fewer evaluations than edge quadrature and
// reuses cached samples heavily across the dyadic subdivision.
class PhaseWinding {
 public:
  explicit PhaseWinding(const DetEvaluator& eval) : eval_(eval) {}

  double edge(Complex a, Complex b) {
    const Sample& sa = value(a);
    const Sample& sb = value(b);
    return increment(a, sa, b, sb, 0);
  }

  int rectangle(double reMin, double reMax, double imMin, double imMax) {
    const Complex c0(reMin, imMin), c1(reMax, imMin), c2(reMax, imMax),
        c3(reMin, imMax);
    const double total =
        edge(c0, c1) + edge(c1, c2) + edge(c2, c3) + edge(c3, c0);
    const double w = total / (2.0 * std::numbers::pi);
    const double rounded = std::round(w);
    if (std::abs(w - rounded) > 0.1) {
      throw ContourAmbiguity("phase winding " + std::to_string(w) +
                             " is not integer-stable");
    }
    return static_cast<int>(rounded);
  }

 private:
  struct Sample {
    Complex det;
    double speed;  // |d/ds log det|
  };

  const Sample& value(Complex z) {
    const PointKey key{z.real(), z.imag()};
    if (const auto it = cache_.find(key); it != cache_.end()) return it->second;
    DetResult r;
    try {
      r = eval_.det_and_derivative(z);
    } catch (const SingularAtPoint&) {
      throw ContourAmbiguity("determinant vanishes on the contour");
    }
    return cache_.emplace(key, Sample{r.det, std::abs(r.logDerivative)})
        .first->second;
  }

  double increment(Complex a, const Sample& sa, Complex b, const Sample& sb,
                   int depth) {
    const double h = std::abs(b - a);
    const double darg = std::arg(sb.det / sa.det);
    if (std::abs(darg) <= 0.5 && h * std::max(sa.speed, sb.speed) <= 1.2) {
      return darg;
    }
    if (depth >= 48) {
      throw ContourAmbiguity("phase continuation did not stabilize");
    }
    const Complex mid = (a + b) / 2.0;
    const Sample& sm = value(mid);
    return increment(a, sa, mid, sm, depth + 1) +
           increment(mid, sm, b, sb, depth + 1);
  }

  const DetEvaluator& eval_;
  std::map<PointKey, Sample> cache_;
};

struct Box {
  double reMin, reMax, imMin, imMax;
  int winding;
  double diameter() const { return std::hypot(reMax - reMin, imMax - imMin); }
  Complex center() const {
    return Complex((reMin + reMax) / 2.0, (imMin + imMax) / 2.0);
  }
};

Complex newton_refine(const DetEvaluator& eval, Complex start, int multiplicity,
                      const Box& box, double tol, double* residual) {
  Complex z = start;
  const double slack = 2.0 * box.diameter() + 10.0 * tol;
  for (int it = 0; it < 80; ++it) {
    const DetResult r = eval.det_and_derivative(z);
    const Complex step =
        -static_cast<double>(multiplicity) / r.logDerivative;
    z += step;
    if (std::abs(z - box.center()) > slack) {
      throw NewtonDivergence("Newton iterate left the enclosing box");
    }
    if (std::abs(step) <= tol) {
      // Must refine a zero of THIS box; landing in a neighbour would both
      // duplicate that zero and lose this one.
      if (z.real() < box.reMin - 10.0 * tol || z.real() > box.reMax + 10.0 * tol ||
          z.imag() < box.imMin - 10.0 * tol || z.imag() > box.imMax + 10.0 * tol) {
        throw NewtonDivergence("Newton converged outside the enclosing box");
      }
      if (residual != nullptr) *residual = std::abs(eval.det(z));
      return z;
    }
  }
  throw NewtonDivergence("Newton did not reach the requested tolerance");
}

void locate_recursive(const DetEvaluator& eval, PhaseWinding& integ,
                      const Box& box, double tol, std::vector<ZeroEntry>& out,
                      int depth) {
  if (box.winding == 0) return;
  if (box.diameter() <= 100.0 * tol || depth >= 60) {
    double residual = 0.0;
    try {
      const Complex z =
          newton_refine(eval, box.center(), box.winding, box, tol, &residual);
      out.push_back(ZeroEntry{z, box.winding, residual,
                              ZeroEntry::Tag::Unclassified});
      return;
    } catch (const NewtonDivergence&) {
      if (depth >= 60) throw;
      // fall through to one more subdivision
    }
  }
  // Split along the longer side. Candidate cuts are dyadic (cache-aligned)
  // and ranked by the smallest |det| sampled on the cut line: a cut through
  // a zero of even multiplicity can integrate to a stable principal value
  // and silently split the winding between the children.
  const bool splitRe = (box.reMax - box.reMin) >= (box.imMax - box.imMin);
  const double span = splitRe ? box.reMax - box.reMin : box.imMax - box.imMin;
  constexpr double kFractions[] = {0.5, 0.4375, 0.5625, 0.375, 0.625};
  constexpr double kSamples[] = {0.125, 0.375, 0.5, 0.625, 0.875};  // dyadic
  std::vector<std::pair<double, double>> ranked;  // (-min|det|, cut)
  for (const double fr : kFractions) {
    const double cut = (splitRe ? box.reMin : box.imMin) + span * fr;
    double minDet = std::numeric_limits<double>::infinity();
    for (const double sample : kSamples) {
      const double lo = splitRe ? box.imMin : box.reMin;
      const double hi = splitRe ? box.imMax : box.reMax;
      const double other = lo + (hi - lo) * sample;
      const Complex z = splitRe ? Complex(cut, other) : Complex(other, cut);
      minDet = std::min(minDet, std::abs(eval.det(z)));
    }
    ranked.emplace_back(-minDet, cut);
  }
  // Prefer the cache-friendly halving cut unless it is clearly worse.
  std::sort(ranked.begin(), ranked.end());
  for (auto it = ranked.begin(); it != ranked.end(); ++it) {
    const double mid = (splitRe ? box.reMin : box.imMin) + span * 0.5;
    if (it->second == mid && it != ranked.begin() &&
        -it->first >= 0.25 * -ranked.front().first) {
      std::rotate(ranked.begin(), it, it + 1);
      break;
    }
  }
  for (const auto& [negScore, cut] : ranked) {
    Box first = box, second = box;
    if (splitRe) {
      first.reMax = cut;
      second.reMin = cut;
    } else {
      first.imMax = cut;
      second.imMin = cut;
    }
    try {
      first.winding = integ.rectangle(first.reMin, first.reMax, first.imMin,
                                      first.imMax);
    } catch (const ContourAmbiguity&) {
      continue;  // zero too close to the cut; take the next candidate
    }
    second.winding = box.winding - first.winding;
    if (second.winding < 0) continue;
    locate_recursive(eval, integ, first, tol, out, depth + 1);
    locate_recursive(eval, integ, second, tol, out, depth + 1);
    return;
  }
  // Every candidate failed: a zero is pinned to this box's own boundary
  // (e.g. inherited from a corrupted earlier cut). Inflate and re-count;
  // duplicates across siblings are merged by position afterwards.
  if (depth < 60) {
    Box bigger = box;
    const double pad = 0.03 * std::max(span, 10.0 * tol);
    bigger.reMin -= pad;
    bigger.reMax += pad;
    bigger.imMin -= pad;
    bigger.imMax += pad;
    bigger.winding = integ.rectangle(bigger.reMin, bigger.reMax, bigger.imMin,
                                     bigger.imMax);
    locate_recursive(eval, integ, bigger, tol, out, depth + 1);
    return;
  }
  throw ContourAmbiguity("could not place a zero-free subdivision cut");
}

}  // namespace

int count_zeros(const DetEvaluator& eval, double reMin, double reMax,
                double imMin, double imMax) {
  EdgeIntegrator integ(eval);
  return winding_with_retry(eval, integ, reMin, reMax, imMin, imMax);
}

int count_zeros(const SchottkyData& s, const ScanRectangle& rect,
                const Twist& twist, int M) {
  rect.validate();
  const DetEvaluator eval(s, twist, M);
  EdgeIntegrator integ(eval);
  return winding_with_retry(eval, integ, rect.reMin, rect.reMax, rect.imMin,
                            rect.imMax);
}

ResonanceReport locate_zeros(const SchottkyData& s, const ScanRectangle& rect,
                             const Twist& twist, int M, double tol) {
  rect.validate();
  const DetEvaluator eval(s, twist, M);
  PhaseWinding integ(eval);
  ResonanceReport report;
  report.rectangle = rect;
  report.repLabel = twist.label;
  Box root{rect.reMin, rect.reMax, rect.imMin, rect.imMax, 0};
  // Inflate the root together with its winding so the subdivision contour and
  // the reported rectangle stay consistent.
  const double inflate = 1e-4 * std::max(rect.width(), rect.height());
  for (int attempt = 0;; ++attempt) {
    try {
      root.winding = integ.rectangle(root.reMin, root.reMax, root.imMin,
                                     root.imMax);
      break;
    } catch (const ContourAmbiguity&) {
      if (attempt >= 5) throw;
      root.reMin -= inflate;
      root.reMax += inflate;
      root.imMin -= inflate;
      root.imMax += inflate;
    }
  }
  report.rectangle.reMin = root.reMin;
  report.rectangle.reMax = root.reMax;
  report.rectangle.imMin = root.imMin;
  report.rectangle.imMax = root.imMax;
  report.windingTotal = root.winding;
  if (root.winding > 0) {
    locate_recursive(eval, integ, root, tol, report.zeros, 0);
  }
  // Deduplicate zeros rediscovered across a nudged cut.
  std::sort(report.zeros.begin(), report.zeros.end(),
            [](const ZeroEntry& a, const ZeroEntry& b) {
              if (a.s.real() != b.s.real()) return a.s.real() < b.s.real();
              return a.s.imag() < b.s.imag();
            });
  std::vector<ZeroEntry> dedup;
  for (const auto& z : report.zeros) {
    if (!dedup.empty() && std::abs(dedup.back().s - z.s) <= 10.0 * tol) {
      continue;
    }
    dedup.push_back(z);
  }
  report.zeros = std::move(dedup);
  int sum = 0;
  for (const auto& z : report.zeros) sum += z.multiplicity;
  if (sum != report.windingTotal) {
    throw ContourAmbiguity("located multiplicities sum to " +
                           std::to_string(sum) + " but the winding is " +
                           std::to_string(report.windingTotal));
  }
  return report;
}

void classify_zeros(ResonanceReport& report, const ResonanceReport& base,
                    double tol) {
  for (auto& z : report.zeros) {
    z.tag = ZeroEntry::Tag::New;
    for (const auto& b : base.zeros) {
      if (std::abs(z.s - b.s) <= 10.0 * tol) {
        z.tag = ZeroEntry::Tag::Old;
        break;
      }
    }
  }
}

bool conjugation_symmetric(const ResonanceReport& report, double tol) {
  for (const auto& z : report.zeros) {
    const Complex conj = std::conj(z.s);
    if (!report.rectangle.contains(conj, tol)) continue;
    bool found = false;
    for (const auto& w : report.zeros) {
      if (std::abs(w.s - conj) <= 10.0 * tol &&
          w.multiplicity == z.multiplicity) {
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

double venkov_zograf_check(const SchottkyData& s, const GroupHom& h,
                           const std::vector<Complex>& samplePoints, int M) {
  if (h.group->order > 24) {
    throw TooLarge("regular-representation check capped at |G| <= 24");
  }
  const Twist regular = twist_from_hom(h, regular_rep(h.group));
  const auto irrepList = irreps(h.group);
  const DetEvaluator regularEval(s, regular, M);
  std::vector<DetEvaluator> irrepEvals;
  irrepEvals.reserve(irrepList.size());
  for (const auto& rho : irrepList) {
    irrepEvals.emplace_back(s, twist_from_hom(h, rho), M);
  }
  double worst = 0.0;
  for (const Complex& point : samplePoints) {
    const Complex lhs = regularEval.det(point);
    Complex rhs(1.0, 0.0);
    for (std::size_t r = 0; r < irrepList.size(); ++r) {
      const Complex dr = irrepEvals[r].det(point);
      for (int p = 0; p < irrepList[r].dim; ++p) rhs *= dr;
    }
    worst = std::max(worst, std::abs(lhs - rhs) / std::max(std::abs(rhs), 1e-300));
  }
  return worst;
}

CoverScan new_zero_scan(const SchottkyData& s, const GroupHom& h,
                        const ScanRectangle& rect, double tol, int workers) {
  rect.validate();
  CoverScan scan;
  scan.epsilon = expansion_epsilon(h);
  scan.delta = hausdorff_dimension(s, 1e-8, rect.M);
  const auto irrepList = irreps(h.group);

  scan.baseReport = locate_zeros(s, rect, trivial_twist(s.m), rect.M, tol);

  std::vector<const UnitaryRep*> nontrivial;
  for (const auto& rho : irrepList) {
    if (!rho.is_trivial()) nontrivial.push_back(&rho);
  }
  scan.irrepReports.resize(nontrivial.size());
  const int pool = std::max(1, workers);
  std::size_t next = 0;
  while (next < nontrivial.size()) {
    const std::size_t batch =
        std::min<std::size_t>(pool, nontrivial.size() - next);
    std::vector<std::future<ResonanceReport>> futures;
    for (std::size_t b = 0; b < batch; ++b) {
      const UnitaryRep* rho = nontrivial[next + b];
      futures.push_back(std::async(std::launch::async, [&, rho]() {
        return locate_zeros(s, rect, twist_from_hom(h, *rho), rect.M, tol);
      }));
    }
    for (std::size_t b = 0; b < batch; ++b) {
      scan.irrepReports[next + b] = futures[b].get();
    }
    next += batch;
  }

  double maxRe = -std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r < scan.irrepReports.size(); ++r) {
    auto& rep = scan.irrepReports[r];
    classify_zeros(rep, scan.baseReport, tol);
    for (const auto& z : rep.zeros) {
      scan.newZeros.push_back(z);
      maxRe = std::max(maxRe, z.s.real());
    }
    // Character-gap consistency for abelian-type (one-dimensional) twists.
    if (nontrivial[r]->dim == 1 && !rep.zeros.empty()) {
      Complex avg(0.0, 0.0);
      for (int j = 0; j < 2 * s.m; ++j) {
        avg += nontrivial[r]->matrix(h.image_of_letter(j))(0, 0);
      }
      avg /= 2.0 * s.m;
      if (std::abs(avg) > 1.0 - scan.epsilon + 1e-10) {
        throw ContourAmbiguity("character average violates the 1-eps bound");
      }
    }
  }
  std::sort(scan.newZeros.begin(), scan.newZeros.end(),
            [](const ZeroEntry& a, const ZeroEntry& b) {
              if (a.s.real() != b.s.real()) return a.s.real() < b.s.real();
              return a.s.imag() < b.s.imag();
            });
  scan.empiricalEta = scan.newZeros.empty() ? rect.width()
                                            : scan.delta - maxRe;
  return scan;
}

std::vector<CharacterScanEntry> character_zeta_scan(
    const SchottkyData& s, const std::vector<std::vector<double>>& thetaGrid,
    const ScanRectangle& rect, double tol, int workers) {
  rect.validate();
  const double delta = hausdorff_dimension(s, 1e-8, rect.M);
  std::vector<CharacterScanEntry> out(thetaGrid.size());
  const int pool = std::max(1, workers);
  std::size_t next = 0;
  while (next < thetaGrid.size()) {
    const std::size_t batch =
        std::min<std::size_t>(pool, thetaGrid.size() - next);
    std::vector<std::future<CharacterScanEntry>> futures;
    for (std::size_t b = 0; b < batch; ++b) {
      const auto& theta = thetaGrid[next + b];
      futures.push_back(std::async(std::launch::async, [&, theta]() {
        CharacterScanEntry entry;
        entry.theta = theta;
        entry.report =
            locate_zeros(s, rect, character_twist(s.m, theta), rect.M, tol);
        double maxRe = -std::numeric_limits<double>::infinity();
        for (const auto& z : entry.report.zeros) {
          maxRe = std::max(maxRe, z.s.real());
        }
        entry.gap = entry.report.zeros.empty() ? rect.width() : delta - maxRe;
        return entry;
      }));
    }
    for (std::size_t b = 0; b < batch; ++b) out[next + b] = futures[b].get();
    next += batch;
  }
  return out;
}

}  // namespace resonator
