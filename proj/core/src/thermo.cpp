#include "resonator/thermo.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>
#include <optional>
#include <string>

#include "resonator/errors.hpp"

namespace resonator {

namespace {

constexpr int kPowerIterBudget = 50000;
constexpr double kEigTol = 1e-14;

double letter_log_derivative(const SchottkyData& s, int letter, int sourceDisk,
                             double x) {
  const Mat2& g = s.generators[letter];
  const double u = s.branch_sign(letter, sourceDisk) * (g.c * x + g.d);
  return -2.0 * std::log(u);
}

struct PowerResult {
  double lambda = 0.0;
  Eigen::VectorXd vec;
  double residual = 0.0;
  int iterations = 0;
};

PowerResult power_iterate(const Eigen::MatrixXd& A) {
  const auto n = A.rows();
  Eigen::VectorXd v = Eigen::VectorXd::Ones(n).normalized();
  double lambda = 0.0;
  double prev = std::numeric_limits<double>::infinity();
  int it = 0;
  for (; it < kPowerIterBudget; ++it) {
    Eigen::VectorXd w = A * v;
    lambda = v.dot(w);
    const double nw = w.norm();
    if (nw == 0.0) throw NoConvergence("power iteration collapsed to zero");
    v = w / nw;
    if (std::abs(lambda - prev) <= kEigTol * std::max(1.0, std::abs(lambda))) {
      break;
    }
    prev = lambda;
  }
  if (it == kPowerIterBudget) {
    throw NoConvergence("power iteration did not converge");
  }
  PowerResult r;
  r.lambda = lambda;
  r.vec = v;
  r.residual = (A * v - lambda * v).norm();
  r.iterations = it;
  return r;
}

// Modulus of the subleading eigenvalue via power iteration on the deflated
// operator w -> Aw - lambda v (u.w)/(u.v), u the left eigenvector.
double subleading_modulus(const Eigen::MatrixXd& A, const PowerResult& right) {
  const PowerResult left = power_iterate(A.transpose());
  const Eigen::VectorXd& v = right.vec;
  const Eigen::VectorXd& u = left.vec;
  const double uv = u.dot(v);
  if (std::abs(uv) < 1e-14) return right.lambda;  // defective; report no gap
  Eigen::VectorXd w(A.rows());
  for (int i = 0; i < w.size(); ++i) w[i] = std::cos(3.7 * i + 0.3);
  w -= v * (u.dot(w) / uv);
  w.normalize();
  double mu = 0.0;
  for (int it = 0; it < 2000; ++it) {
    Eigen::VectorXd z = A * w;
    z -= v * (u.dot(z) / uv);
    const double nz = z.norm();
    if (nz < 1e-300) return 0.0;
    const double next = nz;  // |lambda_2| estimate via growth factor
    w = z / nz;
    if (it > 10 && std::abs(next - mu) <= 1e-10 * std::max(1.0, next)) {
      mu = next;
      break;
    }
    mu = next;
  }
  return mu;
}

// ---- optional on-disk memoization (RESONATOR_CACHE) ----

std::uint64_t fnv1a(std::uint64_t h, const void* data, std::size_t n) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 1099511628211ULL;
  }
  return h;
}

std::uint64_t rpf_cache_key(const SchottkyData& s, double sigma, int M) {
  std::uint64_t h = 1469598103934665603ULL;
  for (const auto& g : s.generators) {
    h = fnv1a(h, &g, sizeof(Mat2));
  }
  for (const auto& d : s.disks) {
    h = fnv1a(h, &d, sizeof(Disk));
  }
  h = fnv1a(h, &sigma, sizeof(double));
  h = fnv1a(h, &M, sizeof(int));
  return h;
}

std::optional<std::filesystem::path> cache_path(const SchottkyData& s,
                                                double sigma, int M) {
  const char* dir = std::getenv("RESONATOR_CACHE");
  if (dir == nullptr || *dir == '\0') return std::nullopt;
  char name[64];
  std::snprintf(name, sizeof(name), "rpf_%016llx.txt",
                static_cast<unsigned long long>(rpf_cache_key(s, sigma, M)));
  return std::filesystem::path(dir) / name;
}

std::optional<RpfData> load_cached(const std::filesystem::path& p, double sigma,
                                   int M, int totalNodes) {
  std::ifstream in(p);
  if (!in) return std::nullopt;
  RpfData r;
  int storedM = 0, n = 0;
  in >> r.sigma >> storedM >> r.eigenvalue >> r.spectralGapRatio >> n;
  if (!in || storedM != M || n != totalNodes || r.sigma != sigma) {
    return std::nullopt;
  }
  r.eigenfunction.resize(n);
  for (int i = 0; i < n; ++i) in >> r.eigenfunction[i];
  if (!in) return std::nullopt;
  return r;
}

void store_cached(const std::filesystem::path& p, const RpfData& r, int M) {
  std::error_code ec;
  std::filesystem::create_directories(p.parent_path(), ec);
  const auto tmp = p.string() + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) return;
    out.precision(17);
    out << r.sigma << ' ' << M << ' ' << r.eigenvalue << ' '
        << r.spectralGapRatio << ' ' << r.eigenfunction.size() << '\n';
    for (int i = 0; i < r.eigenfunction.size(); ++i) {
      out << r.eigenfunction[i] << '\n';
    }
  }
  std::filesystem::rename(tmp, p, ec);
}

}  // namespace

Eigen::MatrixXd real_transfer_matrix(const SchottkyData& s,
                                     const CollocationGrid& grid, double sigma) {
  const int k = s.alphabet();
  const int M = grid.nodes_per_interval();
  const int n = k * M;
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
  for (int j = 0; j < k; ++j) {
    for (int kk = 0; kk < M; ++kk) {
      const double x = grid.node(j, kk);
      const int row = grid.flat_index(j, kk);
      for (int i = 0; i < k; ++i) {
        if (i == j) continue;
        const int target = s.inverse_index(i);
        const double w = std::exp(sigma * letter_log_derivative(s, i, j, x));
        const double y = mobius_apply(s.generators[i], Complex(x, 0.0)).real();
        const Eigen::VectorXd basis = grid.basis_row(target, y);
        A.row(row).segment(grid.flat_index(target, 0), M) += w * basis.transpose();
      }
    }
  }
  return A;
}

PressureProfile pressure_eigen(const SchottkyData& s, double sigma, int M) {
  const RpfData r = rpf_data(s, sigma, M);
  return PressureProfile{sigma, r.pressure(), PressureProfile::Method::Eigenvalue, M};
}

RpfData rpf_data(const SchottkyData& s, double sigma, int M) {
  const CollocationGrid grid(s, M);
  const auto cachePath = cache_path(s, sigma, M);
  if (cachePath) {
    if (auto hit = load_cached(*cachePath, sigma, M, grid.total_nodes())) {
      return *hit;
    }
  }
  const Eigen::MatrixXd A = real_transfer_matrix(s, grid, sigma);
  const PowerResult pr = power_iterate(A);
  if (pr.lambda <= 0.0) {
    throw NoConvergence("leading transfer eigenvalue not positive");
  }
  RpfData r;
  r.sigma = sigma;
  r.eigenvalue = pr.lambda;
  // Gauge: phi(first node) = 1. The leading eigenvector of the positive
  // operator has one sign; normalize it to the positive representative.
  Eigen::VectorXd phi = pr.vec;
  if (phi[0] == 0.0) throw NoConvergence("eigenfunction vanishes at the gauge node");
  phi /= phi[0];
  for (int i = 0; i < phi.size(); ++i) {
    if (!(phi[i] > 0.0)) {
      throw NegativeWeight("RPF eigenfunction not positive at node " +
                           std::to_string(i));
    }
  }
  const double residual = (A * phi - pr.lambda * phi).norm();
  if (residual > 1e-9 * phi.norm()) {
    throw NoConvergence("RPF residual " + std::to_string(residual));
  }
  r.eigenfunction = phi;
  r.spectralGapRatio = subleading_modulus(A, pr) / pr.lambda;
  // Simplicity check. For m = 1 the two disk blocks decouple and share the
  // leading eigenvalue, so the check only applies to m >= 2.
  if (s.m >= 2 && r.spectralGapRatio > 1.0 - 1e-8) {
    throw NoConvergence("leading eigenvalue not simple (gap ratio " +
                        std::to_string(r.spectralGapRatio) + ")");
  }
  if (cachePath) store_cached(*cachePath, r, M);
  return r;
}

PressureProfile pressure_orbit_sum(const SchottkyData& s, double sigma, int n) {
  if (n < 1) throw ConfigError("orbit sum needs n >= 1");
  const std::uint64_t cnt = count_words(s.m, n, WordFilter::all());
  if (cnt > kDefaultWordCap) {
    throw SizeLimit("orbit sum over " + std::to_string(cnt) + " words");
  }
  double sum = 0.0;
  for_each_cyclic_word(s.m, n, [&](std::span<const int> wl) {
    Mat2 g = Mat2::identity();
    for (int letter : wl) g = g * s.generators[letter];
    const double t = std::abs(g.trace());
    const double lambda = (t + std::sqrt(t * t - 4.0)) / 2.0;
    // |(T^n)'| at the periodic point equals lambda^2.
    sum += std::pow(lambda, -2.0 * sigma);
  });
  return PressureProfile{sigma, std::log(sum) / n,
                         PressureProfile::Method::OrbitSum, n};
}

double hausdorff_dimension(const SchottkyData& s, double tol, int M,
                           DimensionTrace* trace) {
  auto P = [&](double sigma) {
    const double v = pressure_eigen(s, sigma, M).value;
    if (trace != nullptr) trace->bracketTrace.emplace_back(sigma, v);
    return v;
  };
  const double p0 = P(0.0);
  if (s.m == 1) {
    if (trace != nullptr) trace->delta = 0.0;
    return 0.0;  // P(0) = log(2m-1) = 0 forces the root at 0
  }
  double lo = 0.0, hi = 1.0;
  double plo = p0, phi = P(1.0);
  if (!(plo > 0.0) || !(phi < 0.0)) {
    throw BracketFailure("pressure does not change sign on [0,1]");
  }
  while (hi - lo > 1e-3) {
    const double mid = 0.5 * (lo + hi);
    const double pm = P(mid);
    if (pm > 0.0) {
      lo = mid;
      plo = pm;
    } else {
      hi = mid;
      phi = pm;
    }
  }
  // Secant refinement inside the bracket.
  double x0 = lo, f0 = plo, x1 = hi, f1 = phi;
  for (int it = 0; it < 80; ++it) {
    const double x2 = x1 - f1 * (x1 - x0) / (f1 - f0);
    if (!(x2 >= 0.0 && x2 <= 1.0)) break;
    if (std::abs(x2 - x1) <= tol) {
      if (trace != nullptr) trace->delta = x2;
      return x2;
    }
    x0 = x1;
    f0 = f1;
    x1 = x2;
    f1 = P(x2);
    if (f1 == 0.0) break;
  }
  if (trace != nullptr) trace->delta = x1;
  return x1;
}

std::vector<std::pair<ReducedWord, double>> weights(
    const SchottkyData& s, const RpfData& rpf, const CollocationGrid& grid,
    const LimitPoint& x, int N) {
  const int j = x.diskIndex;
  const double phiX = grid.interpolate(rpf.eigenfunction, j, x.x);
  const double scale = phiX * std::pow(rpf.eigenvalue, N);
  std::vector<std::pair<ReducedWord, double>> out;
  for_each_word(s.m, N, WordFilter::not_ending_in(j),
                [&](std::span<const int> wl) {
                  ReducedWord w{std::vector<int>(wl.begin(), wl.end())};
                  const auto dv = word_derivative(s, w, Complex(x.x, 0.0), j);
                  const double gx = apply_word(s, w, Complex(x.x, 0.0)).real();
                  const int targetDisk = s.inverse_index(wl.front());
                  const double phiG =
                      grid.interpolate(rpf.eigenfunction, targetDisk, gx);
                  const double value =
                      phiG * std::exp(rpf.sigma * dv.logValue.real()) / scale;
                  if (!(value > 0.0)) {
                    throw NegativeWeight("branch weight not positive");
                  }
                  out.emplace_back(std::move(w), value);
                });
  return out;
}

std::vector<double> pressure_ratio_diagnostic(const SchottkyData& s,
                                              double sigma, int Nmax, int M) {
  const double P = pressure_eigen(s, sigma, M).value;
  std::vector<double> ratios(Nmax, 0.0);
  constexpr int kBoundary = 12;
  for (int N = 1; N <= Nmax; ++N) {
    double total = 0.0;
    for (int j = 0; j < s.alphabet(); ++j) {
      const Disk& dj = s.disks[j];
      std::vector<Complex> samples;
      samples.reserve(kBoundary);
      for (int t = 0; t < kBoundary; ++t) {
        const double ang = 2.0 * std::numbers::pi * t / kBoundary;
        samples.emplace_back(dj.center + dj.radius * std::cos(ang),
                             dj.radius * std::sin(ang));
      }
      for_each_word(s.m, N, WordFilter::not_ending_in(j),
                    [&](std::span<const int> wl) {
                      ReducedWord w{std::vector<int>(wl.begin(), wl.end())};
                      double sup = 0.0;
                      for (const Complex& z : samples) {
                        sup = std::max(sup,
                                       std::abs(word_derivative(s, w, z, j).value));
                      }
                      total += std::pow(sup, sigma);
                    });
    }
    ratios[N - 1] = total / std::exp(N * P);
  }
  return ratios;
}

}  // namespace resonator
