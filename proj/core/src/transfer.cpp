#include "resonator/transfer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "resonator/errors.hpp"

namespace resonator {

TransferAssembler::TransferAssembler(const SchottkyData& s, const Twist& twist,
                                     int M)
    : surface_(std::make_shared<SchottkyData>(s)),
      twist_(twist),
      grid_(s, M) {
  if (2 * twist_.m != s.alphabet()) {
    throw ConfigError("twist alphabet does not match the Schottky data");
  }
  const int k = s.alphabet();
  size_ = k * M * twist_.dim;
  branches_.resize(static_cast<std::size_t>(k) * M);
  for (int j = 0; j < k; ++j) {
    for (int node = 0; node < M; ++node) {
      const double x = grid_.node(j, node);
      auto& list = branches_[grid_.flat_index(j, node)];
      list.reserve(k - 1);
      for (int i = 0; i < k; ++i) {
        if (i == j) continue;
        const Mat2& g = s.generators[i];
        const double u = s.branch_sign(i, j) * (g.c * x + g.d);
        Branch br;
        br.sourceDisk = j;
        br.letter = i;
        br.targetDisk = s.inverse_index(i);
        br.logDeriv = -2.0 * std::log(u);
        const double y = mobius_apply(g, Complex(x, 0.0)).real();
        br.basisRow = grid_.basis_row(br.targetDisk, y);
        list.push_back(std::move(br));
      }
    }
  }
}

Eigen::MatrixXcd TransferAssembler::assemble(Complex s) const {
  const int k = surface_->alphabet();
  const int M = grid_.nodes_per_interval();
  const int d = twist_.dim;
  Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(size_, size_);
  for (int j = 0; j < k; ++j) {
    for (int node = 0; node < M; ++node) {
      const int rowBase = (grid_.flat_index(j, node)) * d;
      for (const Branch& br : branches_[grid_.flat_index(j, node)]) {
        const Complex w = std::exp(s * br.logDeriv);
        // rho(gamma_i)^{-1} = rho of the inverse letter.
        const Eigen::MatrixXcd& repInv =
            twist_.gen[surface_->inverse_index(br.letter)];
        for (int kp = 0; kp < M; ++kp) {
          const double basis = br.basisRow[kp];
          if (basis == 0.0) continue;
          const int colBase = (grid_.flat_index(br.targetDisk, kp)) * d;
          A.block(rowBase, colBase, d, d) += (w * basis) * repInv;
        }
      }
    }
  }
  return A;
}

Eigen::MatrixXcd TransferAssembler::derivative_from(
    const Eigen::MatrixXcd& A) const {
  const int k = surface_->alphabet();
  const int M = grid_.nodes_per_interval();
  const int d = twist_.dim;
  Eigen::MatrixXcd dA = Eigen::MatrixXcd::Zero(size_, size_);
  for (int j = 0; j < k; ++j) {
    for (int node = 0; node < M; ++node) {
      const int rowBase = (grid_.flat_index(j, node)) * d;
      for (const Branch& br : branches_[grid_.flat_index(j, node)]) {
        for (int kp = 0; kp < M; ++kp) {
          if (br.basisRow[kp] == 0.0) continue;
          const int colBase = (grid_.flat_index(br.targetDisk, kp)) * d;
          dA.block(rowBase, colBase, d, d) +=
              br.logDeriv * A.block(rowBase, colBase, d, d);
        }
      }
    }
  }
  return dA;
}

Complex DetEvaluator::det(Complex s) const {
  const Eigen::MatrixXcd A = assembler_.assemble(s);
  const Eigen::MatrixXcd IA =
      Eigen::MatrixXcd::Identity(A.rows(), A.cols()) - A;
  return Eigen::PartialPivLU<Eigen::MatrixXcd>(IA).determinant();
}

DetResult DetEvaluator::det_and_derivative(Complex s) const {
  const Eigen::MatrixXcd A = assembler_.assemble(s);
  const Eigen::MatrixXcd IA =
      Eigen::MatrixXcd::Identity(A.rows(), A.cols()) - A;
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(IA);
  DetResult r;
  r.det = lu.determinant();
  if (!std::isfinite(std::abs(r.det))) {
    throw SingularAtPoint("determinant overflow at the evaluation point");
  }
  if (std::abs(r.det) == 0.0) {
    throw SingularAtPoint("determinant vanishes at the evaluation point");
  }
  const Eigen::MatrixXcd dA = assembler_.derivative_from(A);
  r.logDerivative = -lu.solve(dA).trace();
  return r;
}

Complex fredholm_det(const SchottkyData& s, Complex point, const Twist& twist,
                     int M) {
  return DetEvaluator(s, twist, M).det(point);
}

Complex det_log_derivative(const SchottkyData& s, Complex point,
                           const Twist& twist, int M) {
  return DetEvaluator(s, twist, M).det_and_derivative(point).logDerivative;
}

namespace {

// Interpolates a flat nodal vector of V-valued samples at a point of an
// interval.
Eigen::VectorXcd interpolate_vector(const CollocationGrid& grid,
                                    const Eigen::VectorXcd& flat, int dim,
                                    int interval, double y) {
  const Eigen::VectorXd row = grid.basis_row(interval, y);
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(dim);
  const int M = grid.nodes_per_interval();
  for (int k = 0; k < M; ++k) {
    out += row[k] * flat.segment((grid.flat_index(interval, k)) * dim, dim);
  }
  return out;
}

}  // namespace

EigenfunctionSample unit_eigenfunction(const SchottkyData& s, Complex s0,
                                       const Twist& twist, int M,
                                       double threshold,
                                       double maxEigenDistance) {
  const TransferAssembler assembler(s, twist, M);
  const Eigen::MatrixXcd A = assembler.assemble(s0);
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(A);
  if (es.info() != Eigen::Success) {
    throw NoConvergence("transfer matrix eigensolve failed");
  }
  int best = 0;
  double bestDist = std::numeric_limits<double>::infinity();
  for (int i = 0; i < es.eigenvalues().size(); ++i) {
    const double dist = std::abs(es.eigenvalues()[i] - Complex(1.0, 0.0));
    if (dist < bestDist) {
      bestDist = dist;
      best = i;
    }
  }
  if (bestDist > maxEigenDistance) {
    throw NoUnitEigenvalue("closest eigenvalue is " + std::to_string(bestDist) +
                           " away from 1");
  }
  Eigen::VectorXcd F = es.eigenvectors().col(best);
  const double residual = (A * F - F).norm() / F.norm();
  if (residual > threshold) {
    throw NoUnitEigenvalue("unit-eigenfunction residual " +
                           std::to_string(residual) + " exceeds threshold");
  }
  // Gauge: max node norm 1, leading component real positive.
  const int d = twist.dim;
  const int nodes = assembler.grid().intervals() * M;
  int maxNode = 0;
  double maxNorm = 0.0;
  for (int t = 0; t < nodes; ++t) {
    const double nn = F.segment(t * d, d).norm();
    if (nn > maxNorm) {
      maxNorm = nn;
      maxNode = t;
    }
  }
  if (maxNorm == 0.0) throw NoUnitEigenvalue("eigenvector identically zero");
  F /= maxNorm;
  int lead = 0;
  F.segment(maxNode * d, d).cwiseAbs().maxCoeff(&lead);
  const Complex pivot = F[maxNode * d + lead];
  F *= std::abs(pivot) / pivot;

  EigenfunctionSample sample;
  sample.s = s0;
  sample.M = M;
  sample.dim = d;
  sample.values = F;
  const RpfData rpf = rpf_data(s, s0.real(), M);
  sample.pressureEigenvalue = rpf.eigenvalue;
  sample.phi = rpf.eigenfunction;
  sample.normalizedValues = F;
  for (int t = 0; t < nodes; ++t) {
    sample.normalizedValues.segment(t * d, d) /= rpf.eigenfunction[t];
  }
  sample.residual = residual;
  return sample;
}

double convexity_identity_check(const SchottkyData& s, const Twist& twist,
                                const EigenfunctionSample& sample, int N,
                                const std::vector<LimitPoint>& points) {
  const CollocationGrid grid(s, sample.M);
  const int d = sample.dim;
  const double sigma = sample.s.real();
  const double t = sample.s.imag();
  const double eP = sample.pressureEigenvalue;

  auto phi_at = [&](int disk, double y) {
    return grid.interpolate(sample.phi, disk, y);
  };
  auto f_at = [&](int disk, double y) {
    return Eigen::VectorXcd(
        interpolate_vector(grid, sample.values, d, disk, y) / phi_at(disk, y));
  };

  // Evaluation points: the node maximizing ||f|| plus up to 10 limit points.
  struct Point {
    int disk;
    double x;
  };
  std::vector<Point> evalPoints;
  {
    int bestNode = 0;
    double bestNorm = -1.0;
    const int nodes = grid.total_nodes();
    for (int node = 0; node < nodes; ++node) {
      const double nn = sample.normalizedValues.segment(node * d, d).norm();
      if (nn > bestNorm) {
        bestNorm = nn;
        bestNode = node;
      }
    }
    evalPoints.push_back(
        {bestNode / sample.M, grid.node(bestNode / sample.M, bestNode % sample.M)});
  }
  for (std::size_t i = 0; i < points.size() && i < 10; ++i) {
    evalPoints.push_back({points[i].diskIndex, points[i].x});
  }

  double supF = 0.0;
  for (int node = 0; node < grid.total_nodes(); ++node) {
    supF = std::max(supF, sample.normalizedValues.segment(node * d, d).norm());
  }

  double worst = 0.0;
  const double scale = std::pow(eP, N);
  for (const Point& p : evalPoints) {
    const double phiX = phi_at(p.disk, p.x);
    const Eigen::VectorXcd lhs = f_at(p.disk, p.x) / scale;
    Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(d);
    for_each_word(s.m, N, WordFilter::not_ending_in(p.disk),
                  [&](std::span<const int> wl) {
                    const ReducedWord w{std::vector<int>(wl.begin(), wl.end())};
                    const auto dv =
                        word_derivative(s, w, Complex(p.x, 0.0), p.disk);
                    const double gx = apply_word(s, w, Complex(p.x, 0.0)).real();
                    const int targetDisk = s.inverse_index(wl.front());
                    const double weight = phi_at(targetDisk, gx) *
                                          std::exp(sigma * dv.logValue.real()) /
                                          (phiX * scale);
                    const Complex phase =
                        std::exp(Complex(0.0, t * dv.logValue.real()));
                    rhs += weight * phase *
                           (twist.word(w).adjoint() * f_at(targetDisk, gx));
                  });
    worst = std::max(worst, (lhs - rhs).norm() / std::max(supF / scale, 1e-300));
  }
  return worst;
}

SeminormReport seminorm_diagnostics(const SchottkyData& s,
                                    const EigenfunctionSample& sample,
                                    const std::vector<LimitPoint>& points) {
  if (points.size() < 100) {
    throw ConfigError("seminorm diagnostics needs >= 100 limit points");
  }
  const CollocationGrid grid(s, sample.M);
  const int d = sample.dim;
  std::vector<std::vector<std::pair<double, Eigen::VectorXcd>>> perDisk(
      s.alphabet());
  SeminormReport rep;
  for (const auto& p : points) {
    Eigen::VectorXcd f =
        interpolate_vector(grid, sample.values, d, p.diskIndex, p.x) /
        grid.interpolate(sample.phi, p.diskIndex, p.x);
    rep.supNorm = std::max(rep.supNorm, f.norm());
    perDisk[p.diskIndex].emplace_back(p.x, std::move(f));
  }
  for (const auto& pts : perDisk) {
    for (std::size_t i = 0; i < pts.size(); ++i) {
      for (std::size_t j = i + 1; j < pts.size(); ++j) {
        const double dx = std::abs(pts[i].first - pts[j].first);
        if (dx < 1e-13) continue;
        rep.seminorm = std::max(
            rep.seminorm, (pts[i].second - pts[j].second).norm() / dx);
      }
    }
  }
  rep.ratio = rep.supNorm > 0.0 ? rep.seminorm / rep.supNorm : 0.0;
  return rep;
}

double normalized_identity_residual(const SchottkyData& s, double sigma,
                                    int M) {
  const CollocationGrid grid(s, M);
  const RpfData rpf = rpf_data(s, sigma, M);
  const Eigen::MatrixXd A = real_transfer_matrix(s, grid, sigma);
  const Eigen::VectorXd lhs =
      (A * rpf.eigenfunction).cwiseQuotient(rpf.eigenfunction) /
      rpf.eigenvalue;
  return (lhs - Eigen::VectorXd::Ones(lhs.size())).cwiseAbs().maxCoeff();
}

}  // namespace resonator
