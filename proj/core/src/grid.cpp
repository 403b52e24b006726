#include "resonator/grid.hpp"

#include <cmath>
#include <numbers>

#include "resonator/errors.hpp"

namespace resonator {

CollocationGrid::CollocationGrid(const SchottkyData& s, int nodesPerInterval)
    : M_(nodesPerInterval) {
  if (M_ < 4) throw ConfigError("collocation grid needs M >= 4");
  nodes_.resize(s.alphabet());
  for (int j = 0; j < s.alphabet(); ++j) {
    nodes_[j].resize(M_);
    for (int k = 0; k < M_; ++k) {
      // Ascending Chebyshev-Lobatto points of I_j.
      nodes_[j][k] = s.disks[j].center -
                     s.disks[j].radius * std::cos(std::numbers::pi * k / (M_ - 1));
    }
  }
  baryWeights_.resize(M_);
  for (int k = 0; k < M_; ++k) {
    baryWeights_[k] = (k % 2 == 0) ? 1.0 : -1.0;
  }
  baryWeights_.front() *= 0.5;
  baryWeights_.back() *= 0.5;
}

Eigen::VectorXd CollocationGrid::basis_row(int interval, double y) const {
  Eigen::VectorXd row = Eigen::VectorXd::Zero(M_);
  const auto& xs = nodes_[interval];
  double denom = 0.0;
  for (int k = 0; k < M_; ++k) {
    const double d = y - xs[k];
    if (std::abs(d) < 1e-14 * std::max(1.0, std::abs(y))) {
      row.setZero();
      row[k] = 1.0;
      return row;
    }
    row[k] = baryWeights_[k] / d;
    denom += row[k];
  }
  row /= denom;
  return row;
}

double CollocationGrid::interpolate(const Eigen::VectorXd& nodal, int interval,
                                    double y) const {
  const Eigen::VectorXd row = basis_row(interval, y);
  return row.dot(nodal.segment(flat_index(interval, 0), M_));
}

}  // namespace resonator
