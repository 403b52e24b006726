#pragma once

#include <Eigen/Dense>
#include <vector>

#include "resonator/schottky.hpp"

namespace resonator {

// Chebyshev-Lobatto collocation nodes on each interval I_j = D_j ∩ R with
// barycentric Lagrange evaluation. Shared by the pressure/eigenfunction
// machinery and the transfer-operator discretization, so off-node values of
// phi_sigma and of eigenfunctions come from one and the same interpolant.
class CollocationGrid {
 public:
  CollocationGrid(const SchottkyData& s, int nodesPerInterval);

  int nodes_per_interval() const { return M_; }
  int intervals() const { return static_cast<int>(nodes_.size()); }
  int total_nodes() const { return intervals() * M_; }
  double node(int interval, int k) const { return nodes_[interval][k]; }
  const std::vector<double>& interval_nodes(int j) const { return nodes_[j]; }

  // Row of Lagrange basis values l_k(y) for y in interval j.
  Eigen::VectorXd basis_row(int interval, double y) const;

  // Interpolates nodal values (one scalar per grid node, blocks per interval).
  double interpolate(const Eigen::VectorXd& nodal, int interval, double y) const;

  int flat_index(int interval, int k) const { return interval * M_ + k; }

 private:
  int M_;
  std::vector<std::vector<double>> nodes_;
  std::vector<double> baryWeights_;
};

}  // namespace resonator
