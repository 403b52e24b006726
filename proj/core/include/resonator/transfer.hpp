#pragma once

#include <Eigen/Dense>
#include <complex>
#include <memory>
#include <vector>

#include "resonator/grid.hpp"
#include "resonator/reps.hpp"
#include "resonator/schottky.hpp"
#include "resonator/thermo.hpp"

namespace resonator {

// Collocation discretization of the twisted transfer operator. The geometry
// (nodes, branch images, Lagrange rows, branch logs, representation blocks)
// is s-independent and cached once, so evaluating along contours only pays
// for the scalar powers and the LU.
class TransferAssembler {
 public:
  TransferAssembler(const SchottkyData& s, const Twist& twist, int M);

  int size() const { return size_; }
  const CollocationGrid& grid() const { return grid_; }
  const Twist& twist() const { return twist_; }
  const SchottkyData& surface() const { return *surface_; }

  Eigen::MatrixXcd assemble(Complex s) const;
  // dA/ds: every entry of A carries the branch log of its (node, letter) pair.
  Eigen::MatrixXcd derivative_from(const Eigen::MatrixXcd& A) const;

 private:
  struct Branch {
    int sourceDisk, letter, targetDisk;
    double logDeriv;           // per node: log gamma_letter'(x), real branch
    Eigen::VectorXd basisRow;  // Lagrange row at the image point
  };
  std::shared_ptr<const SchottkyData> surface_;
  Twist twist_;
  CollocationGrid grid_;
  int size_ = 0;
  std::vector<std::vector<Branch>> branches_;  // per (disk, node) flat index
};

struct DetResult {
  Complex det;
  Complex logDerivative;  // d/ds log det(I - L)
};

// Determinant of I - L_{s,rho} via LU with partial pivoting, and its
// s-derivative through -tr((I-L)^{-1} dL/ds).
class DetEvaluator {
 public:
  DetEvaluator(const SchottkyData& s, const Twist& twist, int M)
      : assembler_(s, twist, M) {}
  Complex det(Complex s) const;
  DetResult det_and_derivative(Complex s) const;
  const TransferAssembler& assembler() const { return assembler_; }

 private:
  TransferAssembler assembler_;
};

Complex fredholm_det(const SchottkyData& s, Complex point, const Twist& twist,
                     int M);
Complex det_log_derivative(const SchottkyData& s, Complex point,
                           const Twist& twist, int M);

struct EigenfunctionSample {
  Complex s;
  int M = 0;
  int dim = 1;
  Eigen::VectorXcd values;            // F at nodes, flat (disk, node, component)
  Eigen::VectorXcd normalizedValues;  // f = phi_sigma^{-1} F
  Eigen::VectorXd phi;                // phi_sigma at nodes
  double pressureEigenvalue = 0.0;    // e^{P(sigma)}
  double residual = 0.0;              // ||L F - F|| / ||F||
};

// Eigenvector for the eigenvalue closest to 1 of the discretized operator at
// a located zero s0. Throws NoUnitEigenvalue when the closest eigenvalue is
// farther than `maxEigenDistance` from 1 or the residual exceeds `threshold`.
EigenfunctionSample unit_eigenfunction(const SchottkyData& s, Complex s0,
                                       const Twist& twist, int M,
                                       double threshold,
                                       double maxEigenDistance = 0.1);

// Max relative residual of e^{-NP} f(x) = sum_a w_a(x) v_a over the max-norm
// node and the supplied limit points (first 10 are used).
double convexity_identity_check(const SchottkyData& s, const Twist& twist,
                                const EigenfunctionSample& sample, int N,
                                const std::vector<LimitPoint>& points);

struct SeminormReport {
  double seminorm = 0.0;  // empirical [f]_Lambda
  double supNorm = 0.0;   // ||f||_{inf, Lambda}
  double ratio = 0.0;
};

SeminormReport seminorm_diagnostics(const SchottkyData& s,
                                    const EigenfunctionSample& sample,
                                    const std::vector<LimitPoint>& points);

// || e^{-P} phi^{-1} L_sigma phi 1 - 1 ||_inf at the nodes (trivial twist,
// real sigma); the normalized operator fixes constants.
double normalized_identity_residual(const SchottkyData& s, double sigma, int M);

}  // namespace resonator
