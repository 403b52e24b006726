#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "resonator/grid.hpp"
#include "resonator/schottky.hpp"

namespace resonator {

struct PressureProfile {
  enum class Method { Eigenvalue, OrbitSum };
  double sigma = 0.0;
  double value = 0.0;
  Method method = Method::Eigenvalue;
  int resolution = 0;  // nodes M, or orbit period n
};

// Leading eigendata of the untwisted transfer matrix at real sigma.
// The eigenfunction is gauged by phi(first node) = 1.
struct RpfData {
  double sigma = 0.0;
  double eigenvalue = 0.0;  // e^{P(sigma)}
  Eigen::VectorXd eigenfunction;
  double spectralGapRatio = 0.0;  // |second eigenvalue| / leading
  double pressure() const { return std::log(eigenvalue); }
};

// Collocation matrix of the untwisted operator at real sigma.
Eigen::MatrixXd real_transfer_matrix(const SchottkyData& s,
                                     const CollocationGrid& grid, double sigma);

// P(sigma) = log of the leading eigenvalue, by power iteration with a
// deflation check of the subleading modulus.
PressureProfile pressure_eigen(const SchottkyData& s, double sigma, int M);

RpfData rpf_data(const SchottkyData& s, double sigma, int M);

// (1/n) log sum over period-n points of |(T^n)'|^{-sigma}; periodic points are
// enumerated as cyclically reduced words of length n. Independent oracle for
// pressure_eigen.
PressureProfile pressure_orbit_sum(const SchottkyData& s, double sigma, int n);

struct DimensionTrace {
  std::vector<std::pair<double, double>> bracketTrace;  // (sigma, P(sigma))
  double delta = 0.0;
};

// Root of sigma -> P(sigma) on [0,1]: bisection to 1e-3, then secant to tol.
// For m = 1 the pressure is -sigma*l and the root is 0.
double hausdorff_dimension(const SchottkyData& s, double tol, int M = 24,
                           DimensionTrace* trace = nullptr);

// Normalized branch weights w_{a,sigma}(x) over W_N^j for x in I_j, in
// lexicographic word order. They are positive and sum to 1.
std::vector<std::pair<ReducedWord, double>> weights(
    const SchottkyData& s, const RpfData& rpf, const CollocationGrid& grid,
    const LimitPoint& x, int N);

// Measured constant of the pressure estimate: the ratio
// (sum_j sum_{a in W_N^j} ||gamma_a'||_inf^sigma) / e^{N P(sigma)}.
std::vector<double> pressure_ratio_diagnostic(const SchottkyData& s,
                                              double sigma, int Nmax, int M);

}  // namespace resonator
