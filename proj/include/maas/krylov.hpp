// Preconditioned conjugate gradients with a true-residual stopping test and
// two condition-number instruments: the exact dense spectrum of the
// preconditioned operator (ground truth at desk scale) and the Lanczos
// estimate accumulated from the CG coefficients.
#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <functional>
#include <string>
#include <vector>

#include "maas/assembly.hpp"

namespace maas {

struct LinearOperator {
  int n = 0;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> apply;

  static LinearOperator from(const SparseMat& A);
  static LinearOperator identity(int n);
};

struct PcgOptions {
  double tol = 5e-6;
  int max_iter = 200000;
  bool true_residual = true; // recompute b - Ax instead of the recursion
  bool relative = true;      // scale the test by ||b||
};

struct PcgResult {
  Eigen::VectorXd x;
  bool converged = false;
  int iterations = 0;
  std::vector<double> residuals; // history, starting with the initial one
  std::vector<double> alphas;    // CG step lengths
  std::vector<double> betas;     // CG direction updates
};

// Zero initial guess. Throws std::invalid_argument on dimension mismatch and
// std::runtime_error if a computed curvature p'Ap is not positive.
PcgResult pcg(const LinearOperator& A, const Eigen::VectorXd& b,
              const LinearOperator& M, const PcgOptions& opt = {});

struct SpectrumEstimate {
  double lambda_min = 0, lambda_max = 0, kappa = 0;
  std::string method;
};

// Extremal Ritz values of the Lanczos tridiagonal rebuilt from the CG
// coefficients. Requires at least one recorded iteration.
SpectrumEstimate condition_number_lanczos(const PcgResult& result);

// Exact spectrum of the preconditioned operator via the symmetric form
// L' A L with B = L L'. Refuses problems above the size cap.
SpectrumEstimate condition_number_dense(const SparseMat& A,
                                        const LinearOperator& M,
                                        int cap = 20000);

} // namespace maas
