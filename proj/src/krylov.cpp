#include "maas/krylov.hpp"

#include <cmath>
#include <stdexcept>

namespace maas {

LinearOperator LinearOperator::from(const SparseMat& A) {
  if (A.rows() != A.cols())
    throw std::invalid_argument("operator matrix must be square");
  return {static_cast<int>(A.rows()),
          [A](const Eigen::VectorXd& v) -> Eigen::VectorXd { return A * v; }};
}

LinearOperator LinearOperator::identity(int n) {
  return {n, [](const Eigen::VectorXd& v) { return v; }};
}

PcgResult pcg(const LinearOperator& A, const Eigen::VectorXd& b,
              const LinearOperator& M, const PcgOptions& opt) {
  if (A.n != b.size() || M.n != b.size())
    throw std::invalid_argument("pcg dimension mismatch");

  PcgResult out;
  out.x = Eigen::VectorXd::Zero(b.size());
  const double bnorm = b.norm();
  if (bnorm == 0.0) {
    out.converged = true;
    out.residuals.push_back(0.0);
    return out;
  }
  const double denom = opt.relative ? bnorm : 1.0;

  Eigen::VectorXd r = b;
  Eigen::VectorXd z = M.apply(r);
  Eigen::VectorXd p = z;
  double rz = r.dot(z);
  out.residuals.push_back(bnorm / denom);

  for (int k = 0; k < opt.max_iter; ++k) {
    Eigen::VectorXd Ap = A.apply(p);
    double pAp = p.dot(Ap);
    if (pAp <= 0.0)
      throw std::runtime_error("nonpositive curvature: operator or "
                               "preconditioner is not positive definite");
    double alpha = rz / pAp;
    out.alphas.push_back(alpha);
    out.x += alpha * p;
    r -= alpha * Ap;
    ++out.iterations;

    double res = (opt.true_residual ? (b - A.apply(out.x)).norm() : r.norm()) / denom;
    out.residuals.push_back(res);
    if (res <= opt.tol) {
      out.converged = true;
      break;
    }

    z = M.apply(r);
    double rz_next = r.dot(z);
    if (rz_next == 0.0) { // recursion hit the exact solution
      out.converged = res <= opt.tol;
      break;
    }
    double beta = rz_next / rz;
    out.betas.push_back(beta);
    p = z + beta * p;
    rz = rz_next;
  }
  return out;
}

SpectrumEstimate condition_number_lanczos(const PcgResult& result) {
  const int m = static_cast<int>(result.alphas.size());
  if (m < 1)
    throw std::invalid_argument("Lanczos estimate needs at least one iteration");

  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m, m);
  T(0, 0) = 1.0 / result.alphas[0];
  for (int k = 1; k < m; ++k) {
    T(k, k) = 1.0 / result.alphas[k] + result.betas[k - 1] / result.alphas[k - 1];
    double off = std::sqrt(result.betas[k - 1]) / result.alphas[k - 1];
    T(k - 1, k) = off;
    T(k, k - 1) = off;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T, Eigen::EigenvaluesOnly);
  SpectrumEstimate out;
  out.lambda_min = es.eigenvalues()(0);
  out.lambda_max = es.eigenvalues()(m - 1);
  out.kappa = out.lambda_max / out.lambda_min;
  out.method = "lanczos";
  return out;
}

SpectrumEstimate condition_number_dense(const SparseMat& A,
                                        const LinearOperator& M, int cap) {
  const int n = static_cast<int>(A.rows());
  if (M.n != n) throw std::invalid_argument("operator dimension mismatch");
  if (n > cap)
    throw std::runtime_error(
        "problem exceeds the dense spectrum cap (" + std::to_string(n) + " > " +
        std::to_string(cap) + "); use the Lanczos estimate");

  Eigen::MatrixXd B(n, n);
  Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
  for (int j = 0; j < n; ++j) {
    e[j] = 1.0;
    B.col(j) = M.apply(e);
    e[j] = 0.0;
  }
  B = 0.5 * (B + B.transpose().eval());
  Eigen::LLT<Eigen::MatrixXd> llt(B);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("preconditioner is not positive definite");
  Eigen::MatrixXd L = llt.matrixL();

  Eigen::MatrixXd C = L.transpose() * (A * L);
  C = 0.5 * (C + C.transpose().eval());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(C, Eigen::EigenvaluesOnly);
  SpectrumEstimate out;
  out.lambda_min = es.eigenvalues()(0);
  out.lambda_max = es.eigenvalues()(n - 1);
  if (out.lambda_min <= 0.0)
    throw std::runtime_error("preconditioned spectrum is not positive");
  out.kappa = out.lambda_max / out.lambda_min;
  out.method = "dense";
  return out;
}

} // namespace maas
