// Additive average Schwarz preconditioner with spectral enrichment,
//   B = B_coarse + sum_i R_i' A_i^{-1} R_i,
// in two interchangeable realisations. The reference form factors the coarse
// Gram P_c' A P_c directly. The blockwise form applies the coarse solve
// through the Schur complement S = R_0 A R_0' - G D^{-1} G' with
// G = R_0 A^{(12)} W' and D the selected eigenvalues; both sides of the
// off-diagonal coarse block use the same sign, so the operator is symmetric.
#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include "maas/coarse_space.hpp"

namespace maas {

class Preconditioner {
 public:
  enum class Mode { Reference, Blockwise };

  static Preconditioner reference(const SparseMat& A_free,
                                  const EnrichedCoarseBasis& basis,
                                  const FreeDofMap& dofs);
  static Preconditioner blockwise(const SparseMat& A_free,
                                  const AverageOperator& avg,
                                  const std::vector<LocalEigenBasis>& bases,
                                  const FreeDofMap& dofs);

  Eigen::VectorXd apply(const Eigen::VectorXd& v) const;
  int rows() const { return n_free_; }
  Mode mode() const { return mode_; }

  // Coarse component only (without the local solves); used by tests.
  Eigen::VectorXd apply_coarse(const Eigen::VectorXd& v) const;

  // Dense matrix of the full operator, built by applying it to unit vectors.
  Eigen::MatrixXd dense() const;

  // Blockwise internals for the oracle comparisons.
  const Eigen::MatrixXd& schur() const;
  const Eigen::MatrixXd& coupling_G() const;
  const Eigen::VectorXd& eigen_D() const;
  Eigen::MatrixXd dense_R0() const;         // n_coupled x n_free
  Eigen::MatrixXd dense_W() const;          // total_selected x n_interior
  // The four blocks of B_C on the stacked (free, interior) space, assembled
  // from the factored Schur form.
  void dense_coarse_blocks(Eigen::MatrixXd& B11, Eigen::MatrixXd& B12,
                           Eigen::MatrixXd& B21, Eigen::MatrixXd& B22) const;

 private:
  Preconditioner() = default;

  Mode mode_ = Mode::Reference;
  int n_free_ = 0;
  std::vector<std::pair<int, int>> interior_range_;
  std::vector<Eigen::LLT<Eigen::MatrixXd>> local_solvers_;

  // reference
  SparseMat Pc_;
  Eigen::LLT<Eigen::MatrixXd> coarse_llt_;

  // blockwise
  SparseMat P0_;
  std::vector<Eigen::MatrixXd> W_; // per subdomain, n_i x m_i
  Eigen::VectorXd D_;
  Eigen::MatrixXd G_;
  Eigen::MatrixXd S_;
  Eigen::LLT<Eigen::MatrixXd> schur_llt_;
  std::vector<int> first_column_;

  Eigen::VectorXd restrict_W(const Eigen::VectorXd& v) const;
  void scatter_W(const Eigen::VectorXd& c, Eigen::VectorXd& out) const;
};

} // namespace maas
