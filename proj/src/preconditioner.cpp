#include "maas/preconditioner.hpp"

#include <stdexcept>

namespace maas {

namespace {

std::vector<Eigen::LLT<Eigen::MatrixXd>> factor_locals(
    const SparseMat& A_free, const FreeDofMap& dofs) {
  std::vector<Eigen::LLT<Eigen::MatrixXd>> out;
  out.reserve(dofs.interior_range.size());
  for (size_t s = 0; s < dofs.interior_range.size(); ++s) {
    Eigen::MatrixXd Ai = interior_block(A_free, dofs, static_cast<int>(s));
    out.emplace_back(Ai);
    if (out.back().info() != Eigen::Success)
      throw std::runtime_error("local stiffness not positive definite on subdomain " +
                               std::to_string(s));
  }
  return out;
}

} // namespace

Preconditioner Preconditioner::reference(const SparseMat& A_free,
                                         const EnrichedCoarseBasis& basis,
                                         const FreeDofMap& dofs) {
  Preconditioner p;
  p.mode_ = Mode::Reference;
  p.n_free_ = dofs.n_free();
  p.interior_range_ = dofs.interior_range;
  p.local_solvers_ = factor_locals(A_free, dofs);
  p.Pc_ = basis.Pc;
  if (p.Pc_.cols() > 0) {
    Eigen::MatrixXd Ac(SparseMat(p.Pc_.transpose()) * (A_free * p.Pc_));
    p.coarse_llt_.compute(Ac);
    if (p.coarse_llt_.info() != Eigen::Success)
      throw std::runtime_error("coarse matrix not positive definite");
  }
  return p;
}

Preconditioner Preconditioner::blockwise(const SparseMat& A_free,
                                         const AverageOperator& avg,
                                         const std::vector<LocalEigenBasis>& bases,
                                         const FreeDofMap& dofs) {
  Preconditioner p;
  p.mode_ = Mode::Blockwise;
  p.n_free_ = dofs.n_free();
  p.interior_range_ = dofs.interior_range;
  p.local_solvers_ = factor_locals(A_free, dofs);
  p.P0_ = avg.P0;

  const int nc = static_cast<int>(avg.P0.cols());
  int total = 0;
  p.first_column_.resize(bases.size());
  p.W_.resize(bases.size());
  for (size_t s = 0; s < bases.size(); ++s) {
    p.first_column_[s] = total;
    p.W_[s] = bases[s].vectors.leftCols(bases[s].selected);
    total += bases[s].selected;
  }
  p.D_.resize(total);
  p.G_.resize(nc, total);
  for (size_t s = 0; s < bases.size(); ++s) {
    auto [ib, ie] = dofs.interior_range[s];
    for (int k = 0; k < bases[s].selected; ++k) {
      int j = p.first_column_[s] + k;
      p.D_[j] = bases[s].values[k];
      Eigen::VectorXd ext = Eigen::VectorXd::Zero(p.n_free_);
      ext.segment(ib, ie - ib) = p.W_[s].col(k);
      p.G_.col(j) = p.P0_.transpose() * (A_free * ext);
    }
  }

  Eigen::MatrixXd A00(SparseMat(p.P0_.transpose()) * (A_free * p.P0_));
  p.S_ = A00;
  if (total > 0)
    p.S_ -= p.G_ * p.D_.cwiseInverse().asDiagonal() * p.G_.transpose();
  if (nc > 0) {
    p.schur_llt_.compute(p.S_);
    if (p.schur_llt_.info() != Eigen::Success)
      throw std::runtime_error("coarse Schur complement not positive definite");
  }
  return p;
}

Eigen::VectorXd Preconditioner::restrict_W(const Eigen::VectorXd& v) const {
  Eigen::VectorXd r(D_.size());
  for (size_t s = 0; s < W_.size(); ++s) {
    auto [ib, ie] = interior_range_[s];
    int m = static_cast<int>(W_[s].cols());
    if (m > 0)
      r.segment(first_column_[s], m) =
          W_[s].transpose() * v.segment(ib, ie - ib);
  }
  return r;
}

void Preconditioner::scatter_W(const Eigen::VectorXd& c,
                               Eigen::VectorXd& out) const {
  for (size_t s = 0; s < W_.size(); ++s) {
    auto [ib, ie] = interior_range_[s];
    int m = static_cast<int>(W_[s].cols());
    if (m > 0)
      out.segment(ib, ie - ib) += W_[s] * c.segment(first_column_[s], m);
  }
}

Eigen::VectorXd Preconditioner::apply_coarse(const Eigen::VectorXd& v) const {
  if (static_cast<int>(v.size()) != n_free_)
    throw std::invalid_argument("preconditioner dimension mismatch");
  Eigen::VectorXd out = Eigen::VectorXd::Zero(n_free_);
  if (mode_ == Mode::Reference) {
    if (Pc_.cols() == 0) return out;
    Eigen::VectorXd r = Pc_.transpose() * v;
    out = Pc_ * coarse_llt_.solve(r);
    return out;
  }
  const int nc = static_cast<int>(P0_.cols());
  const int total = static_cast<int>(D_.size());
  if (nc == 0 && total == 0) return out;
  Eigen::VectorXd rW = restrict_W(v);
  Eigen::VectorXd t = total > 0 ? rW.cwiseQuotient(D_).eval() : rW;
  Eigen::VectorXd c0(nc);
  if (nc > 0) {
    Eigen::VectorXd r0 = P0_.transpose() * v;
    if (total > 0) r0 -= G_ * t;
    c0 = schur_llt_.solve(r0);
    out = P0_ * c0;
  }
  if (total > 0) {
    Eigen::VectorXd cW = rW;
    if (nc > 0) cW -= G_.transpose() * c0;
    scatter_W(cW.cwiseQuotient(D_), out);
  }
  return out;
}

Eigen::VectorXd Preconditioner::apply(const Eigen::VectorXd& v) const {
  Eigen::VectorXd out = apply_coarse(v);
  for (size_t s = 0; s < interior_range_.size(); ++s) {
    auto [ib, ie] = interior_range_[s];
    out.segment(ib, ie - ib) += local_solvers_[s].solve(v.segment(ib, ie - ib));
  }
  return out;
}

Eigen::MatrixXd Preconditioner::dense() const {
  Eigen::MatrixXd B(n_free_, n_free_);
  Eigen::VectorXd e = Eigen::VectorXd::Zero(n_free_);
  for (int j = 0; j < n_free_; ++j) {
    e[j] = 1.0;
    B.col(j) = apply(e);
    e[j] = 0.0;
  }
  return B;
}

const Eigen::MatrixXd& Preconditioner::schur() const {
  if (mode_ != Mode::Blockwise)
    throw std::logic_error("Schur complement only exists in blockwise mode");
  return S_;
}

const Eigen::MatrixXd& Preconditioner::coupling_G() const {
  if (mode_ != Mode::Blockwise)
    throw std::logic_error("coupling block only exists in blockwise mode");
  return G_;
}

const Eigen::VectorXd& Preconditioner::eigen_D() const {
  if (mode_ != Mode::Blockwise)
    throw std::logic_error("eigenvalue diagonal only exists in blockwise mode");
  return D_;
}

Eigen::MatrixXd Preconditioner::dense_R0() const {
  if (mode_ != Mode::Blockwise)
    throw std::logic_error("restriction only stored in blockwise mode");
  return Eigen::MatrixXd(SparseMat(P0_.transpose()));
}

Eigen::MatrixXd Preconditioner::dense_W() const {
  if (mode_ != Mode::Blockwise)
    throw std::logic_error("eigenvector stack only stored in blockwise mode");
  const int nc = static_cast<int>(P0_.cols());
  Eigen::MatrixXd W = Eigen::MatrixXd::Zero(D_.size(), n_free_ - nc);
  for (size_t s = 0; s < W_.size(); ++s) {
    auto [ib, ie] = interior_range_[s];
    W.block(first_column_[s], ib - nc, W_[s].cols(), ie - ib) =
        W_[s].transpose();
  }
  return W;
}

void Preconditioner::dense_coarse_blocks(Eigen::MatrixXd& B11,
                                         Eigen::MatrixXd& B12,
                                         Eigen::MatrixXd& B21,
                                         Eigen::MatrixXd& B22) const {
  if (mode_ != Mode::Blockwise)
    throw std::logic_error("coarse blocks only exist in blockwise mode");
  const int nc = static_cast<int>(P0_.cols());
  const int ni = n_free_ - nc;
  Eigen::MatrixXd P0(P0_);
  Eigen::MatrixXd Sinv =
      schur_llt_.solve(Eigen::MatrixXd::Identity(nc, nc));
  Eigen::MatrixXd W = dense_W(); // total x ni
  Eigen::MatrixXd GDinv = G_ * D_.cwiseInverse().asDiagonal();

  B11 = P0 * Sinv * P0.transpose();
  B12 = -P0 * Sinv * GDinv * W;
  B21 = B12.transpose();
  B22 = W.transpose() *
        (Eigen::MatrixXd(D_.cwiseInverse().asDiagonal()) +
         GDinv.transpose() * Sinv * GDinv) *
        W;
}

} // namespace maas
