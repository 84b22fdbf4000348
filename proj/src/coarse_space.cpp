#include "maas/coarse_space.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>

namespace maas {

AverageOperator build_average_operator(const CoarsePartition& part,
                                       const std::vector<SubdomainMesh>& meshes,
                                       const SideAssignment& sides,
                                       const BrokenNumbering& numbering,
                                       const FreeDofMap& dofs) {
  const int n_sub = part.n_subdomains();
  AverageOperator out;
  out.mu.assign(n_sub, 0.0);
  out.weight_sum_full.assign(n_sub, 0.0);

  std::vector<Eigen::Triplet<double>> trip;
  for (int d = 0; d < dofs.n_coupled(); ++d) trip.emplace_back(d, d, 1.0);

  for (int s = 0; s < n_sub; ++s) {
    // accumulate trapezoid weights of all side averages, keyed by coupled dof
    std::map<int, double> w;
    double dropped = 0.0;
    int mu = 0;
    for (int e = 0; e < 4; ++e) {
      auto iface = part.interface_on(s, static_cast<Edge>(e));
      if (!iface) continue; // outer boundary side contributes nothing
      ++mu;
      const Interface& f = part.interfaces[*iface];
      int m = sides.mortar[*iface];
      Trace tr = extract_trace(meshes[m], part, *iface);
      const int n = static_cast<int>(tr.nodes.size());
      const double len = f.length();
      for (int k = 0; k < n; ++k) {
        double seg = (k == 0 ? 0.0 : tr.s[k] - tr.s[k - 1]) +
                     (k == n - 1 ? 0.0 : tr.s[k + 1] - tr.s[k]);
        double wk = 0.5 * seg / len;
        int broken = numbering.local_to_broken[m][tr.nodes[k]];
        if (broken < 0) { // trace endpoint on the outer Dirichlet boundary
          dropped += wk;
          continue;
        }
        w[dofs.broken_to_free[broken]] += wk;
      }
    }
    out.mu[s] = mu;
    if (mu == 0) continue; // single-subdomain partition: empty coarse space
    double kept = std::accumulate(w.begin(), w.end(), 0.0,
                                  [](double a, auto& p) { return a + p.second; });
    out.weight_sum_full[s] = (kept + dropped) / mu;
    auto [ib, ie] = dofs.interior_range[s];
    for (int r = ib; r < ie; ++r)
      for (const auto& [d, wk] : w) trip.emplace_back(r, d, wk / mu);
  }

  out.P0.resize(dofs.n_free(), dofs.n_coupled());
  out.P0.setFromTriplets(trip.begin(), trip.end());
  out.P0.makeCompressed();
  return out;
}

WeightMode weight_mode_of(EnrichType t) {
  return t == EnrichType::I ? WeightMode::TypeI : WeightMode::TypeII;
}

SelectionPolicy SelectionPolicy::threshold(double tau) {
  SelectionPolicy p;
  p.kind = Kind::Threshold;
  p.tau = tau;
  return p;
}

SelectionPolicy SelectionPolicy::fixed(int m) {
  SelectionPolicy p;
  p.kind = Kind::Fixed;
  p.count = m;
  return p;
}

LocalEigenBasis solve_local_eigenproblem(const Eigen::MatrixXd& A_i,
                                         const Eigen::MatrixXd& B_i,
                                         int subdomain, EnrichType type) {
  const int n = static_cast<int>(A_i.rows());
  LocalEigenBasis out;
  out.subdomain = subdomain;
  out.type = type;
  if (n == 0) return out;

  Eigen::LLT<Eigen::MatrixXd> llt(B_i);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error(
        "local weight matrix not positive definite on subdomain " +
        std::to_string(subdomain));

  // C = L^-1 A L^-T, then back-transform x = L^-T y; y orthonormal makes x
  // B-orthonormal by construction.
  Eigen::MatrixXd L = llt.matrixL();
  Eigen::MatrixXd Ct = L.triangularView<Eigen::Lower>().solve(A_i).transpose();
  Eigen::MatrixXd C = L.triangularView<Eigen::Lower>().solve(Ct);
  C = 0.5 * (C + C.transpose().eval());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(C);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("eigensolve failed on subdomain " +
                             std::to_string(subdomain));

  // The pencil guarantees lambda >= 1. Computed values carry an absolute
  // error on the order of eps * ||L^-1 A L^-T|| = eps * lambda_max, so the
  // slack must scale with lambda_max once the contrast is large (observed
  // -1.1e-10 at lambda_max ~ 8e5); 1e-10 remains the floor for well-scaled
  // pencils.
  const double lmax = es.eigenvalues()(n - 1);
  const double slack =
      std::max(1e-10, 32.0 * std::numeric_limits<double>::epsilon() *
                          std::max(1.0, lmax));
  if (es.eigenvalues()(0) < 1.0 - slack) {
    char msg[160];
    std::snprintf(msg, sizeof msg,
                  "pencil eigenvalue %.6e below 1 on subdomain %d; "
                  "coefficient minima inconsistent with the stiffness",
                  es.eigenvalues()(0), subdomain);
    throw std::runtime_error(msg);
  }

  Eigen::MatrixXd X =
      L.transpose().triangularView<Eigen::Upper>().solve(es.eigenvectors());
  out.values = es.eigenvalues().reverse();
  out.vectors = X.rowwise().reverse();
  return out;
}

int select_enrichment(LocalEigenBasis& basis, const SelectionPolicy& policy) {
  const int n = static_cast<int>(basis.values.size());
  int m = 0;
  switch (policy.kind) {
    case SelectionPolicy::Kind::Threshold:
      while (m < n && basis.values[m] > policy.tau) ++m;
      break;
    case SelectionPolicy::Kind::Fixed:
      if (policy.count < 0)
        throw std::invalid_argument("negative enrichment count");
      m = std::min(policy.count, n);
      break;
  }
  basis.selected = m;
  return m;
}

Eigen::MatrixXd interior_block(const SparseMat& A_free, const FreeDofMap& dofs,
                               int subdomain) {
  auto [b, e] = dofs.interior_range[subdomain];
  return Eigen::MatrixXd(A_free.block(b, b, e - b, e - b));
}

std::vector<LocalEigenBasis> solve_all_eigenproblems(
    const CoarsePartition& part, const std::vector<SubdomainMesh>& meshes,
    const CoefficientField& field, const BrokenNumbering& numbering,
    const FreeDofMap& dofs, const SparseMat& A_free, EnrichType type) {
  SparseMat B_broken =
      assemble_stiffness(numbering, meshes, field, weight_mode_of(type));

  std::vector<LocalEigenBasis> out;
  out.reserve(meshes.size());
  for (int s = 0; s < part.n_subdomains(); ++s) {
    const auto& mesh = meshes[s];
    const int n_i = static_cast<int>(mesh.interior_nodes.size());
    // interior nodes in the broken numbering, with their interior position
    std::map<int, int> pos;
    for (int k = 0; k < n_i; ++k)
      pos[numbering.local_to_broken[s][mesh.interior_nodes[k]]] = k;

    Eigen::MatrixXd B_i = Eigen::MatrixXd::Zero(n_i, n_i);
    auto [rb, re] = numbering.sub_range[s];
    for (int col = rb; col < re; ++col) {
      auto pc = pos.find(col);
      if (pc == pos.end()) continue;
      for (SparseMat::InnerIterator it(B_broken, col); it; ++it) {
        auto pr = pos.find(static_cast<int>(it.row()));
        if (pr != pos.end()) B_i(pr->second, pc->second) = it.value();
      }
    }
    out.push_back(
        solve_local_eigenproblem(interior_block(A_free, dofs, s), B_i, s, type));
  }
  return out;
}

EnrichedCoarseBasis build_enriched_basis(const AverageOperator& avg,
                                         const std::vector<LocalEigenBasis>& bases,
                                         const FreeDofMap& dofs,
                                         const SparseMat& A_free) {
  EnrichedCoarseBasis out;
  out.n_coupled = static_cast<int>(avg.P0.cols());
  out.first_column.resize(bases.size());
  out.selected_count.resize(bases.size());
  int total = 0;
  for (size_t s = 0; s < bases.size(); ++s) {
    out.first_column[s] = total;
    out.selected_count[s] = bases[s].selected;
    total += bases[s].selected;
  }
  out.total_selected = total;
  out.eigenvalues.resize(total);

  std::vector<Eigen::Triplet<double>> trip;
  for (int c = 0; c < avg.P0.outerSize(); ++c)
    for (SparseMat::InnerIterator it(avg.P0, c); it; ++it)
      trip.emplace_back(static_cast<int>(it.row()), c, it.value());
  for (size_t s = 0; s < bases.size(); ++s) {
    auto [ib, ie] = dofs.interior_range[s];
    for (int k = 0; k < bases[s].selected; ++k) {
      int col = out.n_coupled + out.first_column[s] + k;
      out.eigenvalues[out.first_column[s] + k] = bases[s].values[k];
      for (int r = 0; r < ie - ib; ++r)
        trip.emplace_back(ib + r, col, bases[s].vectors(r, k));
    }
  }
  out.Pc.resize(dofs.n_free(), out.n_coupled + total);
  out.Pc.setFromTriplets(trip.begin(), trip.end());
  out.Pc.makeCompressed();

  // numerical-rank check of the coarse Gram matrix
  SparseMat G_s = SparseMat(out.Pc.transpose()) * (A_free * out.Pc);
  Eigen::MatrixXd G(G_s);
  Eigen::LDLT<Eigen::MatrixXd> ldlt(G);
  const auto& d = ldlt.vectorD();
  if (ldlt.info() != Eigen::Success ||
      (d.size() > 0 && d.minCoeff() <= 1e-12 * d.maxCoeff())) {
    // trace the worst pivot back to an original column, then to a subdomain
    int n = static_cast<int>(G.rows());
    std::vector<int> orig(n);
    std::iota(orig.begin(), orig.end(), 0);
    const auto& tr = ldlt.transpositionsP().indices();
    for (int i = 0; i < n; ++i) std::swap(orig[i], orig[tr[i]]);
    int k;
    d.minCoeff(&k);
    int col = orig[k];
    std::string where = "the base coarse block";
    if (col >= out.n_coupled) {
      int ec = col - out.n_coupled;
      for (size_t s = 0; s < bases.size(); ++s)
        if (ec >= out.first_column[s] &&
            ec < out.first_column[s] + out.selected_count[s])
          where = "subdomain " + std::to_string(s);
    }
    throw std::runtime_error(
        "coarse basis is numerically rank deficient near " + where +
        "; an enriched vector likely replicates the interior average");
  }
  return out;
}

void write_spectra_csv(const std::vector<LocalEigenBasis>& bases,
                       const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw std::runtime_error("cannot open " + path);
  std::fprintf(f, "subdomain,index,eigenvalue,selected\n");
  for (const auto& b : bases)
    for (int k = 0; k < b.values.size(); ++k)
      std::fprintf(f, "%d,%d,%.17g,%d\n", b.subdomain, k, b.values[k],
                   k < b.selected ? 1 : 0);
  std::fclose(f);
}

} // namespace maas
