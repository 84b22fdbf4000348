#include "maas/mortar.hpp"

#include <Eigen/LU>
#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace maas {

namespace {

// piecewise-linear interpolation of nodal values v on breakpoints t
double pl_interp(const std::vector<double>& t, const std::vector<double>& v,
                 double x) {
  if (x <= t.front()) return v.front();
  if (x >= t.back()) return v.back();
  auto it = std::upper_bound(t.begin(), t.end(), x);
  size_t j = static_cast<size_t>(it - t.begin());
  double w = (x - t[j - 1]) / (t[j] - t[j - 1]);
  return (1 - w) * v[j - 1] + w * v[j];
}

} // namespace

Trace extract_trace(const SubdomainMesh& mesh, const CoarsePartition& part,
                    int iface) {
  Edge e = edge_of_interface(part, mesh.subdomain, iface);
  const Interface& f = part.interfaces.at(iface);
  Trace tr;
  tr.nodes = mesh.edge_nodes[e];
  tr.s.resize(tr.nodes.size());
  int coord = f.axis == 0 ? 1 : 0; // vertical interfaces run along y
  for (size_t k = 0; k < tr.nodes.size(); ++k)
    tr.s[k] = mesh.nodes[tr.nodes[k]][coord];
  return tr;
}

double test_function_value(const std::vector<double>& t, int i, double x) {
  int n_s = static_cast<int>(t.size()) - 2;
  std::vector<double> v(t.size(), 0.0);
  v[i] = 1.0;
  if (i == 1) v[0] = 1.0;
  if (i == n_s) v[n_s + 1] = 1.0;
  return pl_interp(t, v, x);
}

double hat_value(const std::vector<double>& t, int j, double x) {
  std::vector<double> v(t.size(), 0.0);
  v[j] = 1.0;
  return pl_interp(t, v, x);
}

MortarCoupling assemble_coupling(int iface, const Trace& mortar,
                                 const Trace& nonmortar) {
  double len = mortar.s.back() - mortar.s.front();
  if (std::abs(mortar.s.front() - nonmortar.s.front()) > 1e-9 * len ||
      std::abs(mortar.s.back() - nonmortar.s.back()) > 1e-9 * len)
    throw std::invalid_argument("assemble_coupling: traces span different segments");
  int n_m = mortar.n_interior();
  int n_s = nonmortar.n_interior();
  if (n_s < 1 || n_m < 1)
    throw std::invalid_argument("assemble_coupling: trace without interior nodes");

  std::vector<double> merged = mortar.s;
  merged.insert(merged.end(), nonmortar.s.begin(), nonmortar.s.end());
  std::sort(merged.begin(), merged.end());
  merged.erase(std::unique(merged.begin(), merged.end(),
                           [&](double a, double b) {
                             return std::abs(a - b) <= 1e-14 * len;
                           }),
               merged.end());

  MortarCoupling cp;
  cp.iface = iface;
  cp.M = Eigen::MatrixXd::Zero(n_s, n_m + 2);
  cp.S = Eigen::MatrixXd::Zero(n_s, n_s);
  cp.C = Eigen::MatrixXd::Zero(n_s, 2);

  // Both factors are linear on each merged subinterval, so two-point Gauss
  // integrates the products exactly.
  const double off = 0.5 / std::sqrt(3.0);
  for (size_t k = 0; k + 1 < merged.size(); ++k) {
    double a = merged[k], b = merged[k + 1];
    double h = b - a, mid = 0.5 * (a + b);
    double pts[2] = {mid - off * h, mid + off * h};
    for (double x : pts) {
      double w = 0.5 * h;
      for (int i = 1; i <= n_s; ++i) {
        double psi = w * test_function_value(nonmortar.s, i, x);
        if (psi == 0.0) continue;
        for (int j = 0; j <= n_m + 1; ++j)
          cp.M(i - 1, j) += psi * hat_value(mortar.s, j, x);
        for (int j = 1; j <= n_s; ++j)
          cp.S(i - 1, j - 1) += psi * hat_value(nonmortar.s, j, x);
        cp.C(i - 1, 0) += psi * hat_value(nonmortar.s, 0, x);
        cp.C(i - 1, 1) += psi * hat_value(nonmortar.s, n_s + 1, x);
      }
    }
  }

  Eigen::FullPivLU<Eigen::MatrixXd> lu(cp.S);
  if (!lu.isInvertible())
    throw std::runtime_error("assemble_coupling: singular cross-mass matrix on interface " +
                             std::to_string(iface));
  cp.elim_m = lu.solve(cp.M);
  cp.elim_c = lu.solve(cp.C);
  return cp;
}

FreeDofMap classify_dofs(const CoarsePartition& part,
                         const std::vector<SubdomainMesh>& meshes,
                         const SideAssignment& sides,
                         const BrokenNumbering& numbering) {
  FreeDofMap dofs;
  dofs.broken_to_free.assign(numbering.total, -1);
  dofs.interior_range.resize(meshes.size());
  dofs.mortar_dofs.resize(part.interfaces.size());

  // corner dofs: one per cross point, in cross-point order
  dofs.n_corner = static_cast<int>(part.cross_points.size());
  dofs.corner_dof.resize(dofs.n_corner);
  for (const auto& c : part.cross_points) {
    dofs.corner_dof[c.id] = c.id;
    // local corner of each adjacent subdomain: NE, NW, SE, SW of the
    // (SW, SE, NW, NE) neighbours respectively
    const int corner_idx[4] = {2, 3, 1, 0};
    for (int k = 0; k < 4; ++k) {
      const auto& m = meshes[c.subdomains[k]];
      int b = numbering.local_to_broken[c.subdomains[k]][m.corner_nodes[corner_idx[k]]];
      if (b < 0) throw std::logic_error("classify_dofs: cross point on the outer boundary");
      dofs.broken_to_free[b] = c.id;
    }
  }

  int next = dofs.n_corner;
  for (const auto& f : part.interfaces) {
    int ms = sides.mortar[f.id];
    Trace tm = extract_trace(meshes[ms], part, f.id);
    auto& list = dofs.mortar_dofs[f.id];
    for (int i = 1; i <= tm.n_interior(); ++i) {
      int b = numbering.local_to_broken[ms][tm.nodes[i]];
      if (b < 0) throw std::logic_error("classify_dofs: mortar trace node on the outer boundary");
      dofs.broken_to_free[b] = next;
      list.push_back(next);
      ++next;
    }
  }
  dofs.n_mortar = next - dofs.n_corner;

  for (size_t s = 0; s < meshes.size(); ++s) {
    int begin = next;
    for (int v : meshes[s].interior_nodes) {
      int b = numbering.local_to_broken[s][v];
      dofs.broken_to_free[b] = next++;
    }
    dofs.interior_range[s] = {begin, next};
  }
  dofs.n_interior = next - dofs.n_corner - dofs.n_mortar;

  dofs.free_class.resize(dofs.n_free());
  for (int d = 0; d < dofs.n_free(); ++d)
    dofs.free_class[d] = d < dofs.n_corner     ? DofClass::Corner
                         : d < dofs.n_coupled() ? DofClass::Mortar
                                                : DofClass::Interior;

  // every unmapped broken node must be the interior of some nonmortar trace
  std::vector<char> slave(numbering.total, 0);
  for (const auto& f : part.interfaces) {
    int ss = sides.nonmortar[f.id];
    Trace ts = extract_trace(meshes[ss], part, f.id);
    for (int i = 1; i <= ts.n_interior(); ++i)
      slave[numbering.local_to_broken[ss][ts.nodes[i]]] = 1;
  }
  for (int b = 0; b < numbering.total; ++b)
    if ((dofs.broken_to_free[b] >= 0) == static_cast<bool>(slave[b]))
      throw std::logic_error("classify_dofs: broken node not classified exactly once");
  return dofs;
}

ConstrainedSystem build_constrained_system(const CoarsePartition& part,
                                           const std::vector<SubdomainMesh>& meshes,
                                           const SideAssignment& sides,
                                           const BrokenNumbering& numbering,
                                           const SparseMat& A_broken,
                                           const Eigen::VectorXd& f_broken) {
  ConstrainedSystem sys;
  sys.dofs = classify_dofs(part, meshes, sides, numbering);

  std::vector<Eigen::Triplet<double>> trips;
  for (int b = 0; b < numbering.total; ++b)
    if (sys.dofs.broken_to_free[b] >= 0)
      trips.emplace_back(b, sys.dofs.broken_to_free[b], 1.0);

  sys.couplings.reserve(part.interfaces.size());
  for (const auto& f : part.interfaces) {
    int ms = sides.mortar[f.id], ss = sides.nonmortar[f.id];
    Trace tm = extract_trace(meshes[ms], part, f.id);
    Trace ts = extract_trace(meshes[ss], part, f.id);
    MortarCoupling cp = assemble_coupling(f.id, tm, ts);

    int n_m = tm.n_interior(), n_s = ts.n_interior();
    for (int i = 1; i <= n_s; ++i) {
      int row = numbering.local_to_broken[ss][ts.nodes[i]];
      for (int j = 0; j <= n_m + 1; ++j) {
        int b = numbering.local_to_broken[ms][tm.nodes[j]];
        if (b < 0) continue; // mortar endpoint on the outer boundary
        trips.emplace_back(row, sys.dofs.broken_to_free[b], cp.elim_m(i - 1, j));
      }
      const int ends[2] = {0, n_s + 1};
      for (int k = 0; k < 2; ++k) {
        int b = numbering.local_to_broken[ss][ts.nodes[ends[k]]];
        if (b < 0) continue;
        trips.emplace_back(row, sys.dofs.broken_to_free[b], -cp.elim_c(i - 1, k));
      }
    }
    sys.couplings.push_back(std::move(cp));
  }

  sys.T.resize(numbering.total, sys.dofs.n_free());
  sys.T.setFromTriplets(trips.begin(), trips.end());
  sys.A = sys.T.transpose() * A_broken * sys.T;
  sys.f = sys.T.transpose() * f_broken;
  return sys;
}

} // namespace maas
