#include "maas/assembly.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

namespace maas {

BrokenNumbering build_broken_numbering(const CoarsePartition& part,
                                       const std::vector<SubdomainMesh>& meshes) {
  (void)part;
  BrokenNumbering num;
  num.local_to_broken.resize(meshes.size());
  num.sub_range.resize(meshes.size());
  int next = 0;
  const double tol = 1e-12;
  for (size_t s = 0; s < meshes.size(); ++s) {
    const auto& m = meshes[s];
    num.local_to_broken[s].assign(m.n_nodes(), -1);
    int begin = next;
    for (int v = 0; v < m.n_nodes(); ++v) {
      auto [x, y] = m.nodes[v];
      bool outer = std::abs(x) < tol || std::abs(x - 1.0) < tol ||
                   std::abs(y) < tol || std::abs(y - 1.0) < tol;
      if (!outer) num.local_to_broken[s][v] = next++;
    }
    num.sub_range[s] = {begin, next};
  }
  num.total = next;
  return num;
}

Eigen::Matrix3d element_stiffness(const std::array<double, 2>& a,
                                  const std::array<double, 2>& b,
                                  const std::array<double, 2>& c, double alpha) {
  double det = (b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]);
  if (!(det > 0))
    throw std::invalid_argument("element_stiffness: degenerate or flipped triangle");
  // gradient of hat i is (bi, ci) / det
  double bx[3] = {b[1] - c[1], c[1] - a[1], a[1] - b[1]};
  double cy[3] = {c[0] - b[0], a[0] - c[0], b[0] - a[0]};
  Eigen::Matrix3d K;
  double scale = alpha / (2.0 * det); // alpha * |tau| / det^2, |tau| = det/2
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) {
      double v = scale * (bx[i] * bx[j] + cy[i] * cy[j]);
      K(i, j) = v;
      K(j, i) = v;
    }
  return K;
}

SparseMat assemble_stiffness(const BrokenNumbering& numbering,
                             const std::vector<SubdomainMesh>& meshes,
                             const CoefficientField& field, WeightMode mode) {
  std::vector<double> mins;
  if (mode == WeightMode::TypeI) mins = subdomain_minima(field);
  if (mode == WeightMode::TypeII) mins = boundary_layer_minima(field, meshes);

  std::vector<Eigen::Triplet<double>> trips;
  for (size_t s = 0; s < meshes.size(); ++s) {
    const auto& m = meshes[s];
    for (int t = 0; t < m.n_triangles(); ++t) {
      double alpha = field.alpha[s][t];
      if (mode == WeightMode::TypeI) alpha = mins[s];
      if (mode == WeightMode::TypeII && m.in_boundary_layer[t]) alpha = mins[s];
      const auto& tri = m.triangles[t];
      auto K = element_stiffness(m.nodes[tri[0]], m.nodes[tri[1]],
                                 m.nodes[tri[2]], alpha);
      for (int r = 0; r < 3; ++r) {
        int gr = numbering.local_to_broken[s][tri[r]];
        if (gr < 0) continue;
        for (int c = 0; c < 3; ++c) {
          int gc = numbering.local_to_broken[s][tri[c]];
          if (gc < 0) continue;
          trips.emplace_back(gr, gc, K(r, c));
        }
      }
    }
  }
  SparseMat A(numbering.total, numbering.total);
  A.setFromTriplets(trips.begin(), trips.end());
  return A;
}

Eigen::VectorXd assemble_load(const BrokenNumbering& numbering,
                              const std::vector<SubdomainMesh>& meshes,
                              const std::function<double(double, double)>& f) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(numbering.total);
  for (size_t s = 0; s < meshes.size(); ++s) {
    const auto& m = meshes[s];
    for (int t = 0; t < m.n_triangles(); ++t) {
      const auto& tri = m.triangles[t];
      auto a = m.nodes[tri[0]], b = m.nodes[tri[1]], c = m.nodes[tri[2]];
      double det = (b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]);
      double w = det / 6.0; // |tau| / 3
      // edge midpoints; the hat of each vertex is 1/2 on its two adjacent ones
      double mx[3] = {0.5 * (a[0] + b[0]), 0.5 * (b[0] + c[0]), 0.5 * (c[0] + a[0])};
      double my[3] = {0.5 * (a[1] + b[1]), 0.5 * (b[1] + c[1]), 0.5 * (c[1] + a[1])};
      double fv[3] = {f(mx[0], my[0]), f(mx[1], my[1]), f(mx[2], my[2])};
      double contrib[3] = {0.5 * (fv[0] + fv[2]), 0.5 * (fv[0] + fv[1]),
                           0.5 * (fv[1] + fv[2])};
      for (int l = 0; l < 3; ++l) {
        int g = numbering.local_to_broken[s][tri[l]];
        if (g >= 0) out[g] += w * contrib[l];
      }
    }
  }
  return out;
}

double default_rhs(double x, double y) {
  return 2.0 * M_PI * M_PI * std::sin(M_PI * x) * std::sin(M_PI * y);
}

void write_matrix_coo(const SparseMat& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_matrix_coo: cannot open " + path);
  char line[96];
  for (int k = 0; k < m.outerSize(); ++k)
    for (SparseMat::InnerIterator it(m, k); it; ++it) {
      std::snprintf(line, sizeof line, "%ld %ld %.17g\n",
                    static_cast<long>(it.row()), static_cast<long>(it.col()),
                    it.value());
      out << line;
    }
}

} // namespace maas
