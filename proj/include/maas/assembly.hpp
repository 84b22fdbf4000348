// P1 stiffness and load assembly over the broken space: the product of the
// per-subdomain spaces with homogeneous Dirichlet nodes on the outer boundary
// removed up front. Nodes on interfaces are duplicated, one copy per side;
// the stiffness is block diagonal by subdomain.
#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <functional>

#include "maas/coefficients.hpp"
#include "maas/geometry.hpp"

namespace maas {

using SparseMat = Eigen::SparseMatrix<double>;

// Coefficient used per triangle when assembling.
//   TrueAlpha: the sampled field.
//   TypeI:     the subdomain minimum everywhere.
//   TypeII:    the boundary-layer minimum on layer triangles, the field
//              elsewhere.
enum class WeightMode { TrueAlpha, TypeI, TypeII };

// Numbering of the broken space: per subdomain, local nodes in order,
// skipping nodes on the boundary of the unit square.
struct BrokenNumbering {
  std::vector<std::vector<int>> local_to_broken; // [subdomain][node], -1 if removed
  std::vector<std::pair<int, int>> sub_range;    // broken index range per subdomain
  int total = 0;
};

BrokenNumbering build_broken_numbering(const CoarsePartition& part,
                                       const std::vector<SubdomainMesh>& meshes);

// Stiffness of one triangle, alpha * |tau| * G^T G with G the P1 gradients.
Eigen::Matrix3d element_stiffness(const std::array<double, 2>& a,
                                  const std::array<double, 2>& b,
                                  const std::array<double, 2>& c, double alpha);

SparseMat assemble_stiffness(const BrokenNumbering& numbering,
                             const std::vector<SubdomainMesh>& meshes,
                             const CoefficientField& field, WeightMode mode);

// Load entries via the three-edge-midpoint rule, exact for quadratics.
Eigen::VectorXd assemble_load(const BrokenNumbering& numbering,
                              const std::vector<SubdomainMesh>& meshes,
                              const std::function<double(double, double)>& f);

// Right-hand side used throughout the experiments.
double default_rhs(double x, double y);

// Coordinate text export, one "row col value" line per stored entry.
void write_matrix_coo(const SparseMat& m, const std::string& path);

} // namespace maas
