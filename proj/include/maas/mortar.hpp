// Mortar coupling on nonmatching interfaces. Each interface has a mortar
// side, whose trace values stay free, and a nonmortar side, whose interior
// trace values (slaves) are eliminated through the weak continuity condition
//   \int_gamma (u_mortar - u_nonmortar) psi ds = 0   for all test psi.
// The test space has one function per slave node: interior hat functions,
// with the first and last flattened to the constant 1 on their end element.
#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "maas/assembly.hpp"
#include "maas/geometry.hpp"

namespace maas {

// Trace of a subdomain mesh on one interface, ordered by the coordinate that
// runs along the interface.
struct Trace {
  std::vector<int> nodes;  // mesh-local node ids, endpoints included
  std::vector<double> s;   // coordinate along the interface
  int n_interior() const { return static_cast<int>(nodes.size()) - 2; }
};

Trace extract_trace(const SubdomainMesh& mesh, const CoarsePartition& part,
                    int iface);

// Piecewise-linear test function i (1-based, i = 1..n_s) of the nonmortar
// test space on breakpoints t, evaluated at x. Nodal values are
// delta_{ij} except that function 1 is also 1 at t_0 and function n_s is 1
// at t_{n_s+1}.
double test_function_value(const std::vector<double>& t, int i, double x);

// Hat function of breakpoint j (0-based over all nodes of t) at x.
double hat_value(const std::vector<double>& t, int j, double x);

struct MortarCoupling {
  int iface = -1;
  Eigen::MatrixXd M; // n_s x (n_m + 2), tests against mortar hats
  Eigen::MatrixXd S; // n_s x n_s, tests against interior nonmortar hats
  Eigen::MatrixXd C; // n_s x 2, tests against endpoint nonmortar hats
  Eigen::MatrixXd elim_m; // S^{-1} M
  Eigen::MatrixXd elim_c; // S^{-1} C
};

// Integrates the pairings exactly with two-point Gauss on the merged
// breakpoints of both sides. Throws std::invalid_argument if the traces do
// not span the same segment.
MortarCoupling assemble_coupling(int iface, const Trace& mortar,
                                 const Trace& nonmortar);

enum class DofClass { Corner, Mortar, Interior };

// Free unknowns of the constrained space, ordered corner dofs first, then
// mortar dofs interface by interface, then interior dofs subdomain by
// subdomain. Every broken node is either mapped to a free dof, eliminated as
// a slave, or was removed as a Dirichlet node.
struct FreeDofMap {
  int n_corner = 0, n_mortar = 0, n_interior = 0;
  std::vector<int> broken_to_free;      // -1 for slaves
  std::vector<DofClass> free_class;
  std::vector<std::pair<int, int>> interior_range; // per subdomain, [begin, end)
  std::vector<int> corner_dof;          // per cross point
  std::vector<std::vector<int>> mortar_dofs; // per interface; empty if mortar
                                             // side, ordered along it

  int n_free() const { return n_corner + n_mortar + n_interior; }
  int n_coupled() const { return n_corner + n_mortar; }
};

FreeDofMap classify_dofs(const CoarsePartition& part,
                         const std::vector<SubdomainMesh>& meshes,
                         const SideAssignment& sides,
                         const BrokenNumbering& numbering);

struct ConstrainedSystem {
  SparseMat T;       // broken x free prolongation
  SparseMat A;       // T' A_broken T
  Eigen::VectorXd f; // T' f_broken
  FreeDofMap dofs;
  std::vector<MortarCoupling> couplings; // per interface
};

ConstrainedSystem build_constrained_system(const CoarsePartition& part,
                                           const std::vector<SubdomainMesh>& meshes,
                                           const SideAssignment& sides,
                                           const BrokenNumbering& numbering,
                                           const SparseMat& A_broken,
                                           const Eigen::VectorXd& f_broken);

} // namespace maas
