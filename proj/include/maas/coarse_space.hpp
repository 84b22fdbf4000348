// The averaging coarse operator and its spectral enrichment. The base coarse
// space interpolates corner and mortar values and fills each subdomain
// interior with the mean of the side averages, every side average taken over
// the mortar trace of that interface. Enrichment adds, per subdomain, the
// dominant eigenvectors of the interior pencil A_i x = lambda B_i x, where
// B_i is the interior block of the stiffness reassembled with flattened
// coefficients (WeightMode::TypeI or TypeII).
#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "maas/mortar.hpp"

namespace maas {

struct AverageOperator {
  // n_free x n_coupled; identity rows for corner and mortar dofs, constant
  // weight rows on each subdomain interior.
  SparseMat P0;
  std::vector<double> mu; // sides averaged per subdomain
  // Per subdomain: sum of averaging weights including the contributions that
  // were dropped because the trace node sits on the outer boundary. Equals 1
  // up to roundoff; kept for validation.
  std::vector<double> weight_sum_full;
};

AverageOperator build_average_operator(const CoarsePartition& part,
                                       const std::vector<SubdomainMesh>& meshes,
                                       const SideAssignment& sides,
                                       const BrokenNumbering& numbering,
                                       const FreeDofMap& dofs);

enum class EnrichType { I = 1, II = 2 };

WeightMode weight_mode_of(EnrichType t);

struct SelectionPolicy {
  enum class Kind { Threshold, Fixed } kind = Kind::Threshold;
  double tau = 50.0;
  int count = 0;
  static SelectionPolicy threshold(double tau);
  static SelectionPolicy fixed(int m);
};

struct LocalEigenBasis {
  int subdomain = -1;
  EnrichType type = EnrichType::II;
  Eigen::VectorXd values;  // nonincreasing
  Eigen::MatrixXd vectors; // columns, B-orthonormal
  int selected = 0;        // leading columns kept for enrichment
};

// Dense generalized symmetric-definite solve via Cholesky reduction of B_i.
// Throws std::runtime_error if B_i is not positive definite or if any
// eigenvalue falls below 1 by more than the numerical resolution of the
// reduction, max(1e-10, 32 eps lambda_max); the pencil guarantees
// lambda >= 1.
LocalEigenBasis solve_local_eigenproblem(const Eigen::MatrixXd& A_i,
                                         const Eigen::MatrixXd& B_i,
                                         int subdomain, EnrichType type);

int select_enrichment(LocalEigenBasis& basis, const SelectionPolicy& policy);

// Interior block of a broken or free matrix for one subdomain.
Eigen::MatrixXd interior_block(const SparseMat& A_free, const FreeDofMap& dofs,
                               int subdomain);

// Pencils for every subdomain: A_i from the true-coefficient stiffness, B_i
// reassembled under the type's weight mode.
std::vector<LocalEigenBasis> solve_all_eigenproblems(
    const CoarsePartition& part, const std::vector<SubdomainMesh>& meshes,
    const CoefficientField& field, const BrokenNumbering& numbering,
    const FreeDofMap& dofs, const SparseMat& A_free, EnrichType type);

struct EnrichedCoarseBasis {
  SparseMat Pc; // n_free x (n_coupled + total_selected)
  int n_coupled = 0;
  int total_selected = 0;
  std::vector<int> first_column;   // per subdomain, into the enriched range
  std::vector<int> selected_count; // per subdomain
  Eigen::VectorXd eigenvalues;     // of the selected columns, concatenated
};

// Concatenates P0 with the selected eigenvectors extended by zero and checks
// the coarse Gram P_c' A P_c for numerical rank; a rank-deficient Gram names
// the offending subdomain in the thrown std::runtime_error.
EnrichedCoarseBasis build_enriched_basis(const AverageOperator& avg,
                                         const std::vector<LocalEigenBasis>& bases,
                                         const FreeDofMap& dofs,
                                         const SparseMat& A_free);

// rows: subdomain, index, eigenvalue, selected
void write_spectra_csv(const std::vector<LocalEigenBasis>& bases,
                       const std::string& path);

} // namespace maas
