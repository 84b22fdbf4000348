// End-to-end experiment driver: builds the meshed problem from a config,
// runs the enriched average Schwarz solver, and records condition numbers,
// iteration counts and eigenfunction counts as CSV/JSON.
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "maas/coarse_space.hpp"
#include "maas/krylov.hpp"
#include "maas/preconditioner.hpp"

namespace maas {

struct ExperimentConfig {
  int nx = 3, ny = 3;
  int cells = 6;
  int cells_alt = 9;        // alternate resolution of the checkerboard
  bool checkerboard = true; // if false every subdomain uses `cells`
  std::string mortar = "coarse"; // coarse | fine
  double alpha_b = 1.0, alpha_c = 1.0, alpha_i = 1.0;
  double channel_width = -1, corner_inset = -1, corner_leg = -1;
  int period = 3;
  int type = 2;                  // enrichment type, 1 or 2
  std::string policy = "threshold"; // threshold | fixed
  double threshold = 50.0;
  int fixed = 0;
  double tol = 5e-6;
  int max_iter = 200000;
  std::string precond = "reference"; // reference | blockwise
  int dense_cap = 20000;
  bool run_pcg = true;
  bool compute_kappa = true;
  unsigned seed = 0; // reserved for randomized self checks

  EnrichType enrich_type() const;
  SelectionPolicy selection() const;
  MortarRule mortar_rule() const;
};

ExperimentConfig config_from_json(const std::string& text);
ExperimentConfig config_from_file(const std::string& path);
std::string config_to_json(const ExperimentConfig& cfg);

struct RunRecord {
  ExperimentConfig config;
  int n_free = 0, n_corner = 0, n_mortar = 0, n_interior = 0;
  double kappa = 0;
  std::string kappa_method;
  double lambda_min = 0, lambda_max = 0;
  int iterations = 0;
  bool converged = false;
  int total_selected = 0;
  std::vector<int> selected_per_subdomain;
  std::map<std::string, double> timings_ms;
  bool ok = false; // every requested stage finished
};

// Assembled pieces of one problem instance, reusable across runs.
struct ProblemInstance {
  CoarsePartition part;
  std::vector<SubdomainMesh> meshes;
  CoefficientField field;
  BrokenNumbering numbering;
  SparseMat A_broken;
  Eigen::VectorXd f_broken;
  SideAssignment sides;
  ConstrainedSystem sys;
  AverageOperator avg;
};

ProblemInstance build_instance(const ExperimentConfig& cfg);
RunRecord run_single(const ExperimentConfig& cfg);

// Benchmark sweeps. 1: threshold runs over subdomain counts, coefficient
// triples and mortar rules; 2: fixed-count sweep m = 0..7; 3: eigenfunction
// totals for both enrichment types.
std::vector<RunRecord> run_table(int table, const ExperimentConfig& base);

std::string records_to_csv(const std::vector<RunRecord>& records);
std::string records_to_json(const std::vector<RunRecord>& records);
void write_records(const std::vector<RunRecord>& records,
                   const std::string& out_base);

// rows: subdomain, selected count
std::string histogram_to_csv(const RunRecord& record);

} // namespace maas
