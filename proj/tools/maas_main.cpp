// Command-line driver for the mortar average Schwarz experiments. A config
// file provides the base setup; flags override individual fields. Without
// --table a single run executes; --table 1|2|3 runs one of the benchmark
// sweeps. Results print as CSV and, with --out, land in <out>.csv/<out>.json.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "maas/experiments.hpp"

using namespace maas;

int main(int argc, char** argv) {
  CLI::App app{"Additive average Schwarz preconditioner with spectral "
               "enrichment on mortar discretizations"};

  std::string config_path, out_base, mortar, policy_precond;
  std::string export_field, export_matrix, export_spectra;
  std::optional<int> subdomains, cells, cells_alt, type, fixed, table;
  std::optional<double> alpha_b, alpha_c, alpha_i, threshold, tol;
  bool histogram = false;

  app.add_option("--config", config_path, "JSON config file");
  app.add_option("--subdomains", subdomains, "subdomains per side (nx = ny)");
  app.add_option("--cells", cells, "fine cells per subdomain edge");
  app.add_option("--cells-alt", cells_alt,
                 "alternate cells of the checkerboard resolution");
  app.add_option("--mortar", mortar, "mortar side rule: coarse | fine")
      ->check(CLI::IsMember({"coarse", "fine"}));
  app.add_option("--alpha-b", alpha_b, "background coefficient");
  app.add_option("--alpha-c", alpha_c, "corner channel coefficient");
  app.add_option("--alpha-i", alpha_i, "crossing channel coefficient");
  app.add_option("--type", type, "enrichment type: 1 | 2")
      ->check(CLI::IsMember({1, 2}));
  app.add_option("--threshold", threshold,
                 "eigenvalue threshold (selects the threshold policy)");
  app.add_option("--fixed", fixed,
                 "eigenfunctions per subdomain (selects the fixed policy)");
  app.add_option("--tol", tol, "PCG relative residual tolerance");
  app.add_option("--table", table, "run sweep 1, 2 or 3 instead of one case")
      ->check(CLI::IsMember({1, 2, 3}));
  app.add_flag("--histogram", histogram,
               "write per-subdomain selection counts (single runs)");
  app.add_option("--out", out_base, "output base path for CSV/JSON");
  app.add_option("--precond", policy_precond,
                 "application mode: reference | blockwise")
      ->check(CLI::IsMember({"reference", "blockwise"}));
  app.add_option("--export-field", export_field,
                 "write the sampled coefficient field as CSV");
  app.add_option("--export-matrix", export_matrix,
                 "write the constrained stiffness matrix as COO");
  app.add_option("--export-spectra", export_spectra,
                 "write all local eigenvalues as CSV");

  CLI11_PARSE(app, argc, argv);

  try {
    ExperimentConfig cfg;
    if (!config_path.empty()) cfg = config_from_file(config_path);
    if (subdomains) cfg.nx = cfg.ny = *subdomains;
    if (cells) cfg.cells = *cells;
    if (cells_alt) cfg.cells_alt = *cells_alt;
    if (!mortar.empty()) cfg.mortar = mortar;
    if (alpha_b) cfg.alpha_b = *alpha_b;
    if (alpha_c) cfg.alpha_c = *alpha_c;
    if (alpha_i) cfg.alpha_i = *alpha_i;
    if (type) cfg.type = *type;
    if (threshold && fixed)
      throw std::invalid_argument("--threshold and --fixed are exclusive");
    if (threshold) {
      cfg.policy = "threshold";
      cfg.threshold = *threshold;
    }
    if (fixed) {
      cfg.policy = "fixed";
      cfg.fixed = *fixed;
    }
    if (tol) cfg.tol = *tol;
    if (!policy_precond.empty()) cfg.precond = policy_precond;

    bool exporting = !export_field.empty() || !export_matrix.empty() ||
                     !export_spectra.empty();
    if (exporting) {
      ProblemInstance p = build_instance(cfg);
      if (!export_field.empty()) write_field_csv(p.field, export_field);
      if (!export_matrix.empty()) write_matrix_coo(p.sys.A, export_matrix);
      if (!export_spectra.empty()) {
        auto bases =
            solve_all_eigenproblems(p.part, p.meshes, p.field, p.numbering,
                                    p.sys.dofs, p.sys.A, cfg.enrich_type());
        SelectionPolicy policy = cfg.selection();
        for (auto& b : bases) select_enrichment(b, policy);
        write_spectra_csv(bases, export_spectra);
      }
    }

    std::vector<RunRecord> records;
    if (table) {
      records = run_table(*table, cfg);
    } else {
      records.push_back(run_single(cfg));
      if (histogram) {
        std::string path =
            (out_base.empty() ? std::string("histogram") : out_base + "_histogram") +
            ".csv";
        std::ofstream h(path);
        h << histogram_to_csv(records.back());
      }
    }

    std::cout << records_to_csv(records);
    if (!out_base.empty()) write_records(records, out_base);

    for (const auto& r : records)
      if (!r.ok) return 1;
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
