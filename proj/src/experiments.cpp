#include "maas/experiments.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace maas {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

} // namespace

EnrichType ExperimentConfig::enrich_type() const {
  if (type == 1) return EnrichType::I;
  if (type == 2) return EnrichType::II;
  throw std::invalid_argument("enrichment type must be 1 or 2");
}

SelectionPolicy ExperimentConfig::selection() const {
  if (policy == "threshold") return SelectionPolicy::threshold(threshold);
  if (policy == "fixed") return SelectionPolicy::fixed(fixed);
  throw std::invalid_argument("selection policy must be threshold or fixed");
}

MortarRule ExperimentConfig::mortar_rule() const {
  if (mortar == "coarse") return MortarRule::CoarserSide;
  if (mortar == "fine") return MortarRule::FinerSide;
  throw std::invalid_argument("mortar rule must be coarse or fine");
}

ExperimentConfig config_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  ExperimentConfig c;
  c.nx = j.value("nx", c.nx);
  c.ny = j.value("ny", c.ny);
  c.cells = j.value("cells", c.cells);
  c.cells_alt = j.value("cells_alt", c.cells_alt);
  c.checkerboard = j.value("checkerboard", c.checkerboard);
  c.mortar = j.value("mortar", c.mortar);
  c.alpha_b = j.value("alpha_b", c.alpha_b);
  c.alpha_c = j.value("alpha_c", c.alpha_c);
  c.alpha_i = j.value("alpha_i", c.alpha_i);
  c.channel_width = j.value("channel_width", c.channel_width);
  c.corner_inset = j.value("corner_inset", c.corner_inset);
  c.corner_leg = j.value("corner_leg", c.corner_leg);
  c.period = j.value("period", c.period);
  c.type = j.value("type", c.type);
  c.policy = j.value("policy", c.policy);
  c.threshold = j.value("threshold", c.threshold);
  c.fixed = j.value("fixed", c.fixed);
  c.tol = j.value("tol", c.tol);
  c.max_iter = j.value("max_iter", c.max_iter);
  c.precond = j.value("precond", c.precond);
  c.dense_cap = j.value("dense_cap", c.dense_cap);
  c.run_pcg = j.value("run_pcg", c.run_pcg);
  c.compute_kappa = j.value("compute_kappa", c.compute_kappa);
  c.seed = j.value("seed", c.seed);
  return c;
}

ExperimentConfig config_from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return config_from_json(ss.str());
}

static nlohmann::json config_json(const ExperimentConfig& c) {
  return {{"nx", c.nx},
          {"ny", c.ny},
          {"cells", c.cells},
          {"cells_alt", c.cells_alt},
          {"checkerboard", c.checkerboard},
          {"mortar", c.mortar},
          {"alpha_b", c.alpha_b},
          {"alpha_c", c.alpha_c},
          {"alpha_i", c.alpha_i},
          {"channel_width", c.channel_width},
          {"corner_inset", c.corner_inset},
          {"corner_leg", c.corner_leg},
          {"period", c.period},
          {"type", c.type},
          {"policy", c.policy},
          {"threshold", c.threshold},
          {"fixed", c.fixed},
          {"tol", c.tol},
          {"max_iter", c.max_iter},
          {"precond", c.precond},
          {"dense_cap", c.dense_cap},
          {"run_pcg", c.run_pcg},
          {"compute_kappa", c.compute_kappa},
          {"seed", c.seed}};
}

std::string config_to_json(const ExperimentConfig& cfg) {
  return config_json(cfg).dump(2);
}

ProblemInstance build_instance(const ExperimentConfig& cfg) {
  ProblemInstance p;
  p.part = build_partition(cfg.nx, cfg.ny);
  for (int j = 0; j < cfg.ny; ++j)
    for (int i = 0; i < cfg.nx; ++i) {
      int id = p.part.subdomain_id(i, j);
      int n = (!cfg.checkerboard || (i + j) % 2 == 0) ? cfg.cells : cfg.cells_alt;
      p.meshes.push_back(build_subdomain_mesh(id, p.part.boxes[id], n));
    }
  ChannelPattern pattern =
      make_channel_pattern(p.part, cfg.alpha_b, cfg.alpha_c, cfg.alpha_i);
  pattern.period = cfg.period;
  pattern.width = cfg.channel_width;
  pattern.corner_inset = cfg.corner_inset;
  pattern.corner_leg = cfg.corner_leg;
  p.field = sample_pattern(p.meshes, pattern);
  p.numbering = build_broken_numbering(p.part, p.meshes);
  p.A_broken = assemble_stiffness(p.numbering, p.meshes, p.field, WeightMode::TrueAlpha);
  p.f_broken = assemble_load(p.numbering, p.meshes, default_rhs);
  p.sides = assign_sides(p.part, p.meshes, cfg.mortar_rule());
  p.sys = build_constrained_system(p.part, p.meshes, p.sides, p.numbering,
                                   p.A_broken, p.f_broken);
  p.avg = build_average_operator(p.part, p.meshes, p.sides, p.numbering,
                                 p.sys.dofs);
  return p;
}

RunRecord run_single(const ExperimentConfig& cfg) {
  RunRecord rec;
  rec.config = cfg;

  auto stage = [](const char* label, auto&& fn) {
    try {
      return fn();
    } catch (const std::exception& e) {
      throw std::runtime_error(std::string(label) + ": " + e.what());
    }
  };

  auto t0 = Clock::now();
  ProblemInstance p = stage("assembly", [&] { return build_instance(cfg); });
  rec.timings_ms["assembly"] = ms_since(t0);
  rec.n_free = p.sys.dofs.n_free();
  rec.n_corner = p.sys.dofs.n_corner;
  rec.n_mortar = p.sys.dofs.n_mortar;
  rec.n_interior = p.sys.dofs.n_interior;

  t0 = Clock::now();
  auto bases = stage("eigensolves", [&] {
    return solve_all_eigenproblems(p.part, p.meshes, p.field, p.numbering,
                                   p.sys.dofs, p.sys.A, cfg.enrich_type());
  });
  SelectionPolicy policy = cfg.selection();
  for (auto& b : bases) {
    select_enrichment(b, policy);
    rec.selected_per_subdomain.push_back(b.selected);
    rec.total_selected += b.selected;
  }
  rec.timings_ms["eigensolves"] = ms_since(t0);

  t0 = Clock::now();
  Preconditioner prec = stage("factorization", [&] {
    auto basis = build_enriched_basis(p.avg, bases, p.sys.dofs, p.sys.A);
    if (cfg.precond == "reference")
      return Preconditioner::reference(p.sys.A, basis, p.sys.dofs);
    if (cfg.precond == "blockwise")
      return Preconditioner::blockwise(p.sys.A, p.avg, bases, p.sys.dofs);
    throw std::invalid_argument("precond must be reference or blockwise");
  });
  rec.timings_ms["factorization"] = ms_since(t0);

  LinearOperator A_op = LinearOperator::from(p.sys.A);
  LinearOperator M{prec.rows(),
                   [&prec](const Eigen::VectorXd& v) { return prec.apply(v); }};

  PcgResult pcg_result;
  if (cfg.run_pcg) {
    t0 = Clock::now();
    PcgOptions opt;
    opt.tol = cfg.tol;
    opt.max_iter = cfg.max_iter;
    pcg_result = stage("pcg", [&] { return pcg(A_op, p.sys.f, M, opt); });
    rec.iterations = pcg_result.iterations;
    rec.converged = pcg_result.converged;
    rec.timings_ms["pcg"] = ms_since(t0);
  }

  if (cfg.compute_kappa) {
    t0 = Clock::now();
    if (rec.n_free <= cfg.dense_cap) {
      auto est = stage("kappa", [&] {
        return condition_number_dense(p.sys.A, M, cfg.dense_cap);
      });
      rec.kappa = est.kappa;
      rec.lambda_min = est.lambda_min;
      rec.lambda_max = est.lambda_max;
      rec.kappa_method = est.method;
    } else if (cfg.run_pcg && !pcg_result.alphas.empty()) {
      auto est = stage("kappa", [&] {
        return condition_number_lanczos(pcg_result);
      });
      rec.kappa = est.kappa;
      rec.lambda_min = est.lambda_min;
      rec.lambda_max = est.lambda_max;
      rec.kappa_method = est.method;
    }
    rec.timings_ms["kappa"] = ms_since(t0);
  }

  rec.ok = true;
  return rec;
}

std::vector<RunRecord> run_table(int table, const ExperimentConfig& base) {
  std::vector<ExperimentConfig> sweep;
  if (table == 1) {
    for (int n : {6, 9})
      for (auto [ac, ai] : {std::pair{1e3, 1e4}, std::pair{1e4, 1e6}})
        for (const char* rule : {"coarse", "fine"}) {
          ExperimentConfig c = base;
          c.nx = c.ny = n;
          c.alpha_c = ac;
          c.alpha_i = ai;
          c.mortar = rule;
          c.policy = "threshold";
          sweep.push_back(c);
        }
  } else if (table == 2) {
    for (int m = 0; m <= 7; ++m) {
      ExperimentConfig c = base;
      c.policy = "fixed";
      c.fixed = m;
      sweep.push_back(c);
    }
  } else if (table == 3) {
    for (int t : {1, 2}) {
      ExperimentConfig c = base;
      c.type = t;
      c.policy = "threshold";
      sweep.push_back(c);
    }
  } else {
    throw std::invalid_argument("table must be 1, 2 or 3");
  }

  std::vector<RunRecord> rows;
  rows.reserve(sweep.size());
  for (const auto& c : sweep) {
    try {
      rows.push_back(run_single(c));
    } catch (const std::exception& e) {
      RunRecord failed;
      failed.config = c;
      failed.ok = false;
      failed.kappa_method = std::string("error: ") + e.what();
      rows.push_back(failed);
    }
  }
  return rows;
}

std::string records_to_csv(const std::vector<RunRecord>& records) {
  std::ostringstream out;
  out << "nx,ny,cells,cells_alt,mortar,alpha_b,alpha_c,alpha_i,type,policy,"
         "threshold,fixed,n_free,kappa,kappa_method,lambda_min,lambda_max,"
         "iterations,converged,total_selected,ok\n";
  for (const auto& r : records) {
    const auto& c = r.config;
    out << c.nx << ',' << c.ny << ',' << c.cells << ',' << c.cells_alt << ','
        << c.mortar << ',' << fmt(c.alpha_b) << ',' << fmt(c.alpha_c) << ','
        << fmt(c.alpha_i) << ',' << c.type << ',' << c.policy << ','
        << fmt(c.threshold) << ',' << c.fixed << ',' << r.n_free << ','
        << fmt(r.kappa) << ',' << r.kappa_method << ',' << fmt(r.lambda_min)
        << ',' << fmt(r.lambda_max) << ',' << r.iterations << ','
        << (r.converged ? 1 : 0) << ',' << r.total_selected << ','
        << (r.ok ? 1 : 0) << '\n';
  }
  return out.str();
}

std::string records_to_json(const std::vector<RunRecord>& records) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : records) {
    nlohmann::json j;
    j["config"] = config_json(r.config);
    j["n_free"] = r.n_free;
    j["n_corner"] = r.n_corner;
    j["n_mortar"] = r.n_mortar;
    j["n_interior"] = r.n_interior;
    j["kappa"] = r.kappa;
    j["kappa_method"] = r.kappa_method;
    j["lambda_min"] = r.lambda_min;
    j["lambda_max"] = r.lambda_max;
    j["iterations"] = r.iterations;
    j["converged"] = r.converged;
    j["total_selected"] = r.total_selected;
    j["selected_per_subdomain"] = r.selected_per_subdomain;
    j["timings_ms"] = r.timings_ms;
    j["ok"] = r.ok;
    arr.push_back(std::move(j));
  }
  return arr.dump(2);
}

void write_records(const std::vector<RunRecord>& records,
                   const std::string& out_base) {
  std::ofstream csv(out_base + ".csv");
  if (!csv) throw std::runtime_error("cannot write " + out_base + ".csv");
  csv << records_to_csv(records);
  std::ofstream json(out_base + ".json");
  if (!json) throw std::runtime_error("cannot write " + out_base + ".json");
  json << records_to_json(records);
}

std::string histogram_to_csv(const RunRecord& record) {
  std::ostringstream out;
  out << "subdomain,selected\n";
  for (size_t s = 0; s < record.selected_per_subdomain.size(); ++s)
    out << s << ',' << record.selected_per_subdomain[s] << '\n';
  return out.str();
}

} // namespace maas
