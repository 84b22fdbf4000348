// Python bindings for the experiment driver: configure runs of the enriched
// average Schwarz solver, execute them, and inspect the records.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "maas/experiments.hpp"

namespace py = pybind11;
using namespace maas;

PYBIND11_MODULE(_maas, m) {
  m.doc() = "Enriched average Schwarz preconditioner for mortar P1 problems";

  py::class_<ExperimentConfig>(m, "ExperimentConfig")
      .def(py::init<>())
      .def_readwrite("nx", &ExperimentConfig::nx)
      .def_readwrite("ny", &ExperimentConfig::ny)
      .def_readwrite("cells", &ExperimentConfig::cells)
      .def_readwrite("cells_alt", &ExperimentConfig::cells_alt)
      .def_readwrite("checkerboard", &ExperimentConfig::checkerboard)
      .def_readwrite("mortar", &ExperimentConfig::mortar)
      .def_readwrite("alpha_b", &ExperimentConfig::alpha_b)
      .def_readwrite("alpha_c", &ExperimentConfig::alpha_c)
      .def_readwrite("alpha_i", &ExperimentConfig::alpha_i)
      .def_readwrite("channel_width", &ExperimentConfig::channel_width)
      .def_readwrite("corner_inset", &ExperimentConfig::corner_inset)
      .def_readwrite("corner_leg", &ExperimentConfig::corner_leg)
      .def_readwrite("period", &ExperimentConfig::period)
      .def_readwrite("type", &ExperimentConfig::type)
      .def_readwrite("policy", &ExperimentConfig::policy)
      .def_readwrite("threshold", &ExperimentConfig::threshold)
      .def_readwrite("fixed", &ExperimentConfig::fixed)
      .def_readwrite("tol", &ExperimentConfig::tol)
      .def_readwrite("max_iter", &ExperimentConfig::max_iter)
      .def_readwrite("precond", &ExperimentConfig::precond)
      .def_readwrite("dense_cap", &ExperimentConfig::dense_cap)
      .def_readwrite("run_pcg", &ExperimentConfig::run_pcg)
      .def_readwrite("compute_kappa", &ExperimentConfig::compute_kappa)
      .def_readwrite("seed", &ExperimentConfig::seed)
      .def("to_json", &config_to_json)
      .def("__repr__", [](const ExperimentConfig& c) {
        return "<ExperimentConfig " + std::to_string(c.nx) + "x" +
               std::to_string(c.ny) + " cells " + std::to_string(c.cells) +
               "/" + std::to_string(c.cells_alt) + " type " +
               std::to_string(c.type) + " " + c.policy + ">";
      });

  py::class_<RunRecord>(m, "RunRecord")
      .def_readonly("config", &RunRecord::config)
      .def_readonly("n_free", &RunRecord::n_free)
      .def_readonly("n_corner", &RunRecord::n_corner)
      .def_readonly("n_mortar", &RunRecord::n_mortar)
      .def_readonly("n_interior", &RunRecord::n_interior)
      .def_readonly("kappa", &RunRecord::kappa)
      .def_readonly("kappa_method", &RunRecord::kappa_method)
      .def_readonly("lambda_min", &RunRecord::lambda_min)
      .def_readonly("lambda_max", &RunRecord::lambda_max)
      .def_readonly("iterations", &RunRecord::iterations)
      .def_readonly("converged", &RunRecord::converged)
      .def_readonly("total_selected", &RunRecord::total_selected)
      .def_readonly("selected_per_subdomain", &RunRecord::selected_per_subdomain)
      .def_readonly("timings_ms", &RunRecord::timings_ms)
      .def_readonly("ok", &RunRecord::ok)
      .def("__repr__", [](const RunRecord& r) {
        return "<RunRecord kappa=" + std::to_string(r.kappa) + " iterations=" +
               std::to_string(r.iterations) + " selected=" +
               std::to_string(r.total_selected) + (r.ok ? " ok>" : " failed>");
      });

  m.def("config_from_json", &config_from_json, py::arg("text"));
  m.def("config_from_file", &config_from_file, py::arg("path"));
  m.def("config_to_json", &config_to_json, py::arg("config"));
  m.def("run_single", &run_single, py::arg("config"),
        "Build the problem, enrich the coarse space, run PCG and measure kappa.");
  m.def("run_table", &run_table, py::arg("table"), py::arg("base"),
        "Sweep 1: sizes, contrasts and mortar rules. 2: fixed counts m = 0..7. "
        "3: eigenvector totals per enrichment type.");
  m.def("records_to_csv", &records_to_csv, py::arg("records"));
  m.def("records_to_json", &records_to_json, py::arg("records"));
  m.def("write_records", &write_records, py::arg("records"), py::arg("out_base"));
  m.def("histogram_to_csv", &histogram_to_csv, py::arg("record"));
}
