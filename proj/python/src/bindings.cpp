#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "opschwarz/errors.hpp"
#include "opschwarz/experiment.hpp"
#include "opschwarz/opinf.hpp"
#include "opschwarz/pod.hpp"
#include "opschwarz/schwarz.hpp"

namespace py = pybind11;
using namespace opschwarz;

namespace {

Matrix node_array(const StructuredGrid& g) {
  Matrix xy(g.num_nodes(), 2);
  for (int n = 0; n < g.num_nodes(); ++n) xy.row(n) << g.nodes()[n].x, g.nodes()[n].y;
  return xy;
}

Vector reduced_step(const Matrix& k, const Matrix& b, const Vector& xhat, const Vector& y, double dt) {
  ReducedModel m;
  m.basis.modes = Matrix::Identity(k.rows(), k.rows());
  m.basis.mean = Vector::Zero(k.rows());
  m.K = k;
  m.B = b;
  return rom_step(m, xhat, y, dt);
}

py::dict stats_dict(const RunStats& s) {
  py::dict d;
  d["layout"] = s.layout;
  d["model_assignment"] = s.model_assignment;
  d["overlap"] = s.overlap;
  d["r"] = s.r;
  d["data"] = s.data;
  d["lambda"] = s.lambda;
  d["e_avg"] = s.e_avg;
  d["e_max"] = s.e_max;
  d["e_proj_avg"] = s.e_proj_avg;
  d["avg_sweeps"] = s.avg_sweeps;
  d["online_seconds"] = s.online_seconds;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Schwarz coupling of finite-element and operator-inference heat models.";

  auto config_error = py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  auto numerical_error = py::register_exception<NumericalError>(m, "NumericalError", PyExc_RuntimeError);
  py::register_exception<NonConvergenceError>(m, "NonConvergenceError", numerical_error.ptr());
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);
  (void)config_error;

  py::enum_<Side>(m, "Side")
      .value("Left", Side::Left)
      .value("Right", Side::Right)
      .value("Top", Side::Top)
      .value("Bottom", Side::Bottom);

  py::enum_<Layout>(m, "Layout")
      .value("Monolithic", Layout::Monolithic)
      .value("Vertical", Layout::Vertical)
      .value("Horizontal", Layout::Horizontal)
      .value("FourSquares", Layout::FourSquares);

  py::enum_<ModelKind>(m, "ModelKind").value("Fom", ModelKind::Fom).value("Rom", ModelKind::Rom);

  py::enum_<RankPolicy>(m, "RankPolicy").value("Strict", RankPolicy::Strict).value("Pad", RankPolicy::Pad);

  py::class_<Rect>(m, "Rect")
      .def(py::init<double, double, double, double>(), py::arg("x0") = -1.0, py::arg("x1") = 1.0,
           py::arg("y0") = -1.0, py::arg("y1") = 1.0)
      .def_readwrite("x0", &Rect::x0)
      .def_readwrite("x1", &Rect::x1)
      .def_readwrite("y0", &Rect::y0)
      .def_readwrite("y1", &Rect::y1);

  py::class_<StructuredGrid>(m, "StructuredGrid")
      .def_property_readonly("nx", &StructuredGrid::nx)
      .def_property_readonly("ny", &StructuredGrid::ny)
      .def_property_readonly("bounds", &StructuredGrid::bounds)
      .def_property_readonly("num_nodes", &StructuredGrid::num_nodes)
      .def_property_readonly("num_triangles", &StructuredGrid::num_triangles)
      .def_property_readonly("nodes", &node_array, "(num_nodes, 2) coordinates")
      .def_property_readonly("triangles", &StructuredGrid::triangles)
      .def("node_index", &StructuredGrid::node_index)
      .def("side_of", &StructuredGrid::side_of)
      .def("on_boundary", &StructuredGrid::on_boundary);

  m.def("build_grid", &build_grid, py::arg("nx"), py::arg("ny"), py::arg("bounds") = Rect{});

  py::class_<DecompositionConfig>(m, "DecompositionConfig")
      .def(py::init([](Layout layout, int overlap) { return DecompositionConfig{layout, overlap}; }),
           py::arg("layout") = Layout::Vertical, py::arg("overlap") = 10)
      .def_readwrite("layout", &DecompositionConfig::layout)
      .def_readwrite("overlap", &DecompositionConfig::overlap);

  py::class_<Subdomain>(m, "Subdomain")
      .def_readonly("id", &Subdomain::id)
      .def_readonly("local_grid", &Subdomain::local_grid)
      .def_readonly("parent_of", &Subdomain::parent_of)
      .def_property_readonly("cells",
                             [](const Subdomain& s) {
                               return py::make_tuple(s.cells.ix_lo, s.cells.ix_hi, s.cells.iy_lo, s.cells.iy_hi);
                             })
      .def_property_readonly("center", [](const Subdomain& s) { return py::make_tuple(s.center.x, s.center.y); })
      .def_property_readonly("interior", [](const Subdomain& s) { return s.partition.interior; })
      .def_property_readonly("physical_boundary", [](const Subdomain& s) { return s.partition.physical_bnd; })
      .def_property_readonly("schwarz_boundary", [](const Subdomain& s) {
        py::list edges;
        for (const auto& e : s.partition.schwarz_bnd) edges.append(py::make_tuple(e.side, e.neighbor, e.nodes));
        return edges;
      });

  m.def("decompose", &decompose, py::arg("grid"), py::arg("config"));

  py::class_<BoundaryCondition>(m, "BoundaryCondition")
      .def_static("static_case", &BoundaryCondition::static_case)
      .def_static("time_varying_case", &BoundaryCondition::time_varying_case)
      .def_static("uniform", &BoundaryCondition::uniform, py::arg("value"))
      .def("value", &BoundaryCondition::value, py::arg("side"), py::arg("t"));

  py::class_<SnapshotSet>(m, "SnapshotSet")
      .def_readonly("states", &SnapshotSet::states)
      .def_readonly("boundary_history", &SnapshotSet::boundary_history)
      .def_readonly("times", &SnapshotSet::times)
      .def_readonly("interior_map", &SnapshotSet::interior_map)
      .def_readonly("boundary_map", &SnapshotSet::boundary_map)
      .def_property_readonly("num_snapshots", &SnapshotSet::num_snapshots)
      .def("full_states", &SnapshotSet::full_states);

  m.def("solve_monolithic", &solve_monolithic, py::arg("grid"), py::arg("bc"), py::arg("ic"), py::arg("dt"),
        py::arg("T"));

  py::class_<PodBasis>(m, "PodBasis")
      .def_readonly("mean", &PodBasis::mean)
      .def_readonly("modes", &PodBasis::modes)
      .def_readonly("singular_values", &PodBasis::singular_values)
      .def_readonly("centered", &PodBasis::centered)
      .def_property_readonly("rank", &PodBasis::rank)
      .def_property_readonly("numerical_rank", &PodBasis::numerical_rank);

  m.def("pod_basis", &pod_basis, py::arg("snapshots"), py::arg("r"), py::arg("centering") = true,
        py::arg("n_train"), py::arg("policy") = RankPolicy::Strict);
  m.def("projection_error", &projection_error, py::arg("snapshots"), py::arg("basis"));
  m.def("energy_fraction", &energy_fraction, py::arg("basis"), py::arg("r"));
  m.def("rank_for_energy", &rank_for_energy, py::arg("basis"), py::arg("threshold"));

  m.def("estimate_derivatives", &estimate_derivatives, py::arg("xhat"), py::arg("dt"));
  m.def(
      "infer_operators",
      [](const Matrix& states, const Matrix& derivatives, const Matrix& inputs, double lambda) {
        TrainingData d{states, derivatives, inputs};
        const ReducedOperators ops = infer_operators(d, lambda);
        return py::make_tuple(ops.K, ops.B);
      },
      py::arg("states"), py::arg("derivatives"), py::arg("inputs"), py::arg("lambda_") = 1e-2,
      "Returns (K, B). `derivatives` has one column fewer than `states` and pairs with samples 2..j.");
  m.def("rom_step", &reduced_step, py::arg("K"), py::arg("B"), py::arg("xhat"), py::arg("y"), py::arg("dt"));

  py::class_<SchwarzConfig>(m, "SchwarzConfig")
      .def(py::init([](double da, double dr, int ms) { return SchwarzConfig{da, dr, ms}; }),
           py::arg("delta_abs") = 1e-10, py::arg("delta_rel") = 1e-10, py::arg("max_sweeps") = 100)
      .def_readwrite("delta_abs", &SchwarzConfig::delta_abs)
      .def_readwrite("delta_rel", &SchwarzConfig::delta_rel)
      .def_readwrite("max_sweeps", &SchwarzConfig::max_sweeps);

  py::class_<RomOptions>(m, "RomOptions")
      .def(py::init([](int r, int n_train, double lambda, bool centering, RankPolicy policy) {
             return RomOptions{r, n_train, lambda, centering, policy};
           }),
           py::arg("r") = 6, py::arg("n_train") = 30, py::arg("lambda_") = 1e-2, py::arg("centering") = true,
           py::arg("rank_policy") = RankPolicy::Strict)
      .def_readwrite("r", &RomOptions::r)
      .def_readwrite("n_train", &RomOptions::n_train)
      .def_readwrite("lambda_", &RomOptions::lambda)
      .def_readwrite("centering", &RomOptions::centering)
      .def_readwrite("rank_policy", &RomOptions::rank_policy);

  py::class_<CoupledRun>(m, "CoupledRun")
      .def_readonly("merged", &CoupledRun::merged)
      .def_readonly("times", &CoupledRun::times)
      .def_readonly("sweeps", &CoupledRun::sweeps)
      .def_readonly("eps_abs", &CoupledRun::eps_abs)
      .def_readonly("eps_rel", &CoupledRun::eps_rel)
      .def_readonly("online_seconds", &CoupledRun::online_seconds)
      .def_readonly("projection_errors", &CoupledRun::projection_errors)
      .def_property_readonly("average_sweeps", &CoupledRun::average_sweeps);

  m.def(
      "run_coupled",
      [](const StructuredGrid& grid, const DecompositionConfig& d, std::vector<ModelKind> models,
         const BoundaryCondition& bc, const Vector& ic, double dt, double T, const SchwarzConfig& cfg,
         const SnapshotSet* training, const RomOptions& rom) {
        return run_coupled(grid, d, std::move(models), cfg, bc, ic, dt, T, training, rom);
      },
      py::arg("grid"), py::arg("decomposition"), py::arg("models"), py::arg("bc"), py::arg("ic"), py::arg("dt"),
      py::arg("T"), py::arg("schwarz") = SchwarzConfig{}, py::arg("training") = nullptr,
      py::arg("rom") = RomOptions{});

  py::class_<ErrorSeries>(m, "ErrorSeries")
      .def_readonly("e_avg", &ErrorSeries::e_avg)
      .def_readonly("e_max", &ErrorSeries::e_max)
      .def_readonly("per_step", &ErrorSeries::per_step);
  m.def("relative_error_series", &relative_error_series, py::arg("reference"), py::arg("solution"));

  py::class_<ExperimentConfig>(m, "ExperimentConfig")
      .def(py::init<>())
      .def("set", &set_config_value, py::arg("key"), py::arg("value"))
      .def("validate", &ExperimentConfig::validate)
      .def("serialize", [](const ExperimentConfig& c) { return serialize_config(c); })
      .def_readwrite("out", &ExperimentConfig::out)
      .def_readwrite("repeats", &ExperimentConfig::repeats);
  m.def("parse_config", &parse_config, py::arg("text"));
  m.def(
      "run_experiment",
      [](const ExperimentConfig& cfg) {
        const MonolithicOutcome mono = run_monolithic(cfg);
        py::dict d = stats_dict(run_experiment(cfg, mono.snapshots).stats);
        d["monolithic_seconds"] = mono.online_seconds;
        return d;
      },
      py::arg("config"), "Monolithic reference plus the configured coupled run; returns the stats row as a dict.");
}
