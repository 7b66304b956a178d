#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "rbwalk/graph.hpp"
#include "rbwalk/io.hpp"
#include "rbwalk/jump.hpp"
#include "rbwalk/rb.hpp"
#include "rbwalk/spectral.hpp"
#include "rbwalk/verify.hpp"

namespace py = pybind11;
using namespace rbwalk;

namespace {

std::string mode_name(GraphMode mode) {
  return mode == GraphMode::DiscreteTime ? "discrete" : "continuous";
}

}  // namespace

PYBIND11_MODULE(_rbwalk, m) {
  m.doc() = "Ruelle-Bowen random walks on strongly connected directed graphs";

  py::enum_<GraphMode>(m, "GraphMode")
      .value("DiscreteTime", GraphMode::DiscreteTime)
      .value("ContinuousTime", GraphMode::ContinuousTime);

  py::class_<DirectedGraph>(m, "DirectedGraph")
      .def(py::init<const Eigen::MatrixXi&>(), py::arg("adjacency"))
      .def_property_readonly("n", &DirectedGraph::size)
      .def_property_readonly("adjacency", &DirectedGraph::adjacency)
      .def("has_edge", &DirectedGraph::has_edge)
      .def("edge_count", &DirectedGraph::edge_count)
      .def("__repr__", [](const DirectedGraph& g) {
        std::ostringstream out;
        out << "DirectedGraph(n=" << g.size() << ", edges=" << g.edge_count()
            << ")";
        return out.str();
      });

  m.def(
      "load_edge_list",
      [](const std::string& text) { return load_edge_list(text); },
      py::arg("text"), "Parse an edge-list string into a DirectedGraph.");

  py::class_<ValidationReport>(m, "ValidationReport")
      .def_readonly("strongly_connected",
                    &ValidationReport::strongly_connected)
      .def_readonly("components", &ValidationReport::components)
      .def_readonly("self_loops", &ValidationReport::self_loops)
      .def_readonly("valid", &ValidationReport::valid)
      .def("summary", &ValidationReport::summary)
      .def("__repr__", [](const ValidationReport& r) {
        return "ValidationReport(valid=" + std::string(r.valid ? "True" : "False") +
               ", mode=" + mode_name(r.mode) + ")";
      });

  m.def("validate", &validate, py::arg("graph"), py::arg("mode"));
  m.def("count_paths", &count_paths, py::arg("graph"), py::arg("from_node"),
        py::arg("to_node"), py::arg("steps"));

  py::class_<PerronData>(m, "PerronData")
      .def_readonly("lambda_", &PerronData::lambda)
      .def_readonly("phi", &PerronData::phi)
      .def_readonly("phi_hat", &PerronData::phi_hat)
      .def_readonly("residual", &PerronData::residual);

  m.def("perron", &perron, py::arg("graph"), py::arg("tol") = 1e-12,
        py::arg("max_iter") = 100000);
  m.def("stationary_rb", &stationary_rb, py::arg("perron_data"));

  py::class_<DiscreteChain>(m, "DiscreteChain")
      .def_readonly("P", &DiscreteChain::P)
      .def_readonly("pi", &DiscreteChain::pi);

  py::class_<Generator>(m, "Generator")
      .def_readonly("Q", &Generator::Q)
      .def_readonly("pi", &Generator::pi);

  m.def("build_discrete_rb", &build_discrete_rb, py::arg("perron_data"),
        py::arg("graph"));
  m.def("build_rb_generator", &build_rb_generator, py::arg("perron_data"),
        py::arg("graph"));
  m.def(
      "scale_generator",
      [](const Generator& q, double eta) {
        return scale_generator(q, EntropyConfig{eta});
      },
      py::arg("generator"), py::arg("eta"));
  m.def("discrete_entropy_rate", &discrete_entropy_rate, py::arg("chain"));
  m.def(
      "differential_entropy_rate",
      [](const Generator& q, double eta) {
        return differential_entropy_rate(q, EntropyConfig{eta});
      },
      py::arg("generator"), py::arg("eta") = 1.0);
  m.def(
      "stationary_of_generator",
      [](const Eigen::MatrixXd& Q) { return stationary_of_generator(Q); },
      py::arg("Q"));
  m.def("path_probability_formula", &path_probability_formula,
        py::arg("perron_data"), py::arg("from_node"), py::arg("to_node"),
        py::arg("steps"), py::arg("conditional"));

  py::class_<Jump>(m, "Jump")
      .def_readonly("next_state", &Jump::next_state)
      .def_readonly("holding_time", &Jump::holding_time);

  py::class_<Trajectory>(m, "Trajectory")
      .def_readonly("start", &Trajectory::start)
      .def_readonly("jumps", &Trajectory::jumps)
      .def_readonly("horizon", &Trajectory::horizon)
      .def("jump_count", &Trajectory::jump_count)
      .def("final_state", &Trajectory::final_state)
      .def("state_at", &Trajectory::state_at, py::arg("t"))
      .def("states", &Trajectory::states);

  py::class_<EmbeddedChainSpec>(m, "EmbeddedChainSpec")
      .def_readonly("Pi", &EmbeddedChainSpec::Pi)
      .def_readonly("rates", &EmbeddedChainSpec::rates);

  m.def("embed", &embed, py::arg("generator"));
  m.def("sample_trajectory", &sample_trajectory, py::arg("spec"),
        py::arg("start"), py::arg("horizon"), py::arg("seed"));
  m.def("sample_ensemble", &sample_ensemble, py::arg("spec"), py::arg("start"),
        py::arg("horizon"), py::arg("seed"), py::arg("count"));
  m.def("transition_kernel", &transition_kernel, py::arg("generator"),
        py::arg("t"), py::arg("tol") = 1e-12);
  m.def("discretize", &discretize, py::arg("trajectory"), py::arg("delta"));
  m.def("small_delta_entropy", &small_delta_entropy, py::arg("generator"),
        py::arg("delta"));

  py::class_<FlowMatrix>(m, "FlowMatrix").def_readonly("r", &FlowMatrix::r);
  m.def("flow_of", &flow_of, py::arg("generator"));
  m.def("objective_f", &objective_f, py::arg("flow"), py::arg("pi"),
        py::arg("graph"));
  m.def("sample_feasible_generator", &sample_feasible_generator,
        py::arg("graph"), py::arg("seed"), py::arg("rate_lo") = 0.1,
        py::arg("rate_hi") = 10.0);

  py::class_<SweepReport>(m, "SweepReport")
      .def_readonly("trials", &SweepReport::trials)
      .def_readonly("eta", &SweepReport::eta)
      .def_readonly("lambda_", &SweepReport::lambda)
      .def_readonly("ceiling", &SweepReport::ceiling)
      .def_readonly("max_h", &SweepReport::max_h)
      .def_readonly("min_margin", &SweepReport::min_margin)
      .def_readonly("mean_margin", &SweepReport::mean_margin)
      .def_readonly("all_below_ceiling", &SweepReport::all_below_ceiling)
      .def_readonly("perturbations", &SweepReport::perturbations)
      .def_readonly("degenerate_directions",
                    &SweepReport::degenerate_directions)
      .def_readonly("max_perturbation_increase",
                    &SweepReport::max_perturbation_increase)
      .def_readonly("perturbations_stationary",
                    &SweepReport::perturbations_stationary)
      .def_readonly("passed", &SweepReport::passed);

  m.def(
      "maximality_sweep",
      [](const DirectedGraph& g, double eta, int trials, std::uint64_t seed,
         int perturbations, double step) {
        return maximality_sweep(g, EntropyConfig{eta}, trials, seed,
                                perturbations, step);
      },
      py::arg("graph"), py::arg("eta"), py::arg("trials"), py::arg("seed"),
      py::arg("perturbations") = 100, py::arg("step") = 1e-4);

  py::class_<DualCertificate>(m, "DualCertificate")
      .def_readonly("alpha", &DualCertificate::alpha)
      .def_readonly("beta", &DualCertificate::beta)
      .def_readonly("lagrangian_value", &DualCertificate::lagrangian_value);

  m.def("dual_certificate", &dual_certificate, py::arg("perron_data"),
        py::arg("graph"));
  m.def("lagrangian_inner_value", &lagrangian_inner_value,
        py::arg("perron_data"), py::arg("graph"), py::arg("pi"));
  m.def("enumerate_paths", &enumerate_paths, py::arg("graph"),
        py::arg("from_node"), py::arg("to_node"), py::arg("steps"),
        py::arg("cap") = 1000000);

  py::class_<PathReport>(m, "PathReport")
      .def_readonly("from_node", &PathReport::from)
      .def_readonly("to_node", &PathReport::to)
      .def_readonly("steps", &PathReport::steps)
      .def_readonly("horizon", &PathReport::horizon)
      .def_readonly("samples", &PathReport::samples)
      .def_readonly("vacuous", &PathReport::vacuous)
      .def_readonly("paths", &PathReport::paths)
      .def_readonly("exact_prob_each", &PathReport::exact_prob_each)
      .def_readonly("joint_prob_each", &PathReport::joint_prob_each)
      .def_readonly("empirical_counts", &PathReport::empirical_counts)
      .def_readonly("max_product_deviation",
                    &PathReport::max_product_deviation)
      .def_readonly("max_pairwise_z", &PathReport::max_pairwise_z)
      .def_readonly("max_joint_z", &PathReport::max_joint_z)
      .def_readonly("exact_ok", &PathReport::exact_ok)
      .def_readonly("mc_ok", &PathReport::mc_ok)
      .def_readonly("passed", &PathReport::passed);

  m.def("path_equalization_check", &path_equalization_check, py::arg("graph"),
        py::arg("perron_data"), py::arg("from_node"), py::arg("to_node"),
        py::arg("steps"), py::arg("horizon"), py::arg("samples"),
        py::arg("seed"));

  py::class_<CheckResult>(m, "CheckResult")
      .def_readonly("name", &CheckResult::name)
      .def_readonly("passed", &CheckResult::passed)
      .def_readonly("observed", &CheckResult::observed)
      .def_readonly("tolerance", &CheckResult::tolerance)
      .def_readonly("details", &CheckResult::details)
      .def("__repr__", [](const CheckResult& c) {
        return "CheckResult(" + c.name + ", " +
               (c.passed ? "passed" : "FAILED") + ")";
      });

  py::class_<VerifyOptions>(m, "VerifyOptions")
      .def(py::init<>())
      .def_readwrite("eta", &VerifyOptions::eta)
      .def_readwrite("trials", &VerifyOptions::trials)
      .def_readwrite("perturbations", &VerifyOptions::perturbations)
      .def_readwrite("seed", &VerifyOptions::seed)
      .def_readwrite("t_f", &VerifyOptions::t_f)
      .def_readwrite("trajectories", &VerifyOptions::trajectories)
      .def_readwrite("from_node", &VerifyOptions::from)
      .def_readwrite("to_node", &VerifyOptions::to)
      .def_readwrite("steps", &VerifyOptions::steps)
      .def_readwrite("tol", &VerifyOptions::tol);

  py::class_<VerifyReport>(m, "VerifyReport")
      .def_readonly("checks", &VerifyReport::checks)
      .def_readonly("passed", &VerifyReport::passed)
      .def_readonly("sweep", &VerifyReport::sweep)
      .def_readonly("path_report", &VerifyReport::path_report);

  m.def("run_verification", &run_verification, py::arg("graph"),
        py::arg("options") = VerifyOptions{});
  m.def(
      "verify_report_json",
      [](const VerifyReport& report) { return to_json(report).dump(2); },
      py::arg("report"), "Serialize a verification report to JSON text.");

#ifdef RBWALK_VERSION
  m.attr("__version__") = RBWALK_VERSION;
#else
  m.attr("__version__") = "dev";
#endif
}
