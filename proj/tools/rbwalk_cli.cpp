#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "rbwalk/graph.hpp"
#include "rbwalk/io.hpp"
#include "rbwalk/jump.hpp"
#include "rbwalk/rb.hpp"
#include "rbwalk/rng.hpp"
#include "rbwalk/spectral.hpp"
#include "rbwalk/verify.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitInputError = 2;

struct RunConfig {
  std::string subcommand;
  std::string graph_path;
  double eta = 1.0;
  double t_f = 1.0;
  int trajectories = 100000;
  std::uint64_t seed = 42;
  std::string output_path;
  int from = 0;
  int to = 0;
  int steps = 2;
  double delta = 1e-3;
  int trials = 1000;
  double tol = 1e-12;
  bool corrupt_generator = false;
};

rbwalk::json::Value config_json(const RunConfig& cfg) {
  rbwalk::json::Value doc = rbwalk::json::Value::object();
  doc["subcommand"] = cfg.subcommand;
  doc["graph"] = cfg.graph_path;
  doc["eta"] = cfg.eta;
  doc["tf"] = cfg.t_f;
  doc["trajectories"] = cfg.trajectories;
  doc["seed"] = cfg.seed;
  doc["out"] = cfg.output_path;
  doc["from"] = cfg.from;
  doc["to"] = cfg.to;
  doc["steps"] = cfg.steps;
  doc["delta"] = cfg.delta;
  doc["trials"] = cfg.trials;
  doc["tol"] = cfg.tol;
  return doc;
}

rbwalk::DirectedGraph load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open graph file: " + path);
  return rbwalk::load_edge_list(in);
}

void write_document(const std::string& path, const rbwalk::json::Value& doc) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  doc.write(out, 2);
  out << '\n';
}

int cmd_build(const RunConfig& cfg) {
  const rbwalk::DirectedGraph graph = load_graph(cfg.graph_path);
  const auto report =
      rbwalk::validate(graph, rbwalk::GraphMode::ContinuousTime);
  if (!report.valid) {
    std::cerr << "graph validation failed: " << report.summary() << "\n";
    return kExitInputError;
  }
  const rbwalk::PerronData p = rbwalk::perron(graph, cfg.tol);
  const rbwalk::DiscreteChain chain = rbwalk::build_discrete_rb(p, graph);
  const rbwalk::Generator gen = rbwalk::build_rb_generator(p, graph);
  const rbwalk::EntropyConfig entropy_cfg{cfg.eta};
  const double h_eta = rbwalk::differential_entropy_rate(gen, entropy_cfg);
  const double entropy_discrete = rbwalk::discrete_entropy_rate(chain);
  const double scaled_optimum = std::exp(cfg.eta - 1.0) * p.lambda;

  rbwalk::json::Value doc = rbwalk::result_bundle(p, chain, gen, cfg.eta,
                                                  h_eta, entropy_discrete);
  doc["config"] = config_json(cfg);
  doc["timestamp"] = rbwalk::iso_timestamp_utc();
  write_document(cfg.output_path, doc);

  std::printf("nodes %d, edges %d\n", graph.size(), graph.edge_count());
  std::printf("lambda           %.12g (residual %.3g)\n", p.lambda,
              p.residual);
  std::printf("H(P_RB)          %.12g nats/step (log lambda %.12g)\n",
              entropy_discrete, std::log(p.lambda));
  std::printf("h_eta(Q_RB)      %.12g nats/time at eta %.6g\n", h_eta,
              cfg.eta);
  std::printf("eta-optimal rate %.12g attained by e^(eta-1) Q_RB\n",
              scaled_optimum);
  std::printf("wrote %s\n", cfg.output_path.c_str());
  return kExitOk;
}

int cmd_simulate(const RunConfig& cfg) {
  const rbwalk::DirectedGraph graph = load_graph(cfg.graph_path);
  const auto report =
      rbwalk::validate(graph, rbwalk::GraphMode::ContinuousTime);
  if (!report.valid) {
    std::cerr << "graph validation failed: " << report.summary() << "\n";
    return kExitInputError;
  }
  if (cfg.from < 0 || cfg.from >= graph.size()) {
    std::cerr << "--from out of range\n";
    return kExitInputError;
  }
  const rbwalk::PerronData p = rbwalk::perron(graph, cfg.tol);
  const rbwalk::Generator gen = rbwalk::build_rb_generator(p, graph);
  const rbwalk::EmbeddedChainSpec spec = rbwalk::embed(gen);
  const auto ensemble = rbwalk::sample_ensemble(spec, cfg.from, cfg.t_f,
                                                cfg.seed, cfg.trajectories);

  std::ofstream out(cfg.output_path);
  if (!out) {
    std::cerr << "cannot open output file: " << cfg.output_path << "\n";
    return kExitInputError;
  }
  rbwalk::write_ensemble(out, ensemble, cfg.seed);

  double total_jumps = 0.0;
  std::vector<long> end_counts(graph.size(), 0);
  for (const auto& traj : ensemble) {
    total_jumps += traj.jump_count();
    ++end_counts[traj.final_state()];
  }
  const double mean = total_jumps / double(ensemble.size());
  const double expected = p.lambda * cfg.t_f;
  const double sigma = std::sqrt(expected / double(ensemble.size()));
  std::printf("%d trajectories from node %d, horizon %.6g, seed %llu\n",
              cfg.trajectories, cfg.from, cfg.t_f,
              static_cast<unsigned long long>(cfg.seed));
  std::printf("mean jump count  %.6f, lambda*tf = %.6f (3 sigma %.6f)\n",
              mean, expected, 3.0 * sigma);
  const Eigen::MatrixXd kernel =
      rbwalk::transition_kernel(gen, cfg.t_f, cfg.tol);
  std::printf("end-state law vs exp(Q tf) row %d:\n", cfg.from);
  for (int j = 0; j < graph.size(); ++j)
    std::printf("  state %d: empirical %.6f  kernel %.6f\n", j,
                double(end_counts[j]) / double(ensemble.size()),
                kernel(cfg.from, j));
  std::printf("wrote %s\n", cfg.output_path.c_str());
  return kExitOk;
}

int cmd_verify(const RunConfig& cfg) {
  const rbwalk::DirectedGraph graph = load_graph(cfg.graph_path);
  const auto validation =
      rbwalk::validate(graph, rbwalk::GraphMode::ContinuousTime);
  if (!validation.valid) {
    std::cerr << "graph validation failed: " << validation.summary() << "\n";
    return kExitInputError;
  }
  rbwalk::VerifyOptions opt;
  opt.eta = cfg.eta;
  opt.trials = cfg.trials;
  opt.seed = cfg.seed;
  opt.t_f = cfg.t_f;
  opt.trajectories = cfg.trajectories;
  opt.from = cfg.from;
  opt.to = cfg.to;
  opt.steps = cfg.steps;
  opt.tol = cfg.tol;
  opt.corrupt_generator = cfg.corrupt_generator;

  const rbwalk::VerifyReport report = rbwalk::run_verification(graph, opt);
  for (const auto& check : report.checks)
    std::printf("[%s] %-28s observed %.6g against %.6g%s%s\n",
                check.passed ? "PASS" : "FAIL", check.name.c_str(),
                check.observed, check.tolerance,
                check.details.empty() ? "" : "  -- ",
                check.details.c_str());
  std::printf("%s\n", report.passed ? "all checks passed"
                                    : "verification FAILED");
  if (!cfg.output_path.empty()) {
    rbwalk::json::Value doc = rbwalk::to_json(report);
    doc["config"] = config_json(cfg);
    doc["timestamp"] = rbwalk::iso_timestamp_utc();
    write_document(cfg.output_path, doc);
    std::printf("wrote %s\n", cfg.output_path.c_str());
  }
  return report.passed ? kExitOk : kExitVerifyFailed;
}

int cmd_entropy(const RunConfig& cfg) {
  const rbwalk::DirectedGraph graph = load_graph(cfg.graph_path);
  const auto report =
      rbwalk::validate(graph, rbwalk::GraphMode::ContinuousTime);
  if (!report.valid) {
    std::cerr << "graph validation failed: " << report.summary() << "\n";
    return kExitInputError;
  }
  const rbwalk::PerronData p = rbwalk::perron(graph, cfg.tol);
  const rbwalk::DiscreteChain chain = rbwalk::build_discrete_rb(p, graph);
  const rbwalk::Generator gen = rbwalk::build_rb_generator(p, graph);
  const double entropy_discrete = rbwalk::discrete_entropy_rate(chain);
  const double h_eta =
      rbwalk::differential_entropy_rate(gen, rbwalk::EntropyConfig{cfg.eta});
  std::printf("lambda      %.12g\n", p.lambda);
  std::printf("H(P_RB)     %.12g nats/step (log lambda %.12g)\n",
              entropy_discrete, std::log(p.lambda));
  std::printf("h_eta(Q_RB) %.12g nats/time at eta %.6g\n", h_eta, cfg.eta);
  std::printf("%-10s %-22s %-22s %s\n", "delta", "H(exp(Q delta))",
              "expansion", "ratio");
  for (double delta : {1e-2, 1e-3, 1e-4}) {
    const rbwalk::DiscreteChain sampled{
        rbwalk::transition_kernel(gen, delta, 1e-14), gen.pi};
    const double exact = rbwalk::discrete_entropy_rate(sampled);
    const double expansion = rbwalk::small_delta_entropy(gen, delta);
    std::printf("%-10.1e %-22.15g %-22.15g %.9f\n", delta, exact, expansion,
                exact / expansion);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ruelle-Bowen random walks on strongly connected digraphs"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto add_common = [&cfg](CLI::App* cmd) {
    cmd->add_option("--graph", cfg.graph_path, "edge-list file (src dst)")
        ->required();
    cmd->add_option("--eta", cfg.eta, "retention-rate weight")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--seed", cfg.seed, "RNG seed");
    cmd->add_option("--tol", cfg.tol, "numeric tolerance")
        ->check(CLI::PositiveNumber);
  };

  CLI::App* build = app.add_subcommand(
      "build", "construct the RB chain and generator, write a result bundle");
  add_common(build);
  build->add_option("--out", cfg.output_path, "bundle output path")
      ->required();

  CLI::App* simulate = app.add_subcommand(
      "simulate", "sample jump-process trajectories, write an ensemble file");
  add_common(simulate);
  simulate->add_option("--out", cfg.output_path, "ensemble output path")
      ->required();
  simulate->add_option("--tf", cfg.t_f, "time horizon")
      ->check(CLI::PositiveNumber);
  simulate
      ->add_option("--trajectories", cfg.trajectories, "ensemble size")
      ->check(CLI::Range(1, 100000000));
  simulate->add_option("--from", cfg.from, "start node");

  CLI::App* verify = app.add_subcommand(
      "verify", "run the full certification suite, exit 1 on any failure");
  add_common(verify);
  verify->add_option("--out", cfg.output_path, "report output path");
  verify->add_option("--tf", cfg.t_f, "time horizon")
      ->check(CLI::PositiveNumber);
  verify
      ->add_option("--trajectories", cfg.trajectories,
                   "Monte Carlo sample size")
      ->check(CLI::Range(1, 100000000));
  verify->add_option("--trials", cfg.trials, "sampled feasible generators")
      ->check(CLI::Range(1, 100000000));
  verify->add_option("--from", cfg.from, "path-check start node");
  verify->add_option("--to", cfg.to, "path-check end node");
  verify->add_option("--steps", cfg.steps, "path-check jump count")
      ->check(CLI::Range(1, 64));
  verify->add_flag("--corrupt-generator", cfg.corrupt_generator)->group("");

  CLI::App* entropy = app.add_subcommand(
      "entropy", "entropy rates and the small-delta expansion table");
  add_common(entropy);
  entropy->add_option("--delta", cfg.delta, "sampling interval")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInputError;
  }
  cfg.subcommand = app.get_subcommands().front()->get_name();

  try {
    if (build->parsed()) return cmd_build(cfg);
    if (simulate->parsed()) return cmd_simulate(cfg);
    if (verify->parsed()) return cmd_verify(cfg);
    if (entropy->parsed()) return cmd_entropy(cfg);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitInputError;
}
