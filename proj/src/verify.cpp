#include "rbwalk/verify.hpp"

#include <algorithm>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>

#include "rbwalk/rng.hpp"

namespace rbwalk {

namespace {

std::string fmt_g(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

}  // namespace

FlowMatrix flow_of(const Generator& q) {
  return FlowMatrix{q.pi.asDiagonal() * q.Q};
}

double objective_f(const FlowMatrix& flow, const Eigen::VectorXd& pi,
                   const DirectedGraph& g) {
  const int n = g.size();
  if (flow.r.rows() != n || pi.size() != n)
    throw std::invalid_argument("flow/pi size does not match graph");
  double value = 0.0;
  for (int i = 0; i < n; ++i) {
    value -= flow.r(i, i);
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const double rij = flow.r(i, j);
      if (!g.has_edge(i, j)) {
        if (rij != 0.0)
          throw std::invalid_argument(
              "flow mass outside the edge support at (" + std::to_string(i) +
              "," + std::to_string(j) + ")");
        continue;
      }
      if (rij > 0.0) value -= rij * std::log(rij / pi(i));
    }
  }
  return value;
}

Generator sample_feasible_generator(const DirectedGraph& g, std::uint64_t seed,
                                    double rate_lo, double rate_hi) {
  if (!(0.0 < rate_lo && rate_lo <= rate_hi))
    throw std::invalid_argument("need 0 < rate_lo <= rate_hi");
  const ValidationReport report = validate(g, GraphMode::ContinuousTime);
  if (!report.valid)
    throw std::invalid_argument("graph invalid for generators: " +
                                report.summary());
  const int n = g.size();
  Xoshiro256 rng(seed);
  const double log_lo = std::log(rate_lo);
  const double log_span = std::log(rate_hi) - log_lo;
  Generator gen;
  gen.Q = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    double row_sum = 0.0;
    for (int j : g.out_neighbors(i)) {
      const double rate = std::exp(log_lo + rng.uniform01() * log_span);
      gen.Q(i, j) = rate;
      row_sum += rate;
    }
    gen.Q(i, i) = -row_sum;
  }
  gen.pi = stationary_of_generator(gen.Q);
  return gen;
}

namespace {

// Orthogonal projection (von Neumann alternating projections) onto the
// directions with zero row and column sums over the given support pattern.
bool project_balanced(Eigen::MatrixXd& d,
                      const std::vector<std::vector<int>>& row_support,
                      const std::vector<std::vector<int>>& col_support) {
  const auto n = d.rows();
  for (int sweep = 0; sweep < 1000; ++sweep) {
    double worst = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto& cols = row_support[i];
      if (cols.empty()) continue;
      double mean = 0.0;
      for (int j : cols) mean += d(i, j);
      mean /= double(cols.size());
      for (int j : cols) d(i, j) -= mean;
    }
    for (Eigen::Index j = 0; j < n; ++j) {
      const auto& rows = col_support[j];
      if (rows.empty()) continue;
      double mean = 0.0;
      for (int i : rows) mean += d(i, j);
      mean /= double(rows.size());
      for (int i : rows) d(i, j) -= mean;
      for (int i : rows) worst = std::max(worst, std::abs(d(i, j)));
    }
    double unbalanced = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
      unbalanced = std::max(unbalanced, std::abs(d.row(i).sum()));
    for (Eigen::Index j = 0; j < n; ++j)
      unbalanced = std::max(unbalanced, std::abs(d.col(j).sum()));
    if (unbalanced <= 1e-14 * std::max(1.0, worst)) return true;
  }
  return false;
}

double poisson_tail_kmax(double mean, double tail) {
  double pmf = std::exp(-mean);
  double cdf = pmf;
  long k = 0;
  while (1.0 - cdf > tail && k < 100000) {
    ++k;
    pmf *= mean / double(k);
    cdf += pmf;
  }
  return double(k);
}

}  // namespace

SweepReport maximality_sweep(const DirectedGraph& g, const EntropyConfig& cfg,
                             int trials, std::uint64_t seed, int perturbations,
                             double step) {
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (perturbations < 0)
    throw std::invalid_argument("perturbations must be >= 0");

  const PerronData p = perron(g);
  const Generator optimum =
      scale_generator(build_rb_generator(p, g), EntropyConfig{cfg.eta});

  SweepReport report;
  report.trials = trials;
  report.eta = cfg.eta;
  report.lambda = p.lambda;
  report.ceiling = std::exp(cfg.eta - 1.0) * p.lambda;
  report.perturbations = perturbations;

  double min_margin = std::numeric_limits<double>::infinity();
  double margin_sum = 0.0;
  double max_h = -std::numeric_limits<double>::infinity();
  report.all_below_ceiling = true;
  for (int k = 0; k < trials; ++k) {
    const Generator sample =
        sample_feasible_generator(g, substream_seed(seed, std::uint64_t(k)));
    const double h = differential_entropy_rate(sample, cfg);
    const double margin = report.ceiling - h;
    max_h = std::max(max_h, h);
    min_margin = std::min(min_margin, margin);
    margin_sum += margin;
    if (h > report.ceiling + 1e-9 && report.all_below_ceiling) {
      report.all_below_ceiling = false;
      report.counterexample_Q = sample.Q;
    }
  }
  report.max_h = max_h;
  report.min_margin = min_margin;
  report.mean_margin = margin_sum / double(trials);

  // Stationarity probe: move the optimum's flow along random directions that
  // keep both balance constraints and the support (edges plus diagonal).
  const int n = g.size();
  std::vector<std::vector<int>> row_support(n), col_support(n);
  for (int i = 0; i < n; ++i) {
    row_support[i] = g.out_neighbors(i);
    row_support[i].push_back(i);
    std::sort(row_support[i].begin(), row_support[i].end());
  }
  for (int i = 0; i < n; ++i)
    for (int j : row_support[i]) col_support[j].push_back(i);

  const FlowMatrix base_flow = flow_of(optimum);
  const double h_base = differential_entropy_rate(optimum, cfg);
  Xoshiro256 dir_rng(mix64(seed ^ 0x70657274757262ULL));
  double max_increase = -std::numeric_limits<double>::infinity();
  int degenerate = 0;
  for (int k = 0; k < perturbations; ++k) {
    Eigen::MatrixXd dir = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i)
      for (int j : row_support[i]) dir(i, j) = 2.0 * dir_rng.uniform01() - 1.0;
    if (!project_balanced(dir, row_support, col_support)) {
      ++degenerate;
      continue;
    }
    const double scale = dir.cwiseAbs().maxCoeff();
    if (scale < 1e-12) {
      ++degenerate;  // no nontrivial balanced direction on this support
      continue;
    }
    dir /= scale;

    // Largest step keeping off-diagonal flow nonnegative and the diagonal
    // negative; 0.45 leaves the perturbed point strictly interior.
    double eps = step;
    for (int i = 0; i < n; ++i)
      for (int j : row_support[i]) {
        const double dij = dir(i, j);
        const double rij = base_flow.r(i, j);
        if (i == j ? dij > 0.0 : dij < 0.0)
          eps = std::min(eps, 0.45 * std::abs(rij) / std::abs(dij));
      }
    const Eigen::MatrixXd perturbed_flow = base_flow.r + eps * dir;
    const Eigen::MatrixXd q_pert =
        optimum.pi.cwiseInverse().asDiagonal() * perturbed_flow;
    const double h = differential_entropy_rate(Generator{q_pert, optimum.pi},
                                               cfg);
    max_increase = std::max(max_increase, h - h_base);
  }
  report.degenerate_directions = degenerate;
  report.max_perturbation_increase =
      perturbations > degenerate ? max_increase : 0.0;
  report.perturbations_stationary = report.max_perturbation_increase <= 1e-8;
  report.passed = report.all_below_ceiling && report.perturbations_stationary;
  return report;
}

DualCertificate dual_certificate(const PerronData& p, const DirectedGraph& g) {
  DualCertificate cert;
  cert.beta = p.phi.array().log().matrix();
  cert.alpha = (1.0 - cert.beta.array()).matrix();
  cert.lagrangian_value = lagrangian_inner_value(p, g, stationary_rb(p));
  return cert;
}

double lagrangian_inner_value(const PerronData& p, const DirectedGraph& g,
                              const Eigen::VectorXd& pi) {
  const int n = g.size();
  if (p.phi.size() != n || pi.size() != n)
    throw std::invalid_argument("size mismatch");
  const Eigen::VectorXd beta = p.phi.array().log().matrix();
  const Eigen::VectorXd alpha = (1.0 - beta.array()).matrix();
  double value = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j : g.out_neighbors(i))
      if (j != i) value += pi(i) * std::exp(alpha(i) + beta(j) - 1.0);
  return value;
}

namespace {

// Depth-first walk over all `steps`-edge paths from `from` to `to`,
// lexicographic by node sequence. The callback sees a reusable buffer.
template <typename Fn>
void visit_paths(const DirectedGraph& g, int from, int to, int steps,
                 std::vector<int>& path, Fn&& fn) {
  const int node = path.back();
  if (int(path.size()) == steps + 1) {
    if (node == to) fn(path);
    return;
  }
  for (int next : g.out_neighbors(node)) {
    path.push_back(next);
    visit_paths(g, from, to, steps, path, fn);
    path.pop_back();
  }
}

}  // namespace

std::vector<std::vector<int>> enumerate_paths(const DirectedGraph& g, int from,
                                              int to, int steps,
                                              std::int64_t cap) {
  const int n = g.size();
  if (from < 0 || from >= n || to < 0 || to >= n)
    throw std::invalid_argument("node id out of range");
  if (steps < 1) throw std::invalid_argument("steps must be >= 1");
  std::vector<std::vector<int>> paths;
  std::vector<int> buffer{from};
  visit_paths(g, from, to, steps, buffer, [&](const std::vector<int>& path) {
    if (std::int64_t(paths.size()) >= cap)
      throw std::length_error("more than " + std::to_string(cap) +
                              " paths; use a smaller number of steps");
    paths.push_back(path);
  });
  return paths;
}

PathReport path_equalization_check(const DirectedGraph& g, const PerronData& p,
                                   int from, int to, int steps, double horizon,
                                   int samples, std::uint64_t seed) {
  if (steps < 1) throw std::invalid_argument("steps must be >= 1");
  if (horizon <= 0.0) throw std::invalid_argument("horizon must be positive");
  if (samples < 0) throw std::invalid_argument("samples must be nonnegative");

  PathReport report;
  report.from = from;
  report.to = to;
  report.steps = steps;
  report.horizon = horizon;
  report.samples = samples;
  report.paths = enumerate_paths(g, from, to, steps);
  report.exact_prob_each =
      path_probability_formula(p, from, to, steps, /*conditional=*/true);

  // Probability of seeing exactly `steps` jumps in [0, horizon]: all RB
  // holding rates equal lambda, so the jump count is Poisson(lambda horizon).
  double pmf = std::exp(-p.lambda * horizon);
  for (int k = 1; k <= steps; ++k) pmf *= p.lambda * horizon / double(k);
  report.joint_prob_each = pmf * report.exact_prob_each;

  if (report.paths.size() < 2) {
    report.vacuous = true;
    report.exact_ok = report.mc_ok = report.passed = true;
    return report;
  }

  const DiscreteChain chain = build_discrete_rb(p, g);
  double max_dev = 0.0;
  for (const auto& path : report.paths) {
    double product = 1.0;
    for (std::size_t k = 0; k + 1 < path.size(); ++k)
      product *= chain.P(path[k], path[k + 1]);
    max_dev = std::max(max_dev, std::abs(product - report.exact_prob_each));
  }
  report.max_product_deviation = max_dev;
  report.exact_ok = max_dev <= 1e-12;

  report.empirical_counts.assign(report.paths.size(), 0);
  if (samples > 0) {
    std::map<std::vector<int>, std::size_t> index;
    for (std::size_t k = 0; k < report.paths.size(); ++k)
      index[report.paths[k]] = k;
    const Generator rb = build_rb_generator(p, g);
    const EmbeddedChainSpec spec = embed(rb);
    for (int k = 0; k < samples; ++k) {
      const Trajectory traj = sample_trajectory(
          spec, from, horizon, substream_seed(seed, std::uint64_t(k)));
      if (traj.jump_count() != steps || traj.final_state() != to) continue;
      const auto hit = index.find(traj.states());
      if (hit == index.end())
        throw std::logic_error("sampled path missing from enumeration");
      ++report.empirical_counts[hit->second];
    }

    const double total = double(samples);
    double max_pairwise = 0.0;
    for (std::size_t a = 0; a < report.paths.size(); ++a)
      for (std::size_t b = a + 1; b < report.paths.size(); ++b) {
        const double pa = double(report.empirical_counts[a]) / total;
        const double pb = double(report.empirical_counts[b]) / total;
        const double diff = pa - pb;
        const double var = (pa + pb - diff * diff) / total;
        if (var <= 0.0) {
          if (diff != 0.0) max_pairwise = 4.0 + std::abs(diff) * total;
          continue;
        }
        max_pairwise = std::max(max_pairwise, std::abs(diff) / std::sqrt(var));
      }
    report.max_pairwise_z = max_pairwise;

    double max_joint = 0.0;
    const double pj = report.joint_prob_each;
    const double sigma = std::sqrt(pj * (1.0 - pj) / total);
    for (std::size_t a = 0; a < report.paths.size(); ++a) {
      const double freq = double(report.empirical_counts[a]) / total;
      max_joint = std::max(max_joint, std::abs(freq - pj) / sigma);
    }
    report.max_joint_z = max_joint;
    report.mc_ok = max_pairwise < 4.0 && max_joint < 4.0;
  } else {
    report.mc_ok = true;  // Monte Carlo part skipped
  }
  report.passed = report.exact_ok && report.mc_ok;
  return report;
}

double poisson_gof_pvalue(const std::vector<std::int64_t>& counts, double mean,
                          long total, double* chi2_out, int* dof_out) {
  if (total <= 0) throw std::invalid_argument("total must be positive");
  // Greedy binning left to right; every bin keeps expected mass >= 5, the
  // remaining Poisson tail joins the final bin.
  std::vector<double> expected;
  std::vector<double> observed;
  double pmf = std::exp(-mean);
  double bin_expected = 0.0, bin_observed = 0.0, cdf = 0.0;
  for (std::size_t k = 0; k < counts.size(); ++k) {
    if (k > 0) pmf *= mean / double(k);
    cdf += pmf;
    bin_expected += pmf * double(total);
    bin_observed += double(counts[k]);
    if (bin_expected >= 5.0) {
      expected.push_back(bin_expected);
      observed.push_back(bin_observed);
      bin_expected = bin_observed = 0.0;
    }
  }
  // Tail beyond the histogram.
  bin_expected += (1.0 - cdf) * double(total);
  if (expected.empty()) {
    expected.push_back(bin_expected);
    observed.push_back(bin_observed);
  } else {
    expected.back() += bin_expected;
    observed.back() += bin_observed;
  }
  if (expected.size() < 2)
    throw std::invalid_argument("not enough mass for a goodness-of-fit test");

  double chi2 = 0.0;
  for (std::size_t b = 0; b < expected.size(); ++b) {
    const double diff = observed[b] - expected[b];
    chi2 += diff * diff / expected[b];
  }
  const int dof = int(expected.size()) - 1;
  if (chi2_out) *chi2_out = chi2;
  if (dof_out) *dof_out = dof;
  return boost::math::gamma_q(double(dof) / 2.0, chi2 / 2.0);
}

namespace {

CheckResult make_check(const std::string& name, double observed,
                       double tolerance, bool passed,
                       const std::string& details = "") {
  return CheckResult{name, passed, observed, tolerance, details};
}

CheckResult check_upper(const std::string& name, double observed,
                        double tolerance, const std::string& details = "") {
  return make_check(name, observed, tolerance, observed <= tolerance, details);
}

}  // namespace

VerifyReport run_verification(const DirectedGraph& g,
                              const VerifyOptions& opt) {
  VerifyReport report;
  const EntropyConfig cfg{opt.eta};
  const PerronData p = perron(g, std::min(opt.tol, 1e-12));
  const DiscreteChain chain = build_discrete_rb(p, g);
  Generator rb = build_rb_generator(p, g);
  if (opt.corrupt_generator) {
    // Hidden negative control: a feasible generator that is not the optimum.
    for (int i = 0; i < g.size(); ++i) {
      if (g.out_neighbors(i).empty()) continue;
      rb.Q(i, g.out_neighbors(i).front()) *= 2.0;
      rb.Q(i, i) = 0.0;
      rb.Q(i, i) = -rb.Q.row(i).sum();
      break;
    }
    rb.pi = stationary_of_generator(rb.Q);
  }
  const double lambda = p.lambda;
  const double log_lambda = std::log(lambda);

  auto& checks = report.checks;

  {  // h_1(Q) = lambda and H(P) = log lambda
    const double h1 = differential_entropy_rate(rb, EntropyConfig{1.0});
    const double hp = discrete_entropy_rate(chain);
    const double dev =
        std::max(std::abs(h1 - lambda), std::abs(hp - log_lambda));
    checks.push_back(check_upper("entropy_attainment", dev, 1e-10,
                                 "h1=" + fmt_g(h1) + " H=" + fmt_g(hp) +
                                     " lambda=" + fmt_g(lambda)));
  }

  {  // Q = lambda (P - I)
    const Eigen::MatrixXd expected =
        lambda *
        (chain.P - Eigen::MatrixXd::Identity(g.size(), g.size()));
    const double dev = (rb.Q - expected).cwiseAbs().maxCoeff();
    checks.push_back(check_upper("closing_identity", dev, 1e-12));
  }

  {  // embedded chain of the RB generator: uniform rates, jump chain = P
    const EmbeddedChainSpec spec = embed(rb);
    double dev = (spec.rates.array() - lambda).abs().maxCoeff();
    Eigen::MatrixXd expected = chain.P;
    expected.diagonal().setZero();
    dev = std::max(dev, (spec.Pi - expected).cwiseAbs().maxCoeff());
    checks.push_back(check_upper("embedded_chain", dev, 1e-12));
  }

  {  // h_eta(e^{eta-1} Q) = e^{eta-1} lambda for eta in {0.5, 1, 2, 5}
    double dev = 0.0;
    for (double eta : {0.5, 1.0, 2.0, 5.0}) {
      const Generator scaled = scale_generator(rb, EntropyConfig{eta});
      const double h = differential_entropy_rate(scaled, EntropyConfig{eta});
      dev = std::max(dev, std::abs(h - std::exp(eta - 1.0) * lambda));
    }
    checks.push_back(check_upper("corollary_scaling", dev, 1e-10));
  }

  {  // maximality sweep and stationarity at the optimum
    report.sweep = maximality_sweep(g, cfg, opt.trials, opt.seed,
                                    opt.perturbations);
    checks.push_back(make_check(
        "maximality_ceiling", -report.sweep.min_margin, 1e-9,
        report.sweep.all_below_ceiling,
        "min margin " + fmt_g(report.sweep.min_margin) + " over " +
            std::to_string(report.sweep.trials) + " samples"));
    checks.push_back(check_upper(
        "perturbation_stationarity", report.sweep.max_perturbation_increase,
        1e-8,
        std::to_string(report.sweep.perturbations -
                       report.sweep.degenerate_directions) +
            " directions probed"));
  }

  {  // dual certificate value
    const DualCertificate cert = dual_certificate(p, g);
    checks.push_back(check_upper("dual_certificate",
                                 std::abs(cert.lagrangian_value - lambda),
                                 1e-10));
  }

  {  // flow balances and the objective bridge f(flow(Q), pi) = h_1(Q)
    double balance_dev = 0.0, bridge_dev = 0.0;
    for (int k = 0; k < 100; ++k) {
      const Generator sample = sample_feasible_generator(
          g, substream_seed(opt.seed, 0x1000000ULL + std::uint64_t(k)));
      const FlowMatrix flow = flow_of(sample);
      for (int j = 0; j < g.size(); ++j)
        balance_dev = std::max(balance_dev, std::abs(flow.r.col(j).sum()));
      for (int i = 0; i < g.size(); ++i)
        balance_dev = std::max(balance_dev, std::abs(flow.r.row(i).sum()));
      const double f = objective_f(flow, sample.pi, g);
      const double h = differential_entropy_rate(sample, EntropyConfig{1.0});
      bridge_dev = std::max(bridge_dev, std::abs(f - h));
    }
    checks.push_back(check_upper("flow_balance", balance_dev, 1e-10,
                                 "100 random feasible generators"));
    checks.push_back(check_upper("flow_objective_bridge", bridge_dev, 1e-10,
                                 "100 random feasible generators"));
  }

  if (g.size() <= 6) {  // exact path equalization, exhaustive at desk scale
    double product_dev = 0.0, sum_rule_dev = 0.0;
    Eigen::MatrixXd power = Eigen::MatrixXd::Identity(g.size(), g.size());
    for (int steps = 1; steps <= 8; ++steps) {
      power = power * chain.P;
      for (int i = 0; i < g.size(); ++i)
        for (int j = 0; j < g.size(); ++j) {
          const double each =
              path_probability_formula(p, i, j, steps, /*conditional=*/true);
          std::int64_t found = 0;
          std::vector<int> buffer{i};
          visit_paths(g, i, j, steps, buffer,
                      [&](const std::vector<int>& path) {
                        double product = 1.0;
                        for (std::size_t k = 0; k + 1 < path.size(); ++k)
                          product *= chain.P(path[k], path[k + 1]);
                        product_dev = std::max(product_dev,
                                               std::abs(product - each));
                        ++found;
                      });
          sum_rule_dev = std::max(
              sum_rule_dev, std::abs(double(found) * each - power(i, j)));
        }
    }
    checks.push_back(check_upper("path_products", product_dev, 1e-12,
                                 "all pairs, up to 8 steps"));
    checks.push_back(check_upper("path_sum_rule", sum_rule_dev, 1e-10,
                                 "all pairs, up to 8 steps"));
  }

  {  // Monte Carlo path equalization at the configured endpoints
    report.path_report = path_equalization_check(
        g, p, opt.from, opt.to, opt.steps, opt.t_f, opt.trajectories,
        substream_seed(opt.seed, 0x2000000ULL));
    const std::string label =
        report.path_report.vacuous
            ? "vacuous: fewer than two paths"
            : std::to_string(report.path_report.paths.size()) + " paths";
    checks.push_back(make_check(
        "path_equalization",
        std::max(report.path_report.max_pairwise_z,
                 report.path_report.max_joint_z),
        4.0, report.path_report.passed, label));
  }

  {  // joint-probability sum rule against the kernel
    const double t = opt.t_f;
    const int kmax = int(poisson_tail_kmax(lambda * t, 1e-12));
    const Eigen::MatrixXd kernel = transition_kernel(rb, t, 1e-14);
    Eigen::MatrixXd total = Eigen::MatrixXd::Zero(g.size(), g.size());
    double pmf = std::exp(-lambda * t);
    double truncated_mass = 0.0;
    // Exact integer path counts, advanced one power at a time.
    std::vector<std::vector<std::int64_t>> walk_counts(
        g.size(), std::vector<std::int64_t>(g.size(), 0));
    for (int i = 0; i < g.size(); ++i) walk_counts[i][i] = 1;
    int reached = 0;
    double decay = 1.0;
    for (int steps = 0; steps <= kmax; ++steps) {
      if (steps > 0) {
        pmf *= lambda * t / double(steps);
        decay /= lambda;
        bool overflow = false;
        std::vector<std::vector<std::int64_t>> next(
            g.size(), std::vector<std::int64_t>(g.size(), 0));
        for (int i = 0; i < g.size() && !overflow; ++i)
          for (int k = 0; k < g.size() && !overflow; ++k) {
            if (walk_counts[i][k] == 0) continue;
            for (int j : g.out_neighbors(k)) {
              if (__builtin_add_overflow(next[i][j], walk_counts[i][k],
                                         &next[i][j])) {
                overflow = true;
                break;
              }
            }
          }
        if (overflow) break;
        walk_counts.swap(next);
      }
      reached = steps;
      for (int i = 0; i < g.size(); ++i)
        for (int j = 0; j < g.size(); ++j)
          total(i, j) += pmf * double(walk_counts[i][j]) *
                         p.phi(j) / p.phi(i) * decay;
    }
    // Poisson mass beyond the last summed term bounds the truncation error.
    double cdf = std::exp(-lambda * t);
    double term = cdf;
    for (int k = 1; k <= reached; ++k) {
      term *= lambda * t / double(k);
      cdf += term;
    }
    truncated_mass = std::max(0.0, 1.0 - cdf);
    const double dev = (total - kernel).cwiseAbs().maxCoeff();
    checks.push_back(check_upper(
        "joint_sum_rule", dev, 1e-8 + truncated_mass,
        "summed " + std::to_string(reached + 1) + " jump counts"));
  }

  {  // semigroup identity on random time pairs
    Xoshiro256 rng(mix64(opt.seed ^ 0x73656d69ULL));
    double dev = 0.0;
    for (int k = 0; k < 3; ++k) {
      const double s = 5.0 * rng.uniform_pos();
      const double t = 5.0 * rng.uniform_pos();
      const Eigen::MatrixXd lhs = transition_kernel(rb, s + t, 1e-13);
      const Eigen::MatrixXd rhs =
          transition_kernel(rb, s, 1e-13) * transition_kernel(rb, t, 1e-13);
      dev = std::max(dev, (lhs - rhs).cwiseAbs().maxCoeff());
    }
    checks.push_back(check_upper("semigroup", dev, 1e-10, "3 random (s,t)"));
  }

  {  // invariance pi' exp(Qt) = pi' and strict positivity of the kernel
    double dev = 0.0;
    for (double t : {0.1, 1.0, 10.0}) {
      const Eigen::MatrixXd kernel = transition_kernel(rb, t, 1e-13);
      dev = std::max(
          dev, ((kernel.transpose() * rb.pi) - rb.pi).cwiseAbs().maxCoeff());
    }
    checks.push_back(check_upper("kernel_invariance", dev, 1e-10,
                                 "t in {0.1, 1, 10}"));
    const double min_entry = transition_kernel(rb, 0.1, 1e-13).minCoeff();
    checks.push_back(make_check("kernel_positivity", min_entry, 0.0,
                                min_entry > 0.0, "t = 0.1"));
  }

  {  // rows of exp(Qt) approach the invariant measure
    double dev = std::numeric_limits<double>::infinity();
    double used_t = 0.0;
    for (double t : {10.0, 25.0, 50.0, 100.0, 200.0}) {
      const Eigen::MatrixXd kernel = transition_kernel(rb, t, 1e-14);
      double worst = 0.0;
      for (int i = 0; i < g.size(); ++i)
        worst = std::max(
            worst,
            (kernel.row(i).transpose() - rb.pi).cwiseAbs().maxCoeff());
      used_t = t;
      dev = worst;
      if (worst <= 1e-10) break;
    }
    checks.push_back(check_upper("ergodic_limit", dev, 1e-10,
                                 "rows of exp(Q t) at t = " + fmt_g(used_t)));
  }

  {  // sampled law: Poisson jump counts, holding rates, end-state law
    const EmbeddedChainSpec spec = embed(rb);
    const auto ensemble =
        sample_ensemble(spec, opt.from, opt.t_f,
                        substream_seed(opt.seed, 0x3000000ULL),
                        opt.trajectories);
    const double mean_jumps = lambda * opt.t_f;

    std::vector<std::int64_t> histogram;
    double sum_jumps = 0.0;
    for (const Trajectory& traj : ensemble) {
      const std::size_t jumps = traj.jumps.size();
      if (histogram.size() <= jumps) histogram.resize(jumps + 1, 0);
      ++histogram[jumps];
      sum_jumps += double(jumps);
    }
    const double empirical_mean = sum_jumps / double(ensemble.size());
    const double sigma_mean =
        std::sqrt(mean_jumps / double(ensemble.size()));
    checks.push_back(check_upper(
        "jump_count_mean", std::abs(empirical_mean - mean_jumps),
        3.0 * sigma_mean,
        "mean " + fmt_g(empirical_mean) + " vs " + fmt_g(mean_jumps)));

    double chi2 = 0.0;
    int dof = 0;
    const double pvalue = poisson_gof_pvalue(histogram, mean_jumps,
                                             long(ensemble.size()), &chi2,
                                             &dof);
    checks.push_back(make_check(
        "jump_count_gof", pvalue, 0.001, pvalue > 0.001,
        "chi2 " + fmt_g(chi2) + " with " + std::to_string(dof) + " dof"));

    // Every RB holding rate equals lambda; check each node's sample mean.
    std::vector<double> hold_sum(g.size(), 0.0);
    std::vector<long> hold_count(g.size(), 0);
    for (const Trajectory& traj : ensemble) {
      int state = traj.start;
      for (const Jump& jump : traj.jumps) {
        hold_sum[state] += jump.holding_time;
        ++hold_count[state];
        state = jump.next_state;
      }
    }
    double hold_z = 0.0;
    for (int i = 0; i < g.size(); ++i) {
      if (hold_count[i] == 0) continue;
      const double mean = hold_sum[i] / double(hold_count[i]);
      const double rate = spec.rates(i);
      const double sigma = (1.0 / rate) / std::sqrt(double(hold_count[i]));
      hold_z = std::max(hold_z, std::abs(mean - 1.0 / rate) / sigma);
    }
    checks.push_back(check_upper("holding_rate_uniformity", hold_z, 3.0,
                                 "per-node mean holding times"));

    const Eigen::MatrixXd kernel = transition_kernel(rb, opt.t_f, 1e-13);
    std::vector<long> end_counts(g.size(), 0);
    for (const Trajectory& traj : ensemble) ++end_counts[traj.final_state()];
    double end_z = 0.0;
    for (int j = 0; j < g.size(); ++j) {
      const double prob = kernel(opt.from, j);
      const double freq = double(end_counts[j]) / double(ensemble.size());
      const double sigma =
          std::sqrt(prob * (1.0 - prob) / double(ensemble.size()));
      if (sigma > 0.0)
        end_z = std::max(end_z, std::abs(freq - prob) / sigma);
    }
    checks.push_back(check_upper("end_state_law", end_z, 4.0,
                                 "X(t_f) versus exp(Q t_f) row " +
                                     std::to_string(opt.from)));
  }

  {  // small-delta entropy expansion
    double prev_gap = std::numeric_limits<double>::infinity();
    double final_gap = 0.0;
    bool monotone = true;
    for (double delta : {1e-2, 1e-3, 1e-4}) {
      const DiscreteChain sampled{transition_kernel(rb, delta, 1e-14), rb.pi};
      const double exact = discrete_entropy_rate(sampled);
      const double expansion = small_delta_entropy(rb, delta);
      const double gap = std::abs(exact / expansion - 1.0);
      if (gap > prev_gap) monotone = false;
      prev_gap = gap;
      final_gap = gap;
    }
    checks.push_back(make_check(
        "delta_entropy_ratio", final_gap, 0.02,
        monotone && final_gap <= 0.02,
        std::string("ratio over delta in {1e-2, 1e-3, 1e-4}") +
            (monotone ? "" : "; not monotone")));
  }

  report.passed = std::all_of(checks.begin(), checks.end(),
                              [](const CheckResult& c) { return c.passed; });
  return report;
}

}  // namespace rbwalk
