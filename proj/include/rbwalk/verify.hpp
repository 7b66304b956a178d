#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "rbwalk/graph.hpp"
#include "rbwalk/jump.hpp"
#include "rbwalk/rb.hpp"
#include "rbwalk/spectral.hpp"

namespace rbwalk {

// pi-weighted flow r_ij = pi_i q_ij. Off-diagonal entries are nonnegative
// and supported on edges; the diagonal makes every row sum to zero, and
// column sums vanish because pi is invariant for Q.
struct FlowMatrix {
  Eigen::MatrixXd r;
};

FlowMatrix flow_of(const Generator& q);

// f(r, pi) = -sum_i r_ii - sum_{i != j} r_ij a_ij log(r_ij / (pi_i a_ij))
// with 0 log 0 := 0. Equals h_1(Q) when r = flow_of(Q) and pi is Q's
// invariant measure. Throws on flow mass outside the edge support.
double objective_f(const FlowMatrix& r, const Eigen::VectorXd& pi,
                   const DirectedGraph& g);

// Random generator on g: off-diagonal rates log-uniform on [lo, hi] over the
// edges, diagonal balancing each row, invariant measure solved exactly.
// Deterministic in seed.
Generator sample_feasible_generator(const DirectedGraph& g, std::uint64_t seed,
                                    double rate_lo = 0.1,
                                    double rate_hi = 10.0);

struct SweepReport {
  int trials = 0;
  double eta = 1.0;
  double lambda = 0.0;
  double ceiling = 0.0;  // e^{eta-1} lambda
  double max_h = 0.0;
  double min_margin = 0.0;   // ceiling - h, over all samples
  double mean_margin = 0.0;
  bool all_below_ceiling = false;
  int perturbations = 0;
  int degenerate_directions = 0;  // draws with no usable feasible direction
  double max_perturbation_increase = 0.0;
  bool perturbations_stationary = false;
  bool passed = false;
  // Populated only when a sample beats the ceiling.
  Eigen::MatrixXd counterexample_Q;
};

// Draws `trials` feasible generators and checks h_eta(Q) <= ceiling + 1e-9,
// then probes `perturbations` random feasible flow directions around the
// scaled optimum e^{eta-1} Q^RB (step 1e-4) and checks that none increases
// h_eta beyond 1e-8.
SweepReport maximality_sweep(const DirectedGraph& g, const EntropyConfig& cfg,
                             int trials, std::uint64_t seed,
                             int perturbations = 100, double step = 1e-4);

// Lagrange dual pair from the maximality argument: beta_j = log phi_j,
// alpha_i = 1 - beta_i. lagrangian_value evaluates the inner maximum
// sum_{i != j} pi_i (phi_j / phi_i) a_ij at pi = phi phi_hat; it equals
// lambda.
struct DualCertificate {
  Eigen::VectorXd alpha;
  Eigen::VectorXd beta;
  double lagrangian_value = 0.0;
};

DualCertificate dual_certificate(const PerronData& p, const DirectedGraph& g);

// Inner-maximum value for an arbitrary positive probability vector pi; the
// identity sum_{i != j} pi_i (phi_j / phi_i) a_ij = lambda holds for all pi
// on a graph without self loops.
double lagrangian_inner_value(const PerronData& p, const DirectedGraph& g,
                              const Eigen::VectorXd& pi);

// All walks with `steps` edges from `from` to `to`, DFS order (lexicographic
// in the node sequence). Throws std::length_error when more than `cap` paths
// exist.
std::vector<std::vector<int>> enumerate_paths(const DirectedGraph& g, int from,
                                              int to, int steps,
                                              std::int64_t cap = 1000000);

struct PathReport {
  int from = 0;
  int to = 0;
  int steps = 0;
  double horizon = 0.0;
  int samples = 0;
  bool vacuous = false;  // fewer than two alternative paths
  std::vector<std::vector<int>> paths;
  // Conditional probability of each single path given X_0 = from; one number
  // for all paths.
  double exact_prob_each = 0.0;
  // Joint probability of exactly `steps` jumps in [0, horizon] and one
  // specific path: PoissonPMF(steps; lambda horizon) * exact_prob_each.
  double joint_prob_each = 0.0;
  std::vector<std::int64_t> empirical_counts;  // aligned with `paths`
  double max_product_deviation = 0.0;  // worst |product - formula| over paths
  double max_pairwise_z = 0.0;         // worst pairwise frequency z-score
  double max_joint_z = 0.0;            // worst per-path joint-frequency z
  bool exact_ok = false;
  bool mc_ok = false;
  bool passed = false;
};

// Exact part: multiplies RB transition probabilities along every enumerated
// path and checks the products agree with the closed form to 1e-12. Monte
// Carlo part: bins trajectories with exactly `steps` jumps ending at `to`
// by path and checks pairwise frequency differences and per-path joint
// frequencies at 4 sigma. Vacuous cases (fewer than two paths) are reported,
// not failed.
PathReport path_equalization_check(const DirectedGraph& g, const PerronData& p,
                                   int from, int to, int steps, double horizon,
                                   int samples, std::uint64_t seed);

struct CheckResult {
  std::string name;
  bool passed = false;
  double observed = 0.0;   // worst deviation or statistic, check-specific
  double tolerance = 0.0;  // threshold it was compared against
  std::string details;
};

struct VerifyOptions {
  double eta = 1.0;
  int trials = 1000;
  int perturbations = 100;
  std::uint64_t seed = 42;
  double t_f = 1.0;
  int trajectories = 100000;
  int from = 0;
  int to = 0;
  int steps = 2;
  double tol = 1e-12;
  // Test hook: replaces the RB generator by a feasible but suboptimal one so
  // the certification must fail.
  bool corrupt_generator = false;
};

struct VerifyReport {
  std::vector<CheckResult> checks;
  bool passed = false;
  SweepReport sweep;
  PathReport path_report;
};

// Full certification battery on one graph: entropy attainment, closing
// identity, scaled family, maximality sweep, dual certificate, flow/objective
// bridge, exact and Monte Carlo path equalization, joint-probability sum
// rule, semigroup and ergodicity of the kernel, Poisson jump-count law,
// holding-rate uniformity, end-state law, and the small-delta entropy ratio.
VerifyReport run_verification(const DirectedGraph& g,
                              const VerifyOptions& opt);

// Survival-function p-value of a chi-square goodness-of-fit of observed
// jump counts against Poisson(mean); bins with expected count below 5 are
// merged into the tail.
double poisson_gof_pvalue(const std::vector<std::int64_t>& counts, double mean,
                          long total, double* chi2_out = nullptr,
                          int* dof_out = nullptr);

}  // namespace rbwalk
