#pragma once

#include <Eigen/Dense>

#include "rbwalk/graph.hpp"
#include "rbwalk/spectral.hpp"

namespace rbwalk {

// Row-stochastic transition matrix with its stationary distribution.
struct DiscreteChain {
  Eigen::MatrixXd P;
  Eigen::VectorXd pi;
};

// Infinitesimal generator: zero row sums, nonnegative off-diagonal entries,
// together with its invariant measure (Q' pi = 0, sum pi = 1).
struct Generator {
  Eigen::MatrixXd Q;
  Eigen::VectorXd pi;
};

struct EntropyConfig {
  double eta = 1.0;  // weight on the retention-rate term, > 0
};

// Maximum-entropy chain on g: p_ij = (1/lambda) (phi_j / phi_i) on edges,
// stationary distribution phi_i * phi_hat_i.
DiscreteChain build_discrete_rb(const PerronData& p, const DirectedGraph& g);

// Generator diag(phi)^-1 A diag(phi) - lambda I. Off-diagonal entries are
// (phi_j / phi_i) a_ij; every diagonal entry equals exactly -lambda, so all
// holding rates coincide. Requires a graph without self loops.
Generator build_rb_generator(const PerronData& p, const DirectedGraph& g);

// e^{eta-1} Q entrywise; the invariant measure is unchanged.
Generator scale_generator(const Generator& q, const EntropyConfig& cfg);

// H(P) = -sum_ij pi_i p_ij log p_ij in nats per step, with 0 log 0 := 0.
double discrete_entropy_rate(const DiscreteChain& c);

// h_eta(Q) = -eta sum_i pi_i q_ii - sum_{i != j} pi_i q_ij log q_ij,
// nats per unit time, with 0 log 0 := 0.
double differential_entropy_rate(const Generator& q, const EntropyConfig& cfg);

// Unique pi > 0 with Q' pi = 0 and sum pi = 1, from the linear system with
// the last balance equation replaced by the normalization row. Reported
// residual is ||Q' pi||_inf; throws if the system is singular beyond
// tolerance (disconnected support) or the measure is not positive.
Eigen::VectorXd stationary_of_generator(const Eigen::MatrixXd& Q,
                                        double* residual_out = nullptr);

// Probability of one specific `steps`-edge path from `from` to `to`:
// phi_hat_i phi_j / lambda^N from a stationary start, phi_j / (phi_i
// lambda^N) conditioned on X_0 = i. Pure formula; pair with count_paths for
// totals.
double path_probability_formula(const PerronData& p, int from, int to,
                                int steps, bool conditional);

}  // namespace rbwalk
