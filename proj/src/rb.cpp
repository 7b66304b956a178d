#include "rbwalk/rb.hpp"

#include <cmath>

namespace rbwalk {

DiscreteChain build_discrete_rb(const PerronData& p, const DirectedGraph& g) {
  const int n = g.size();
  if (p.phi.size() != n)
    throw std::invalid_argument("PerronData does not match graph size");
  DiscreteChain chain;
  chain.P = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j : g.out_neighbors(i))
      chain.P(i, j) = p.phi(j) / (p.lambda * p.phi(i));
  chain.pi = stationary_rb(p);
  return chain;
}

Generator build_rb_generator(const PerronData& p, const DirectedGraph& g) {
  const int n = g.size();
  if (p.phi.size() != n)
    throw std::invalid_argument("PerronData does not match graph size");
  const ValidationReport report = validate(g, GraphMode::ContinuousTime);
  if (!report.self_loops.empty())
    throw std::invalid_argument(
        "continuous-time construction needs a loop-free graph: " +
        report.summary());
  Generator gen;
  gen.Q = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j : g.out_neighbors(i)) gen.Q(i, j) = p.phi(j) / p.phi(i);
    gen.Q(i, i) = -p.lambda;  // uniform holding rate
  }
  gen.pi = stationary_rb(p);
  return gen;
}

Generator scale_generator(const Generator& q, const EntropyConfig& cfg) {
  if (cfg.eta <= 0) throw std::invalid_argument("eta must be positive");
  return Generator{std::exp(cfg.eta - 1.0) * q.Q, q.pi};
}

double discrete_entropy_rate(const DiscreteChain& c) {
  const auto n = c.P.rows();
  double entropy = 0.0;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      const double pij = c.P(i, j);
      if (pij > 0.0) entropy -= c.pi(i) * pij * std::log(pij);
    }
  return entropy;
}

double differential_entropy_rate(const Generator& q, const EntropyConfig& cfg) {
  if (cfg.eta <= 0) throw std::invalid_argument("eta must be positive");
  const auto n = q.Q.rows();
  double retention = 0.0, transition = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    retention -= q.pi(i) * q.Q(i, i);
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      const double qij = q.Q(i, j);
      if (qij > 0.0) transition -= q.pi(i) * qij * std::log(qij);
    }
  }
  return cfg.eta * retention + transition;
}

Eigen::VectorXd stationary_of_generator(const Eigen::MatrixXd& Q,
                                        double* residual_out) {
  const auto n = Q.rows();
  if (Q.cols() != n) throw std::invalid_argument("generator must be square");
  if (n < 1) throw std::invalid_argument("empty generator");

  // Balance equations Q' pi = 0 with the last one replaced by sum pi = 1.
  Eigen::MatrixXd system = Q.transpose();
  system.row(n - 1).setOnes();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  rhs(n - 1) = 1.0;

  Eigen::FullPivLU<Eigen::MatrixXd> lu(system);
  if (!lu.isInvertible())
    throw std::runtime_error(
        "stationary measure is not unique (support not strongly connected)");
  Eigen::VectorXd pi = lu.solve(rhs);

  const double residual = (Q.transpose() * pi).cwiseAbs().maxCoeff();
  if (residual_out) *residual_out = residual;
  if (residual > 1e-10)
    throw std::runtime_error("stationary solve residual " +
                             std::to_string(residual) + " above 1e-10");
  if ((pi.array() <= 0.0).any())
    throw std::runtime_error(
        "stationary measure has nonpositive entries (support not strongly "
        "connected)");
  pi /= pi.sum();
  return pi;
}

double path_probability_formula(const PerronData& p, int from, int to,
                                int steps, bool conditional) {
  const auto n = p.phi.size();
  if (from < 0 || from >= n || to < 0 || to >= n)
    throw std::invalid_argument("node id out of range");
  if (steps < 0) throw std::invalid_argument("steps must be nonnegative");
  const double decay = std::pow(p.lambda, static_cast<double>(steps));
  if (conditional) return p.phi(to) / (p.phi(from) * decay);
  return p.phi_hat(from) * p.phi(to) / decay;
}

}  // namespace rbwalk
