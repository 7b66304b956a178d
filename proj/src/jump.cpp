#include "rbwalk/jump.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "rbwalk/rng.hpp"

namespace rbwalk {

int Trajectory::state_at(double t) const {
  if (t < 0.0 || t > horizon)
    throw std::invalid_argument("time outside [0, horizon]");
  int state = start;
  double jump_time = 0.0;
  for (const Jump& jump : jumps) {
    jump_time += jump.holding_time;
    if (jump_time > t) break;
    state = jump.next_state;  // right-continuous: at t_k the state is Z_k
  }
  return state;
}

std::vector<int> Trajectory::states() const {
  std::vector<int> out;
  out.reserve(jumps.size() + 1);
  out.push_back(start);
  for (const Jump& jump : jumps) out.push_back(jump.next_state);
  return out;
}

EmbeddedChainSpec embed(const Generator& q) {
  const auto n = q.Q.rows();
  EmbeddedChainSpec spec;
  spec.Pi = Eigen::MatrixXd::Zero(n, n);
  spec.rates = Eigen::VectorXd(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double rate = -q.Q(i, i);
    if (rate <= 0.0)
      throw std::invalid_argument("state " + std::to_string(i) +
                                  " has no outgoing rate (absorbing)");
    spec.rates(i) = rate;
    for (Eigen::Index j = 0; j < n; ++j)
      if (j != i) spec.Pi(i, j) = q.Q(i, j) / rate;
  }
  return spec;
}

namespace {

int sample_row(const Eigen::MatrixXd& Pi, int row, double u) {
  const auto n = Pi.cols();
  double cumulative = 0.0;
  int last_positive = -1;
  for (Eigen::Index j = 0; j < n; ++j) {
    const double pij = Pi(row, j);
    if (pij <= 0.0) continue;
    last_positive = static_cast<int>(j);
    cumulative += pij;
    if (u < cumulative) return static_cast<int>(j);
  }
  return last_positive;  // u fell into rounding slack past the last entry
}

}  // namespace

Trajectory sample_trajectory(const EmbeddedChainSpec& spec, int start,
                             double horizon, std::uint64_t seed) {
  const auto n = spec.rates.size();
  if (start < 0 || start >= n)
    throw std::invalid_argument("start node out of range");
  if (horizon <= 0.0) throw std::invalid_argument("horizon must be positive");

  Xoshiro256 rng(seed);
  Trajectory traj;
  traj.start = start;
  traj.horizon = horizon;
  int state = start;
  double elapsed = 0.0;
  for (;;) {
    const double holding = rng.exponential(spec.rates(state));
    if (elapsed + holding > horizon) break;  // residual extends past horizon
    elapsed += holding;
    state = sample_row(spec.Pi, state, rng.uniform01());
    traj.jumps.push_back(Jump{state, holding});
  }
  return traj;
}

std::vector<Trajectory> sample_ensemble(const EmbeddedChainSpec& spec,
                                        int start, double horizon,
                                        std::uint64_t seed, int count) {
  if (count < 0) throw std::invalid_argument("count must be nonnegative");
  std::vector<Trajectory> ensemble;
  ensemble.reserve(count);
  for (int i = 0; i < count; ++i)
    ensemble.push_back(sample_trajectory(
        spec, start, horizon, substream_seed(seed, std::uint64_t(i))));
  return ensemble;
}

Eigen::MatrixXd transition_kernel(const Generator& q, double t, double tol) {
  const auto n = q.Q.rows();
  if (t < 0.0) throw std::invalid_argument("time must be nonnegative");
  if (tol <= 0.0) throw std::invalid_argument("tol must be positive");
  if (t == 0.0) return Eigen::MatrixXd::Identity(n, n);

  const double rate = (-q.Q.diagonal()).maxCoeff();
  if (rate <= 0.0) throw std::invalid_argument("generator has no transitions");

  // Keep rt moderate so e^{-rt} stays well inside double range; the
  // semigroup property makes squaring exact up to rounding.
  if (rate * t > 200.0) {
    const Eigen::MatrixXd half = transition_kernel(q, t / 2.0, tol / 2.0);
    return half * half;
  }

  const double rt = rate * t;
  const Eigen::MatrixXd jump_chain =
      Eigen::MatrixXd::Identity(n, n) + q.Q / rate;

  double weight = std::exp(-rt);  // Poisson(rt) pmf at k = 0
  double mass = weight;
  Eigen::MatrixXd power = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd kernel = weight * power;
  for (long k = 1; 1.0 - mass > tol; ++k) {
    power = power * jump_chain;
    weight *= rt / double(k);
    mass += weight;
    kernel += weight * power;
    if (k > 100000)
      throw std::runtime_error("uniformization failed to converge");
  }
  // Tiny negatives can only come from rounding; the series itself is
  // nonnegative term by term.
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      if (kernel(i, j) < 0.0 && kernel(i, j) > -1e-15) kernel(i, j) = 0.0;
  return kernel;
}

std::vector<int> discretize(const Trajectory& traj, double delta) {
  if (delta <= 0.0) throw std::invalid_argument("delta must be positive");
  std::vector<int> samples;
  int state = traj.start;
  std::size_t consumed = 0;
  double jump_time = 0.0;
  double next_jump = traj.jumps.empty()
                         ? std::numeric_limits<double>::infinity()
                         : traj.jumps[0].holding_time;
  for (long k = 0;; ++k) {
    const double t = double(k) * delta;
    if (t > traj.horizon) break;
    while (consumed < traj.jumps.size() && next_jump <= t) {
      state = traj.jumps[consumed].next_state;
      jump_time = next_jump;
      ++consumed;
      next_jump = consumed < traj.jumps.size()
                      ? jump_time + traj.jumps[consumed].holding_time
                      : std::numeric_limits<double>::infinity();
    }
    samples.push_back(state);
  }
  return samples;
}

double small_delta_entropy(const Generator& q, double delta) {
  if (delta <= 0.0) throw std::invalid_argument("delta must be positive");
  const auto n = q.Q.rows();
  double retention = 0.0, transition = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    retention += q.pi(i) * q.Q(i, i);
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      const double qij = q.Q(i, j);
      if (qij > 0.0) transition += q.pi(i) * qij * std::log(qij);
    }
  }
  return -delta * (1.0 - std::log(delta)) * retention - delta * transition;
}

}  // namespace rbwalk
