#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "rbwalk/rb.hpp"

namespace rbwalk {

struct Jump {
  int next_state;
  double holding_time;  // time spent in the previous state before this jump
};

// Right-continuous sample path observed on [0, horizon]. Holding times are
// stored instead of absolute jump times; absolute times come from partial
// sums. Partial sums up to the last recorded jump stay <= horizon and the
// walker keeps its final state through the horizon.
struct Trajectory {
  int start = 0;
  std::vector<Jump> jumps;
  double horizon = 0.0;

  int jump_count() const { return static_cast<int>(jumps.size()); }
  int final_state() const {
    return jumps.empty() ? start : jumps.back().next_state;
  }
  // State at time t (right-continuous), 0 <= t <= horizon.
  int state_at(double t) const;
  // Visited states: start followed by each jump target.
  std::vector<int> states() const;
};

// Embedded jump chain Pi_ij = q_ij / q_i (zero diagonal) and the holding
// rates q_i = -q_ii.
struct EmbeddedChainSpec {
  Eigen::MatrixXd Pi;
  Eigen::VectorXd rates;
};

// Throws std::invalid_argument when some q_i <= 0 (absorbing state).
EmbeddedChainSpec embed(const Generator& q);

// Alternately draws an exponential holding time at the current state and a
// next state from the corresponding Pi row until the cumulative time would
// pass the horizon. Deterministic in (spec, start, horizon, seed).
Trajectory sample_trajectory(const EmbeddedChainSpec& spec, int start,
                             double horizon, std::uint64_t seed);

// `count` trajectories; trajectory i uses substream_seed(seed, i).
std::vector<Trajectory> sample_ensemble(const EmbeddedChainSpec& spec,
                                        int start, double horizon,
                                        std::uint64_t seed, int count);

// exp(Q t) by uniformization: with r = max_i q_i and P = I + Q/r, sums
// e^{-rt} (rt)^k / k! P^k until the Poisson tail mass drops below tol.
// Nonnegative and row-stochastic within tol + 1e-12 by construction.
Eigen::MatrixXd transition_kernel(const Generator& q, double t,
                                  double tol = 1e-12);

// Samples of the path on the grid 0, delta, 2 delta, ... up to the horizon.
std::vector<int> discretize(const Trajectory& traj, double delta);

// Small-delta expansion of the entropy of the delta-sampled chain:
//   -delta (1 - log delta) sum_i pi_i q_ii
//   - delta sum_{i != j} pi_i q_ij log q_ij.
// Compare against the exact entropy rate of the chain exp(Q delta).
double small_delta_entropy(const Generator& q, double delta);

}  // namespace rbwalk
