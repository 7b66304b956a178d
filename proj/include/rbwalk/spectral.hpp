#pragma once

#include <Eigen/Dense>
#include <stdexcept>

#include "rbwalk/graph.hpp"

namespace rbwalk {

// Dominant eigendata of an adjacency matrix: A phi = lambda phi and
// A' phi_hat = lambda phi_hat with every entry positive, phi scaled to unit
// max entry and phi_hat scaled so <phi, phi_hat> = 1.
struct PerronData {
  double lambda = 0.0;
  Eigen::VectorXd phi;
  Eigen::VectorXd phi_hat;
  // max of ||A phi - lambda phi||_inf and ||A' phi_hat - lambda phi_hat||_inf
  double residual = 0.0;
};

class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double last_residual)
      : std::runtime_error(what), last_residual_(last_residual) {}
  double last_residual() const { return last_residual_; }

 private:
  double last_residual_;
};

// Power iteration on the shifted matrix A + I, which is primitive for every
// strongly connected graph (the shift restores convergence on periodic
// graphs such as directed cycles). Start vector is all-ones; the eigenvalue
// of A is the shifted eigenvalue minus one.
PerronData perron(const DirectedGraph& g, double tol = 1e-12,
                  int max_iter = 100000);

// pi_i = phi_i * phi_hat_i; sums to 1 by the eigenvector normalization and is
// invariant under rescaling phi -> s phi, phi_hat -> phi_hat / s.
Eigen::VectorXd stationary_rb(const PerronData& p);

}  // namespace rbwalk
