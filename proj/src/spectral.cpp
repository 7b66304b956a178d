#include "rbwalk/spectral.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

namespace rbwalk {

namespace {

std::string fmt_g(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", x);
  return buf;
}

double eigen_residual(const Eigen::MatrixXd& a, const Eigen::VectorXd& right,
                      const Eigen::VectorXd& left, double lambda) {
  const double res_right = (a * right - lambda * right).cwiseAbs().maxCoeff();
  const double res_left =
      (a.transpose() * left - lambda * left).cwiseAbs().maxCoeff();
  return std::max(res_right, res_left);
}

}  // namespace

PerronData perron(const DirectedGraph& g, double tol, int max_iter) {
  if (tol <= 0) throw std::invalid_argument("tol must be positive");
  if (max_iter <= 0) throw std::invalid_argument("max_iter must be positive");
  const ValidationReport report = validate(g, GraphMode::DiscreteTime);
  if (!report.strongly_connected)
    throw std::invalid_argument("perron requires a strongly connected graph: " +
                                report.summary());

  const int n = g.size();
  const Eigen::MatrixXd a = g.adjacency().cast<double>();
  // A + I is primitive whenever A is irreducible; the shift leaves the
  // eigenvectors unchanged and adds 1 to the eigenvalue.
  const Eigen::MatrixXd shifted = a + Eigen::MatrixXd::Identity(n, n);

  Eigen::VectorXd right = Eigen::VectorXd::Ones(n);
  Eigen::VectorXd left = Eigen::VectorXd::Ones(n);
  double lambda = 0.0;
  double residual = std::numeric_limits<double>::infinity();

  Eigen::VectorXd best_right = right, best_left = left;
  double best_lambda = 0.0;
  double best_residual = residual;
  bool reached_tol = false;
  int stale = 0;

  for (int iter = 0; iter < max_iter; ++iter) {
    right = shifted * right;
    right /= right.maxCoeff();
    left = shifted.transpose() * left;
    left /= left.maxCoeff();

    // Two-sided Rayleigh quotient of A; quadratically accurate in the
    // eigenvector error.
    lambda = left.dot(a * right) / left.dot(right);
    residual = eigen_residual(a, right, left, lambda);

    if (residual < best_residual) {
      best_residual = residual;
      best_lambda = lambda;
      best_right = right;
      best_left = left;
      stale = 0;
    } else if (reached_tol && ++stale >= 4) {
      break;  // at the rounding floor, no further progress
    }
    if (residual <= tol) reached_tol = true;
  }
  if (!reached_tol)
    throw ConvergenceError("power iteration did not reach tol=" + fmt_g(tol) +
                               " after " + std::to_string(max_iter) +
                               " iterations; last residual " +
                               fmt_g(best_residual),
                           best_residual);

  PerronData out;
  out.lambda = best_lambda;
  out.phi = best_right;       // unit max entry by construction
  out.phi_hat = best_left / best_left.dot(best_right);  // <phi, phi_hat> = 1
  out.residual = eigen_residual(a, out.phi, out.phi_hat, out.lambda);
  return out;
}

Eigen::VectorXd stationary_rb(const PerronData& p) {
  Eigen::VectorXd pi = p.phi.cwiseProduct(p.phi_hat);
  pi /= pi.sum();
  return pi;
}

}  // namespace rbwalk
