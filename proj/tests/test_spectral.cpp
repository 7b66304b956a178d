#include <doctest.h>

#include "rbwalk/spectral.hpp"
#include "test_util.hpp"

using namespace rbwalk;

TEST_CASE("perron on K3: constant eigenvector, lambda = 2") {
  const PerronData p = perron(rbtest::make_k3());
  CHECK(p.lambda == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(p.residual <= 1e-12);
  for (int i = 0; i < 3; ++i) {
    CHECK(p.phi(i) == doctest::Approx(1.0));  // unit max entry, constant
    CHECK(p.phi(i) * p.phi_hat(i) == doctest::Approx(1.0 / 3.0));
  }
  CHECK(p.phi.dot(p.phi_hat) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("perron on the 2-cycle: shift handles periodicity") {
  const PerronData p = perron(rbtest::make_two_cycle());
  CHECK(p.lambda == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(p.phi(0) == doctest::Approx(p.phi(1)));
}

TEST_CASE("perron on the plastic graph matches the bisection oracle") {
  const double root = rbtest::plastic_lambda_oracle();
  CHECK(std::abs(root - 1.3247179572) < 1e-9);  // sanity of the oracle itself

  const PerronData p = perron(rbtest::make_plastic());
  CHECK(std::abs(p.lambda - root) < 1e-9);
  CHECK(p.residual <= 1e-12);

  // phi is proportional to (1, lambda, 1/lambda) by back-substitution.
  const double scale = p.phi(0);
  CHECK(p.phi(1) == doctest::Approx(scale * root).epsilon(1e-10));
  CHECK(p.phi(2) == doctest::Approx(scale / root).epsilon(1e-10));
}

TEST_CASE("perron rejects bad inputs") {
  Eigen::MatrixXi a = Eigen::MatrixXi::Zero(2, 2);
  a(0, 1) = 1;
  CHECK_THROWS_AS(perron(DirectedGraph(a)), std::invalid_argument);

  try {
    perron(rbtest::make_plastic(), 1e-12, 2);
    FAIL("expected ConvergenceError");
  } catch (const ConvergenceError& e) {
    CHECK(e.last_residual() > 0.0);
  }
}

TEST_CASE("shift invariance: adding self loops moves lambda by exactly one") {
  for (std::uint64_t seed : {21u, 22u, 23u, 24u}) {
    const DirectedGraph g = rbtest::random_sc_graph(5, seed);
    const Eigen::MatrixXi shifted_adj =
        g.adjacency() + Eigen::MatrixXi::Identity(5, 5);
    const PerronData base = perron(g);
    const PerronData shifted = perron(DirectedGraph(shifted_adj));
    CHECK(std::abs(shifted.lambda - base.lambda - 1.0) < 1e-9);
    // Same phi up to scale; both are max-normalized already.
    CHECK((base.phi - shifted.phi).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("lambda sits between the extreme row sums") {
  for (std::uint64_t seed : {31u, 32u, 33u, 34u, 35u}) {
    const DirectedGraph g = rbtest::random_sc_graph(6, seed);
    const Eigen::VectorXi row_sums = g.adjacency().rowwise().sum();
    const PerronData p = perron(g);
    CHECK(p.lambda >= double(row_sums.minCoeff()) - 1e-9);
    CHECK(p.lambda <= double(row_sums.maxCoeff()) + 1e-9);
  }
}

TEST_CASE("stationary_rb: symmetry cases and scale invariance") {
  const Eigen::VectorXd pi_k3 = stationary_rb(perron(rbtest::make_k3()));
  for (int i = 0; i < 3; ++i)
    CHECK(pi_k3(i) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));

  const Eigen::VectorXd pi_c2 = stationary_rb(perron(rbtest::make_two_cycle()));
  CHECK(pi_c2(0) == doctest::Approx(0.5).epsilon(1e-12));

  // The product phi_i phi_hat_i is unchanged by phi -> s phi, phi_hat -> phi_hat/s.
  PerronData p = perron(rbtest::make_plastic());
  const Eigen::VectorXd reference = stationary_rb(p);
  p.phi *= 7.5;
  p.phi_hat /= 7.5;
  const Eigen::VectorXd rescaled = stationary_rb(p);
  CHECK((reference - rescaled).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("stationary_rb on the plastic graph against the closed form") {
  // With phi = (1, r, 1/r) and phi_hat = (1, 1/r, 1/r^2) the unnormalized
  // products are (1, 1, 1/r^3) and r^3 = r + 1.
  const double root = rbtest::plastic_lambda_oracle();
  const double tail = 1.0 / (root + 1.0);
  const double total = 2.0 + tail;
  const Eigen::VectorXd pi = stationary_rb(perron(rbtest::make_plastic()));
  CHECK(pi(0) == doctest::Approx(1.0 / total).epsilon(1e-10));
  CHECK(pi(1) == doctest::Approx(1.0 / total).epsilon(1e-10));
  CHECK(pi(2) == doctest::Approx(tail / total).epsilon(1e-10));
  CHECK(pi.sum() == doctest::Approx(1.0).epsilon(1e-12));
}
