#include <doctest.h>

#include <cmath>

#include "rbwalk/rb.hpp"
#include "test_util.hpp"

using namespace rbwalk;

namespace {

void check_chain_invariants(const DiscreteChain& c, const DirectedGraph& g) {
  for (int i = 0; i < g.size(); ++i) {
    CHECK(c.P.row(i).sum() == doctest::Approx(1.0).epsilon(1e-12));
    for (int j = 0; j < g.size(); ++j) {
      CHECK(c.P(i, j) >= 0.0);
      CHECK(c.P(i, j) <= 1.0);
      if (!g.has_edge(i, j)) CHECK(c.P(i, j) == 0.0);
    }
  }
  CHECK((c.P.transpose() * c.pi - c.pi).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(c.pi.sum() == doctest::Approx(1.0).epsilon(1e-12));
}

void check_generator_invariants(const Generator& q, const DirectedGraph& g) {
  for (int i = 0; i < g.size(); ++i) {
    CHECK(std::abs(q.Q.row(i).sum()) < 1e-12);
    CHECK(q.Q(i, i) < 0.0);
    for (int j = 0; j < g.size(); ++j) {
      if (i == j) continue;
      CHECK(q.Q(i, j) >= 0.0);
      if (!g.has_edge(i, j)) CHECK(q.Q(i, j) == 0.0);
    }
  }
  CHECK((q.Q.transpose() * q.pi).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(q.pi.sum() == doctest::Approx(1.0).epsilon(1e-12));
}

}  // namespace

TEST_CASE("discrete RB chain on K3 is the uniform walk") {
  const DirectedGraph g = rbtest::make_k3();
  const DiscreteChain c = build_discrete_rb(perron(g), g);
  check_chain_invariants(c, g);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (i != j) CHECK(c.P(i, j) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("discrete RB chain on the 2-cycle is deterministic") {
  const DirectedGraph g = rbtest::make_two_cycle();
  const DiscreteChain c = build_discrete_rb(perron(g), g);
  CHECK(c.P(0, 1) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(c.P(1, 0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(c.P(0, 0) == 0.0);
}

TEST_CASE("discrete RB chain on the plastic graph: row 1 closed form") {
  const DirectedGraph g = rbtest::make_plastic();
  const DiscreteChain c = build_discrete_rb(perron(g), g);
  check_chain_invariants(c, g);
  const double root = rbtest::plastic_lambda_oracle();
  CHECK(c.P(1, 0) == doctest::Approx(1.0 / (root * root)).epsilon(1e-10));
  CHECK(c.P(1, 2) ==
        doctest::Approx(1.0 / (root * root * root)).epsilon(1e-10));
  // 1/r^2 + 1/r^3 = 1 is exactly the defining identity r^3 = r + 1.
  CHECK(1.0 / (root * root) + 1.0 / (root * root * root) ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("RB generator on K3 and the 2-cycle") {
  const DirectedGraph k3 = rbtest::make_k3();
  const Generator qk3 = build_rb_generator(perron(k3), k3);
  check_generator_invariants(qk3, k3);
  Eigen::MatrixXd expected(3, 3);
  expected << -2, 1, 1, 1, -2, 1, 1, 1, -2;
  CHECK((qk3.Q - expected).cwiseAbs().maxCoeff() < 1e-12);

  const DirectedGraph c2 = rbtest::make_two_cycle();
  const Generator qc2 = build_rb_generator(perron(c2), c2);
  Eigen::MatrixXd expected2(2, 2);
  expected2 << -1, 1, 1, -1;
  CHECK((qc2.Q - expected2).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("RB generator refuses self loops") {
  Eigen::MatrixXi a(2, 2);
  a << 1, 1, 1, 0;
  const DirectedGraph g(a);
  CHECK_THROWS_AS(build_rb_generator(perron(g), g), std::invalid_argument);
}

TEST_CASE("closing identity Q = lambda (P - I) and uniform diagonal") {
  for (std::uint64_t seed : {41u, 42u, 43u}) {
    const DirectedGraph g = rbtest::random_sc_graph(6, seed);
    const PerronData p = perron(g);
    const DiscreteChain c = build_discrete_rb(p, g);
    const Generator q = build_rb_generator(p, g);
    check_generator_invariants(q, g);
    const Eigen::MatrixXd rhs =
        p.lambda * (c.P - Eigen::MatrixXd::Identity(6, 6));
    CHECK((q.Q - rhs).cwiseAbs().maxCoeff() < 1e-12);
    for (int i = 0; i < 6; ++i) CHECK(q.Q(i, i) == -p.lambda);
  }
}

TEST_CASE("scale_generator") {
  const DirectedGraph g = rbtest::make_k3();
  const Generator q = build_rb_generator(perron(g), g);

  const Generator same = scale_generator(q, EntropyConfig{1.0});
  CHECK((same.Q - q.Q).cwiseAbs().maxCoeff() == 0.0);  // e^0 = 1 exactly

  const Generator doubled_e = scale_generator(q, EntropyConfig{2.0});
  CHECK(doubled_e.Q(0, 0) ==
        doctest::Approx(-2.0 * std::exp(1.0)).epsilon(1e-12));

  const Generator halved = scale_generator(q, EntropyConfig{1.0 - std::log(2.0)});
  CHECK(halved.Q(0, 0) == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK((halved.pi - q.pi).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("discrete entropy rate equals log lambda for RB chains") {
  const DirectedGraph k3 = rbtest::make_k3();
  CHECK(discrete_entropy_rate(build_discrete_rb(perron(k3), k3)) ==
        doctest::Approx(std::log(2.0)).epsilon(1e-12));

  const DirectedGraph c2 = rbtest::make_two_cycle();
  CHECK(discrete_entropy_rate(build_discrete_rb(perron(c2), c2)) ==
        doctest::Approx(0.0).epsilon(1e-12));

  // Termwise evaluation against the oracle root, not against perron.
  const DirectedGraph plastic = rbtest::make_plastic();
  const double root = rbtest::plastic_lambda_oracle();
  CHECK(std::abs(discrete_entropy_rate(build_discrete_rb(perron(plastic),
                                                         plastic)) -
                 std::log(root)) < 1e-10);
}

TEST_CASE("differential entropy rate hits lambda at eta = 1") {
  const DirectedGraph k3 = rbtest::make_k3();
  const Generator q = build_rb_generator(perron(k3), k3);
  CHECK(differential_entropy_rate(q, EntropyConfig{1.0}) ==
        doctest::Approx(2.0).epsilon(1e-12));

  const DirectedGraph c2 = rbtest::make_two_cycle();
  const Generator qc2 = build_rb_generator(perron(c2), c2);
  // All rates are 0 or 1, so the transition term vanishes and h_1 = lambda.
  CHECK(differential_entropy_rate(qc2, EntropyConfig{1.0}) ==
        doctest::Approx(1.0).epsilon(1e-12));

  const Generator scaled = scale_generator(q, EntropyConfig{2.0});
  CHECK(differential_entropy_rate(scaled, EntropyConfig{2.0}) ==
        doctest::Approx(2.0 * std::exp(1.0)).epsilon(1e-10));
}

TEST_CASE("scaled family h_eta(e^{eta-1} Q) = e^{eta-1} lambda") {
  for (std::uint64_t seed : {51u, 52u}) {
    const DirectedGraph g = rbtest::random_sc_graph(5, seed);
    const PerronData p = perron(g);
    const Generator q = build_rb_generator(p, g);
    for (double eta : {0.5, 1.0, 2.0, 5.0}) {
      const Generator scaled = scale_generator(q, EntropyConfig{eta});
      const double h = differential_entropy_rate(scaled, EntropyConfig{eta});
      CHECK(std::abs(h - std::exp(eta - 1.0) * p.lambda) < 1e-10);
    }
  }
}

TEST_CASE("stationary_of_generator solves hand cases") {
  Eigen::MatrixXd q(2, 2);
  q << -1, 1, 1, -1;
  const Eigen::VectorXd uniform = stationary_of_generator(q);
  CHECK(uniform(0) == doctest::Approx(0.5).epsilon(1e-12));

  q << -2, 2, 1, -1;  // balance 2 pi_0 = pi_1
  double residual = -1.0;
  const Eigen::VectorXd skewed = stationary_of_generator(q, &residual);
  CHECK(skewed(0) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(skewed(1) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(residual >= 0.0);
  CHECK(residual <= 1e-10);
}

TEST_CASE("stationary_of_generator cross-checks the spectral route") {
  const DirectedGraph g = rbtest::make_plastic();
  const PerronData p = perron(g);
  const Generator q = build_rb_generator(p, g);
  const Eigen::VectorXd solved = stationary_of_generator(q.Q);
  CHECK((solved - stationary_rb(p)).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("stationary_of_generator rejects disconnected support") {
  // Two decoupled 2-cycles: the null space is two-dimensional.
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(4, 4);
  q(0, 1) = q(1, 0) = q(2, 3) = q(3, 2) = 1.0;
  q.diagonal() = -q.rowwise().sum();
  CHECK_THROWS_AS(stationary_of_generator(q), std::runtime_error);
}

TEST_CASE("path probability formula") {
  const DirectedGraph k3 = rbtest::make_k3();
  const PerronData p = perron(k3);
  CHECK(path_probability_formula(p, 0, 0, 2, false) ==
        doctest::Approx(1.0 / 12.0).epsilon(1e-12));
  CHECK(path_probability_formula(p, 0, 1, 1, true) ==
        doctest::Approx(0.5).epsilon(1e-12));

  const DirectedGraph plastic = rbtest::make_plastic();
  const double root = rbtest::plastic_lambda_oracle();
  CHECK(std::abs(path_probability_formula(perron(plastic), 0, 0, 3, true) -
                 1.0 / (1.0 + root)) < 1e-10);
}

TEST_CASE("module outputs are invariant under eigenvector rescaling") {
  const DirectedGraph g = rbtest::make_plastic();
  PerronData p = perron(g);
  const DiscreteChain before = build_discrete_rb(p, g);
  const Generator gen_before = build_rb_generator(p, g);
  const double formula_before = path_probability_formula(p, 0, 0, 3, true);

  p.phi *= 0.125;
  p.phi_hat /= 0.125;
  const DiscreteChain after = build_discrete_rb(p, g);
  const Generator gen_after = build_rb_generator(p, g);
  CHECK((before.P - after.P).cwiseAbs().maxCoeff() < 1e-14);
  CHECK((gen_before.Q - gen_after.Q).cwiseAbs().maxCoeff() < 1e-13);
  CHECK(path_probability_formula(p, 0, 0, 3, true) ==
        doctest::Approx(formula_before).epsilon(1e-13));
}
