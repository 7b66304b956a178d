#include <doctest.h>

#include "rbwalk/graph.hpp"
#include "test_util.hpp"

using namespace rbwalk;

TEST_CASE("load_edge_list parses plain pairs") {
  const DirectedGraph g = load_edge_list("0 1\n1 0");
  CHECK(g.size() == 2);
  CHECK(g.has_edge(0, 1));
  CHECK(g.has_edge(1, 0));
  CHECK_FALSE(g.has_edge(0, 0));
  CHECK(g.edge_count() == 2);
}

TEST_CASE("load_edge_list infers node count from max id") {
  const DirectedGraph g = load_edge_list("0 1\n1 0\n1 2\n2 0");
  CHECK(g.size() == 3);
  CHECK(g.edge_count() == 4);
}

TEST_CASE("load_edge_list ignores duplicates, comments and blanks") {
  const DirectedGraph g = load_edge_list("# a comment\n\n0 1\n0 1\n1 0\n");
  CHECK(g.size() == 2);
  CHECK(g.edge_count() == 2);
  CHECK(g.adjacency() == load_edge_list("0 1\n1 0").adjacency());
}

TEST_CASE("load_edge_list rejects malformed input") {
  CHECK_THROWS_AS(load_edge_list("0\n1 0"), ParseError);
  CHECK_THROWS_AS(load_edge_list("0 1\nx y"), ParseError);
  CHECK_THROWS_AS(load_edge_list("0 1 2"), ParseError);
  CHECK_THROWS_AS(load_edge_list("-1 0"), ParseError);
  CHECK_THROWS_AS(load_edge_list("# nothing\n"), ParseError);

  try {
    load_edge_list("0 1\nbroken line\n1 0");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
}

TEST_CASE("graph construction enforces shape invariants") {
  Eigen::MatrixXi one(1, 1);
  one << 0;
  CHECK_THROWS_AS(DirectedGraph(one), std::invalid_argument);

  Eigen::MatrixXi bad(2, 2);
  bad << 0, 2, 1, 0;
  CHECK_THROWS_AS(DirectedGraph(bad), std::invalid_argument);
}

TEST_CASE("validate reports strong connectivity") {
  const auto ok = validate(rbtest::make_two_cycle(), GraphMode::ContinuousTime);
  CHECK(ok.valid);
  CHECK(ok.strongly_connected);
  CHECK(ok.summary() == "valid");

  Eigen::MatrixXi a = Eigen::MatrixXi::Zero(2, 2);
  a(0, 1) = 1;  // 1 cannot reach 0
  const auto broken = validate(DirectedGraph(a), GraphMode::DiscreteTime);
  CHECK_FALSE(broken.valid);
  CHECK_FALSE(broken.strongly_connected);
  CHECK(broken.components.size() == 2);
}

TEST_CASE("validate flags self loops only in continuous time") {
  Eigen::MatrixXi a(2, 2);
  a << 0, 1, 1, 1;  // self loop at node 1
  const DirectedGraph g(a);
  const auto ct = validate(g, GraphMode::ContinuousTime);
  CHECK_FALSE(ct.valid);
  CHECK(ct.self_loops == std::vector<int>{1});
  CHECK(ct.summary().find("1") != std::string::npos);

  const auto dt = validate(g, GraphMode::DiscreteTime);
  CHECK(dt.valid);
}

TEST_CASE("validate is pure") {
  const DirectedGraph g = rbtest::make_plastic();
  const auto a = validate(g, GraphMode::ContinuousTime);
  const auto b = validate(g, GraphMode::ContinuousTime);
  CHECK(a.valid == b.valid);
  CHECK(a.components == b.components);
  CHECK(a.summary() == b.summary());
}

TEST_CASE("count_paths matches hand examples") {
  CHECK(count_paths(rbtest::make_k3(), 0, 0, 2) == 2);   // 0-1-0, 0-2-0
  CHECK(count_paths(rbtest::make_two_cycle(), 0, 0, 3) == 0);  // parity
  CHECK(count_paths(rbtest::make_plastic(), 0, 0, 3) ==
        rbtest::dfs_count_walks(rbtest::make_plastic(), 0, 0, 3));
  CHECK(count_paths(rbtest::make_plastic(), 0, 0, 3) == 1);
  CHECK(count_paths(rbtest::make_k3(), 1, 1, 0) == 1);
  CHECK(count_paths(rbtest::make_k3(), 1, 2, 0) == 0);
}

TEST_CASE("count_paths agrees with exhaustive DFS on small graphs") {
  for (std::uint64_t seed : {11u, 12u, 13u}) {
    for (int n : {3, 4, 6}) {
      const DirectedGraph g = rbtest::random_sc_graph(n, seed);
      for (int steps = 0; steps <= 8; ++steps)
        for (int i = 0; i < n; ++i) {
          std::int64_t row_total = 0;
          for (int j = 0; j < n; ++j) {
            const std::int64_t counted = count_paths(g, i, j, steps);
            CHECK(counted == rbtest::dfs_count_walks(g, i, j, steps));
            row_total += counted;
          }
          // Row sum = number of all steps-long walks leaving i.
          std::int64_t leaving = 0;
          for (int j = 0; j < n; ++j)
            leaving += rbtest::dfs_count_walks(g, i, j, steps);
          CHECK(row_total == leaving);
        }
    }
  }
}

TEST_CASE("count_paths overflows loudly instead of wrapping") {
  CHECK_THROWS_AS(count_paths(rbtest::make_k3(), 0, 0, 300),
                  std::overflow_error);
  CHECK_THROWS_AS(count_paths(rbtest::make_k3(), 0, 5, 1),
                  std::invalid_argument);
}
