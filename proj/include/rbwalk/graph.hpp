#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace rbwalk {

// The continuous-time construction forbids self loops; the discrete-time one
// does not.
enum class GraphMode { DiscreteTime, ContinuousTime };

// Directed graph on nodes 0..n-1, stored as a dense 0/1 adjacency matrix.
// Immutable after construction; safe to share across threads.
class DirectedGraph {
 public:
  // Requires n >= 2 and entries in {0,1}.
  explicit DirectedGraph(const Eigen::MatrixXi& adjacency);

  int size() const { return n_; }
  const Eigen::MatrixXi& adjacency() const { return adj_; }
  bool has_edge(int from, int to) const { return adj_(from, to) != 0; }
  int edge_count() const { return edges_; }
  const std::vector<int>& out_neighbors(int node) const { return out_[node]; }

 private:
  int n_ = 0;
  int edges_ = 0;
  Eigen::MatrixXi adj_;
  std::vector<std::vector<int>> out_;
};

// Malformed edge-list input; line is 1-based, 0 when no line applies.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, int line)
      : std::runtime_error(what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

// Edge-list text: one "src dst" pair per line, 0-based ids, '#' comments,
// blank lines ignored, duplicates idempotent. Node count is max id + 1.
DirectedGraph load_edge_list(std::istream& in);
DirectedGraph load_edge_list(const std::string& text);

struct ValidationReport {
  GraphMode mode = GraphMode::DiscreteTime;
  bool strongly_connected = false;
  // Strongly connected components (each sorted); a single component covering
  // every node means the graph is strongly connected.
  std::vector<std::vector<int>> components;
  std::vector<int> self_loops;
  bool valid = false;
  std::string summary() const;
};

// Pure: same graph and mode always produce the same report.
ValidationReport validate(const DirectedGraph& g, GraphMode mode);

// Exact number of directed walks with `steps` edges from `from` to `to`,
// i.e. the (from,to) entry of A^steps. Integer arithmetic throughout;
// throws std::overflow_error once counts leave the int64 range.
std::int64_t count_paths(const DirectedGraph& g, int from, int to, int steps);

}  // namespace rbwalk
