#include "rbwalk/graph.hpp"

#include <algorithm>
#include <istream>
#include <limits>
#include <sstream>

namespace rbwalk {

DirectedGraph::DirectedGraph(const Eigen::MatrixXi& adjacency)
    : n_(static_cast<int>(adjacency.rows())), adj_(adjacency) {
  if (adjacency.rows() != adjacency.cols())
    throw std::invalid_argument("adjacency matrix must be square");
  if (n_ < 2)
    throw std::invalid_argument("graph needs at least 2 nodes, got " +
                                std::to_string(n_));
  out_.resize(n_);
  for (int i = 0; i < n_; ++i) {
    for (int j = 0; j < n_; ++j) {
      const int a = adj_(i, j);
      if (a != 0 && a != 1)
        throw std::invalid_argument("adjacency entries must be 0 or 1, got " +
                                    std::to_string(a) + " at (" +
                                    std::to_string(i) + "," +
                                    std::to_string(j) + ")");
      if (a == 1) {
        out_[i].push_back(j);
        ++edges_;
      }
    }
  }
}

DirectedGraph load_edge_list(std::istream& in) {
  std::vector<std::pair<int, int>> edges;
  int max_id = -1;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream fields(line);
    long long src = -1, dst = -1;
    std::string trailing;
    if (!(fields >> src >> dst))
      throw ParseError("line " + std::to_string(line_no) +
                           ": expected \"src dst\", got \"" + line + "\"",
                       line_no);
    if (fields >> trailing)
      throw ParseError("line " + std::to_string(line_no) +
                           ": trailing content \"" + trailing + "\"",
                       line_no);
    if (src < 0 || dst < 0)
      throw ParseError(
          "line " + std::to_string(line_no) + ": negative node id", line_no);
    if (src > std::numeric_limits<int>::max() - 1 ||
        dst > std::numeric_limits<int>::max() - 1)
      throw ParseError(
          "line " + std::to_string(line_no) + ": node id out of range",
          line_no);
    edges.emplace_back(static_cast<int>(src), static_cast<int>(dst));
    max_id = std::max(max_id, static_cast<int>(std::max(src, dst)));
  }
  if (edges.empty()) throw ParseError("edge list is empty", 0);
  const int n = max_id + 1;
  Eigen::MatrixXi adj = Eigen::MatrixXi::Zero(n, n);
  for (const auto& [src, dst] : edges) adj(src, dst) = 1;
  return DirectedGraph(adj);
}

DirectedGraph load_edge_list(const std::string& text) {
  std::istringstream in(text);
  return load_edge_list(in);
}

namespace {

// Iterative Tarjan; emits each strongly connected component once.
std::vector<std::vector<int>> tarjan_scc(const DirectedGraph& g) {
  const int n = g.size();
  std::vector<int> index(n, -1), lowlink(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<int> stack;
  std::vector<std::vector<int>> components;
  int next_index = 0;

  struct Frame {
    int node;
    std::size_t edge;
  };
  for (int root = 0; root < n; ++root) {
    if (index[root] != -1) continue;
    std::vector<Frame> call_stack{{root, 0}};
    index[root] = lowlink[root] = next_index++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!call_stack.empty()) {
      Frame& frame = call_stack.back();
      const auto& succ = g.out_neighbors(frame.node);
      if (frame.edge < succ.size()) {
        const int w = succ[frame.edge++];
        if (index[w] == -1) {
          index[w] = lowlink[w] = next_index++;
          stack.push_back(w);
          on_stack[w] = true;
          call_stack.push_back({w, 0});
        } else if (on_stack[w]) {
          lowlink[frame.node] = std::min(lowlink[frame.node], index[w]);
        }
      } else {
        const int v = frame.node;
        call_stack.pop_back();
        if (!call_stack.empty())
          lowlink[call_stack.back().node] =
              std::min(lowlink[call_stack.back().node], lowlink[v]);
        if (lowlink[v] == index[v]) {
          std::vector<int> component;
          int w;
          do {
            w = stack.back();
            stack.pop_back();
            on_stack[w] = false;
            component.push_back(w);
          } while (w != v);
          std::sort(component.begin(), component.end());
          components.push_back(std::move(component));
        }
      }
    }
  }
  std::sort(components.begin(), components.end());
  return components;
}

}  // namespace

ValidationReport validate(const DirectedGraph& g, GraphMode mode) {
  ValidationReport report;
  report.mode = mode;
  report.components = tarjan_scc(g);
  report.strongly_connected = report.components.size() == 1;
  for (int i = 0; i < g.size(); ++i)
    if (g.has_edge(i, i)) report.self_loops.push_back(i);
  report.valid = report.strongly_connected &&
                 (mode == GraphMode::DiscreteTime || report.self_loops.empty());
  return report;
}

std::string ValidationReport::summary() const {
  if (valid) return "valid";
  std::string out;
  if (!strongly_connected) {
    out += "not strongly connected; " + std::to_string(components.size()) +
           " components:";
    for (const auto& component : components) {
      out += " {";
      for (std::size_t k = 0; k < component.size(); ++k)
        out += (k ? "," : "") + std::to_string(component[k]);
      out += "}";
    }
  }
  if (mode == GraphMode::ContinuousTime && !self_loops.empty()) {
    if (!out.empty()) out += "; ";
    out += "self loop at node";
    if (self_loops.size() > 1) out += "s";
    for (std::size_t k = 0; k < self_loops.size(); ++k)
      out += (k ? "," : " ") + std::to_string(self_loops[k]);
  }
  return out;
}

namespace {

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t out;
  if (__builtin_add_overflow(a, b, &out))
    throw std::overflow_error("path count exceeds 64-bit integer range");
  return out;
}

}  // namespace

std::int64_t count_paths(const DirectedGraph& g, int from, int to, int steps) {
  const int n = g.size();
  if (from < 0 || from >= n || to < 0 || to >= n)
    throw std::invalid_argument("node id out of range");
  if (steps < 0) throw std::invalid_argument("steps must be nonnegative");

  // Row `from` of A^steps, built one step at a time in exact arithmetic.
  std::vector<std::int64_t> walks(n, 0);
  walks[from] = 1;
  std::vector<std::int64_t> next(n, 0);
  for (int step = 0; step < steps; ++step) {
    std::fill(next.begin(), next.end(), 0);
    for (int i = 0; i < n; ++i) {
      if (walks[i] == 0) continue;
      for (int j : g.out_neighbors(i)) next[j] = checked_add(next[j], walks[i]);
    }
    walks.swap(next);
  }
  return walks[to];
}

}  // namespace rbwalk
