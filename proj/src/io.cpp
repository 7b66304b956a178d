#include "rbwalk/io.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace rbwalk::json {

Value::Value(bool b) : kind_(Kind::Bool), bool_(b) {}
Value::Value(int i) : kind_(Kind::Int), int_(i) {}
Value::Value(std::int64_t i) : kind_(Kind::Int), int_(i) {}
Value::Value(std::uint64_t u) : kind_(Kind::UInt), uint_(u) {}
Value::Value(double d) : kind_(Kind::Double), double_(d) {}
Value::Value(const char* s) : kind_(Kind::String), string_(s) {}
Value::Value(std::string s) : kind_(Kind::String), string_(std::move(s)) {}

Value Value::array() {
  Value v;
  v.kind_ = Kind::Array;
  return v;
}

Value Value::object() {
  Value v;
  v.kind_ = Kind::Object;
  return v;
}

Value& Value::operator[](const std::string& key) {
  if (kind_ == Kind::Null) kind_ = Kind::Object;
  if (kind_ != Kind::Object) throw std::logic_error("not a JSON object");
  for (auto& [name, value] : members_)
    if (name == key) return value;
  members_.emplace_back(key, Value());
  return members_.back().second;
}

void Value::push_back(Value v) {
  if (kind_ == Kind::Null) kind_ = Kind::Array;
  if (kind_ != Kind::Array) throw std::logic_error("not a JSON array");
  items_.push_back(std::move(v));
}

std::size_t Value::size() const {
  if (kind_ == Kind::Array) return items_.size();
  if (kind_ == Kind::Object) return members_.size();
  return 0;
}

namespace {

void write_escaped(std::ostream& out, const std::string& s) {
  out << '"';
  for (char c : s) {
    switch (c) {
      case '"': out << "\\\""; break;
      case '\\': out << "\\\\"; break;
      case '\n': out << "\\n"; break;
      case '\r': out << "\\r"; break;
      case '\t': out << "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out << buf;
        } else {
          out << c;
        }
    }
  }
  out << '"';
}

void write_double(std::ostream& out, double d) {
  if (!std::isfinite(d))
    throw std::invalid_argument("JSON output requires finite numbers");
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", d);
  out << buf;
}

}  // namespace

void Value::write_indented(std::ostream& out, int indent, int depth) const {
  const bool pretty = indent >= 0;
  const std::string pad = pretty ? std::string(std::size_t(indent) * (depth + 1), ' ') : "";
  const std::string close_pad = pretty ? std::string(std::size_t(indent) * depth, ' ') : "";
  switch (kind_) {
    case Kind::Null: out << "null"; break;
    case Kind::Bool: out << (bool_ ? "true" : "false"); break;
    case Kind::Int: out << int_; break;
    case Kind::UInt: out << uint_; break;
    case Kind::Double: write_double(out, double_); break;
    case Kind::String: write_escaped(out, string_); break;
    case Kind::Array: {
      if (items_.empty()) {
        out << "[]";
        break;
      }
      out << '[';
      for (std::size_t k = 0; k < items_.size(); ++k) {
        if (k) out << ',';
        if (pretty) out << '\n' << pad;
        items_[k].write_indented(out, indent, depth + 1);
      }
      if (pretty) out << '\n' << close_pad;
      out << ']';
      break;
    }
    case Kind::Object: {
      if (members_.empty()) {
        out << "{}";
        break;
      }
      out << '{';
      for (std::size_t k = 0; k < members_.size(); ++k) {
        if (k) out << ',';
        if (pretty) out << '\n' << pad;
        write_escaped(out, members_[k].first);
        out << (pretty ? ": " : ":");
        members_[k].second.write_indented(out, indent, depth + 1);
      }
      if (pretty) out << '\n' << close_pad;
      out << '}';
      break;
    }
  }
}

void Value::write(std::ostream& out, int indent) const {
  write_indented(out, indent, 0);
}

std::string Value::dump(int indent) const {
  std::ostringstream out;
  write(out, indent);
  return out.str();
}

Value from_vector(const Eigen::VectorXd& v) {
  Value out = Value::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

Value from_matrix(const Eigen::MatrixXd& m) {
  Value out = Value::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Value row = Value::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace rbwalk::json

namespace rbwalk {

json::Value result_bundle(const PerronData& p, const DiscreteChain& chain,
                          const Generator& gen, double eta, double h_eta,
                          double entropy_discrete) {
  json::Value doc = json::Value::object();
  doc["lambda"] = p.lambda;
  doc["phi"] = json::from_vector(p.phi);
  doc["phi_hat"] = json::from_vector(p.phi_hat);
  doc["pi"] = json::from_vector(chain.pi);
  doc["P"] = json::from_matrix(chain.P);
  doc["Q"] = json::from_matrix(gen.Q);
  doc["eta"] = eta;
  doc["h_eta"] = h_eta;
  doc["H_discrete"] = entropy_discrete;
  doc["residual"] = p.residual;
  return doc;
}

json::Value to_json(const SweepReport& r) {
  json::Value doc = json::Value::object();
  doc["trials"] = r.trials;
  doc["eta"] = r.eta;
  doc["lambda"] = r.lambda;
  doc["ceiling"] = r.ceiling;
  doc["max_h"] = r.max_h;
  doc["min_margin"] = r.min_margin;
  doc["mean_margin"] = r.mean_margin;
  doc["all_below_ceiling"] = r.all_below_ceiling;
  doc["perturbations"] = r.perturbations;
  doc["degenerate_directions"] = r.degenerate_directions;
  doc["max_perturbation_increase"] = r.max_perturbation_increase;
  doc["perturbations_stationary"] = r.perturbations_stationary;
  doc["passed"] = r.passed;
  if (r.counterexample_Q.size() > 0)
    doc["counterexample_Q"] = json::from_matrix(r.counterexample_Q);
  return doc;
}

json::Value to_json(const PathReport& r) {
  json::Value doc = json::Value::object();
  doc["from"] = r.from;
  doc["to"] = r.to;
  doc["steps"] = r.steps;
  doc["t_f"] = r.horizon;
  doc["samples"] = r.samples;
  doc["vacuous"] = r.vacuous;
  json::Value paths = json::Value::array();
  for (const auto& path : r.paths) {
    json::Value nodes = json::Value::array();
    for (int node : path) nodes.push_back(node);
    paths.push_back(std::move(nodes));
  }
  doc["paths"] = std::move(paths);
  doc["exact_prob_each"] = r.exact_prob_each;
  doc["joint_prob_each"] = r.joint_prob_each;
  json::Value counts = json::Value::array();
  for (std::int64_t c : r.empirical_counts) counts.push_back(c);
  doc["empirical_counts"] = std::move(counts);
  doc["max_product_deviation"] = r.max_product_deviation;
  doc["max_pairwise_z"] = r.max_pairwise_z;
  doc["max_joint_z"] = r.max_joint_z;
  doc["exact_ok"] = r.exact_ok;
  doc["mc_ok"] = r.mc_ok;
  doc["passed"] = r.passed;
  return doc;
}

json::Value to_json(const VerifyReport& r) {
  json::Value doc = json::Value::object();
  json::Value checks = json::Value::array();
  for (const CheckResult& check : r.checks) {
    json::Value entry = json::Value::object();
    entry["name"] = check.name;
    entry["passed"] = check.passed;
    entry["observed"] = check.observed;
    entry["tolerance"] = check.tolerance;
    if (!check.details.empty()) entry["details"] = check.details;
    checks.push_back(std::move(entry));
  }
  doc["checks"] = std::move(checks);
  doc["sweep"] = to_json(r.sweep);
  doc["path_equalization"] = to_json(r.path_report);
  doc["passed"] = r.passed;
  return doc;
}

void write_ensemble(std::ostream& out, const std::vector<Trajectory>& ensemble,
                    std::uint64_t seed) {
  for (std::size_t id = 0; id < ensemble.size(); ++id) {
    const Trajectory& traj = ensemble[id];
    json::Value record = json::Value::object();
    record["id"] = std::uint64_t(id);
    record["start"] = traj.start;
    json::Value states = json::Value::array();
    for (int state : traj.states()) states.push_back(state);
    record["states"] = std::move(states);
    json::Value holds = json::Value::array();
    for (const Jump& jump : traj.jumps) holds.push_back(jump.holding_time);
    record["holding_times"] = std::move(holds);
    record["horizon"] = traj.horizon;
    record["seed"] = seed;
    record.write(out);
    out << '\n';
  }
}

std::string iso_timestamp_utc() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace rbwalk
