#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "rbwalk/jump.hpp"
#include "rbwalk/rb.hpp"
#include "rbwalk/spectral.hpp"
#include "rbwalk/verify.hpp"

namespace rbwalk::json {

// Minimal JSON document with insertion-ordered object keys. Floating-point
// numbers are written with 17 significant digits so every value round-trips
// exactly and output files are byte-stable.
class Value {
 public:
  enum class Kind { Null, Bool, Int, UInt, Double, String, Array, Object };

  Value() = default;
  Value(bool b);
  Value(int i);
  Value(std::int64_t i);
  Value(std::uint64_t u);
  Value(double d);
  Value(const char* s);
  Value(std::string s);

  static Value array();
  static Value object();

  Kind kind() const { return kind_; }

  // Object access; inserts a null value under a new key.
  Value& operator[](const std::string& key);
  void push_back(Value v);
  std::size_t size() const;

  // indent < 0 gives compact one-line output.
  std::string dump(int indent = -1) const;
  void write(std::ostream& out, int indent = -1) const;

 private:
  void write_indented(std::ostream& out, int indent, int depth) const;

  Kind kind_ = Kind::Null;
  bool bool_ = false;
  std::int64_t int_ = 0;
  std::uint64_t uint_ = 0;
  double double_ = 0.0;
  std::string string_;
  std::vector<Value> items_;
  std::vector<std::pair<std::string, Value>> members_;
};

Value from_vector(const Eigen::VectorXd& v);
Value from_matrix(const Eigen::MatrixXd& m);  // list of rows, row-major

}  // namespace rbwalk::json

namespace rbwalk {

// One construction run: lambda, phi, phi_hat, pi, P, Q, eta, h_eta,
// H_discrete, residual.
json::Value result_bundle(const PerronData& p, const DiscreteChain& chain,
                          const Generator& gen, double eta, double h_eta,
                          double entropy_discrete);

json::Value to_json(const SweepReport& r);
json::Value to_json(const PathReport& r);
json::Value to_json(const VerifyReport& r);

// Line-delimited records: id, start, states, holding_times, horizon, seed.
void write_ensemble(std::ostream& out, const std::vector<Trajectory>& ensemble,
                    std::uint64_t seed);

// Sole nondeterministic field of any output document.
std::string iso_timestamp_utc();

}  // namespace rbwalk
