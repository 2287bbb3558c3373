// Finite logical matrices: explicit operation tables over a finite carrier
// with a designated subset, plus homomorphic evaluation of formulas.
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "matrel/formula.hpp"

#include "json.hpp"

namespace matrel {

class EvalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Dense operation table indexed by carrier positions.
struct OpTable {
  int arity = 0;
  std::vector<int> values;  // size |carrier|^arity, entries are carrier positions
};

class FiniteMatrix {
 public:
  FiniteMatrix(std::string name, std::vector<std::string> carrier,
               std::set<std::string> designated,
               std::map<std::string, OpTable> ops);

  const std::string& name() const { return name_; }
  const std::vector<std::string>& carrier() const { return carrier_; }
  std::size_t size() const { return carrier_.size(); }
  const std::set<std::string>& designated() const { return designated_names_; }

  int index_of(const std::string& element) const;  // -1 if absent
  const std::string& element(int index) const { return carrier_.at(index); }
  bool designated_index(int index) const { return designated_[index]; }
  bool is_designated(const std::string& element) const;

  bool has_op(const std::string& name) const { return ops_.count(name) > 0; }
  const OpTable& op(const std::string& name) const;
  const std::map<std::string, OpTable>& ops() const { return ops_; }
  int apply(const OpTable& t, const int* args) const;

  // Signature induced by the operation tables (top/0 is always included).
  Signature signature() const;

  // Stable identity for caches: name plus a content hash.
  const std::string& cache_key() const { return cache_key_; }

  // Unital in the sense of a designated top value.
  bool is_unital() const;

 private:
  std::string name_;
  std::vector<std::string> carrier_;
  std::map<std::string, int> index_;
  std::set<std::string> designated_names_;
  std::vector<bool> designated_;
  std::map<std::string, OpTable> ops_;
  std::string cache_key_;
};

// Partial assignment of variables to carrier elements of one matrix.
struct Valuation {
  std::string matrix;
  std::map<std::string, std::string> assign;

  bool defined(const std::string& var) const { return assign.count(var) > 0; }
  std::string str() const;

  friend bool operator==(const Valuation& a, const Valuation& b) {
    return a.matrix == b.matrix && a.assign == b.assign;
  }
};

// Structural checks: nonempty carrier, designated within carrier, a complete
// table for every signature connective, and nothing outside the signature.
std::vector<std::string> validate_matrix(const FiniteMatrix& m, const Signature& sig);

// Two-element Boolean matrix with designated {1} over and/or/imp/neg/top.
FiniteMatrix build_b2();

// Two-element implicative matrix over imp/top with designated {1}.
FiniteMatrix build_implicative2();

// Pointwise k-th power; elements are concatenated component ids and the
// designated set is the product filter (all components designated).
FiniteMatrix power_matrix(const FiniteMatrix& m, int k);

// Resolves B2, IMP2 and B2^k for k in 1..4.
std::optional<FiniteMatrix> builtin_matrix(const std::string& name);

// Matrix file format:
// {"name": str, "signature": {name: arity, ...}, "elements": [str, ...],
//  "designated": [str, ...], "operations": {name: {"table": {"e1,e2": "e", ...}}}}
// Nullary operations use the key "".
FiniteMatrix load_matrix_json(const nlohmann::json& doc);
FiniteMatrix load_matrix_file(const std::string& path);

// Homomorphic evaluation; element constants must name this matrix.
// Requires variables(f) within the valuation's domain.
std::string evaluate(const FiniteMatrix& m, const Valuation& v, const Formula& f);
int evaluate_index(const FiniteMatrix& m, const Valuation& v, const Formula& f);
bool designates(const FiniteMatrix& m, const Valuation& v, const Formula& f);
bool designates_all(const FiniteMatrix& m, const Valuation& v, const FormulaSet& x);

}  // namespace matrel
