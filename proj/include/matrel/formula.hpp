// Propositional formulas over finite signatures: ASTs, parsing, printing,
// variable extraction, substitution, canonical formula sets.
#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace matrel {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, std::size_t position);
  std::size_t position() const { return pos_; }

 private:
  std::size_t pos_;
};

// Connective name -> arity. Every signature contains top/0.
// The reserved infix names and/or/imp/neg/top are pinned to arities
// 2/2/2/1/0 so the printer and parser agree.
class Signature {
 public:
  Signature();
  explicit Signature(std::map<std::string, int> connectives);

  void add(const std::string& name, int arity);
  bool contains(const std::string& name) const;
  int arity(const std::string& name) const;  // throws if unknown
  const std::map<std::string, int>& connectives() const { return conns_; }

  // and/2, or/2, imp/2, neg/1, top/0
  static const Signature& l0();

 private:
  std::map<std::string, int> conns_;
};

// Immutable AST node shared by value-semantic Formula handles.
// Variables match [a-su-z][a-zA-Z0-9_]* (bare T is reserved for top).
class Formula {
 public:
  enum class Kind { Var, Elem, App };

  static Formula var(const std::string& name);
  static Formula elem(const std::string& matrix, const std::string& element);
  static Formula app(const std::string& connective, std::vector<Formula> args);
  static const Formula& top();

  Kind kind() const { return n_->kind; }
  bool is_var() const { return n_->kind == Kind::Var; }
  bool is_elem() const { return n_->kind == Kind::Elem; }
  bool is_app() const { return n_->kind == Kind::App; }
  bool is_top() const;
  bool is_app_of(const std::string& connective) const;

  const std::string& var_name() const;      // Var
  const std::string& matrix_name() const;   // Elem
  const std::string& element() const;       // Elem
  const std::string& connective() const;    // App
  const std::vector<Formula>& args() const; // App

  // Canonical print, cached; parse(str()) reproduces the AST.
  const std::string& str() const { return n_->print; }
  std::size_t node_count() const { return n_->size; }

  // Node identity for memo tables; stable while any handle is alive.
  const void* identity() const { return n_.get(); }

  friend bool operator==(const Formula& a, const Formula& b);
  friend bool operator!=(const Formula& a, const Formula& b) { return !(a == b); }
  friend bool operator<(const Formula& a, const Formula& b);

 private:
  struct Node {
    Kind kind;
    std::string name;            // var name / matrix name / connective
    std::string element;         // Elem only
    std::vector<Formula> args;   // App only
    std::string print;
    std::size_t size = 1;
    int prec = 5;                // atom level
  };
  explicit Formula(std::shared_ptr<const Node> n) : n_(std::move(n)) {}
  std::shared_ptr<const Node> n_;
};

bool valid_variable_name(std::string_view name);

// Finite-domain simultaneous substitution; variables outside the map are fixed.
using Substitution = std::map<std::string, Formula>;

// Canonical set of formulas: sorted by printed form, deduplicated.
class FormulaSet {
 public:
  FormulaSet() = default;
  FormulaSet(std::initializer_list<Formula> items);
  explicit FormulaSet(std::vector<Formula> items);

  bool insert(const Formula& f);  // false if already present
  bool contains(const Formula& f) const;
  bool empty() const { return items_.empty(); }
  std::size_t size() const { return items_.size(); }
  const std::vector<Formula>& items() const { return items_; }
  auto begin() const { return items_.begin(); }
  auto end() const { return items_.end(); }

  FormulaSet united(const FormulaSet& other) const;
  FormulaSet without(const Formula& f) const;
  bool subset_of(const FormulaSet& other) const;

  // Stable key for memo tables: printed members joined by '\x1f'.
  std::string key() const;
  std::string str() const;  // "{a, b, c}"

  friend bool operator==(const FormulaSet& a, const FormulaSet& b) {
    return a.items_ == b.items_;
  }
  friend bool operator!=(const FormulaSet& a, const FormulaSet& b) {
    return !(a == b);
  }

 private:
  std::vector<Formula> items_;
};

Formula parse_formula(std::string_view text, const Signature& sig);

std::set<std::string> variables(const Formula& f);
std::set<std::string> variables(const FormulaSet& x);

Formula apply_substitution(const Substitution& s, const Formula& f);
FormulaSet apply_substitution(const Substitution& s, const FormulaSet& x);

// Left-folded conjunction over the canonical order; empty set gives top.
// Requires and/2 and top/0 in the signature.
Formula conjunction_of(const FormulaSet& delta, const Signature& sig);

}  // namespace matrel
