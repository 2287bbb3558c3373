#include "matrel/formula.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace matrel {

ParseError::ParseError(const std::string& message, std::size_t position)
    : std::runtime_error(message + " (at position " + std::to_string(position) + ")"),
      pos_(position) {}

namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

bool valid_connective_name(const std::string& name) {
  if (name.empty() || name == "T") return false;
  if (!ident_start(name[0])) return false;
  return std::all_of(name.begin(), name.end(), ident_char);
}

int reserved_arity(const std::string& name) {
  if (name == "and" || name == "or" || name == "imp") return 2;
  if (name == "neg") return 1;
  if (name == "top") return 0;
  return -1;
}

}  // namespace

bool valid_variable_name(std::string_view name) {
  if (name.empty()) return false;
  char c = name[0];
  if (c < 'a' || c > 'z' || c == 't') return false;
  return std::all_of(name.begin(), name.end(), ident_char);
}

Signature::Signature() { conns_["top"] = 0; }

Signature::Signature(std::map<std::string, int> connectives) : Signature() {
  for (const auto& [name, arity] : connectives) add(name, arity);
}

void Signature::add(const std::string& name, int arity) {
  if (!valid_connective_name(name))
    throw std::invalid_argument("invalid connective name: '" + name + "'");
  if (arity < 0) throw std::invalid_argument("negative arity for connective " + name);
  int fixed = reserved_arity(name);
  if (fixed >= 0 && arity != fixed)
    throw std::invalid_argument("connective " + name + " is reserved with arity " +
                                std::to_string(fixed));
  auto it = conns_.find(name);
  if (it != conns_.end() && it->second != arity)
    throw std::invalid_argument("connective " + name + " redeclared with different arity");
  conns_[name] = arity;
}

bool Signature::contains(const std::string& name) const { return conns_.count(name) > 0; }

int Signature::arity(const std::string& name) const {
  auto it = conns_.find(name);
  if (it == conns_.end()) throw std::invalid_argument("unknown connective: " + name);
  return it->second;
}

const Signature& Signature::l0() {
  static const Signature sig(std::map<std::string, int>{
      {"and", 2}, {"or", 2}, {"imp", 2}, {"neg", 1}, {"top", 0}});
  return sig;
}

namespace {

// Precedence used by the printer and parser: imp < or < and < neg < atoms.
int connective_prec(const std::string& name, std::size_t arity) {
  if (name == "imp" && arity == 2) return 1;
  if (name == "or" && arity == 2) return 2;
  if (name == "and" && arity == 2) return 3;
  if (name == "neg" && arity == 1) return 4;
  return 5;
}

std::string wrapped(const Formula& f, bool parens) {
  if (!parens) return f.str();
  return "(" + f.str() + ")";
}

}  // namespace

Formula Formula::var(const std::string& name) {
  if (!valid_variable_name(name))
    throw std::invalid_argument("invalid variable name: '" + name + "'");
  auto n = std::make_shared<Node>();
  n->kind = Kind::Var;
  n->name = name;
  n->print = name;
  return Formula(std::move(n));
}

Formula Formula::elem(const std::string& matrix, const std::string& element) {
  if (matrix.empty() || element.empty())
    throw std::invalid_argument("element constant needs a matrix name and element id");
  auto n = std::make_shared<Node>();
  n->kind = Kind::Elem;
  n->name = matrix;
  n->element = element;
  n->print = "#" + matrix + ":" + element;
  return Formula(std::move(n));
}

Formula Formula::app(const std::string& connective, std::vector<Formula> args) {
  if (!valid_connective_name(connective))
    throw std::invalid_argument("invalid connective name: '" + connective + "'");
  auto n = std::make_shared<Node>();
  n->kind = Kind::App;
  n->name = connective;
  n->args = std::move(args);
  n->size = 1;
  for (const auto& a : n->args) n->size += a.node_count();
  n->prec = connective_prec(connective, n->args.size());
  switch (n->prec) {
    case 1: {  // right-associative implication
      const Formula& l = n->args[0];
      const Formula& r = n->args[1];
      n->print = wrapped(l, l.n_->prec <= 1) + " -> " + wrapped(r, r.n_->prec < 1);
      break;
    }
    case 2:
    case 3: {  // left-associative chains
      const Formula& l = n->args[0];
      const Formula& r = n->args[1];
      const char* op = n->prec == 2 ? " | " : " & ";
      n->print = wrapped(l, l.n_->prec < n->prec) + op + wrapped(r, r.n_->prec <= n->prec);
      break;
    }
    case 4:
      n->print = "~" + wrapped(n->args[0], n->args[0].n_->prec < 4);
      break;
    default:
      if (connective == "top" && n->args.empty()) {
        n->print = "T";
      } else {
        std::string s = connective + "(";
        for (std::size_t i = 0; i < n->args.size(); ++i) {
          if (i) s += ", ";
          s += n->args[i].str();
        }
        s += ")";
        n->print = std::move(s);
      }
  }
  return Formula(std::move(n));
}

const Formula& Formula::top() {
  static const Formula t = Formula::app("top", {});
  return t;
}

bool Formula::is_top() const {
  return n_->kind == Kind::App && n_->name == "top" && n_->args.empty();
}

bool Formula::is_app_of(const std::string& connective) const {
  return n_->kind == Kind::App && n_->name == connective;
}

const std::string& Formula::var_name() const {
  if (!is_var()) throw std::logic_error("not a variable");
  return n_->name;
}

const std::string& Formula::matrix_name() const {
  if (!is_elem()) throw std::logic_error("not an element constant");
  return n_->name;
}

const std::string& Formula::element() const {
  if (!is_elem()) throw std::logic_error("not an element constant");
  return n_->element;
}

const std::string& Formula::connective() const {
  if (!is_app()) throw std::logic_error("not an application");
  return n_->name;
}

const std::vector<Formula>& Formula::args() const {
  if (!is_app()) throw std::logic_error("not an application");
  return n_->args;
}

bool operator==(const Formula& a, const Formula& b) {
  if (a.n_ == b.n_) return true;
  return a.n_->print == b.n_->print;
}

bool operator<(const Formula& a, const Formula& b) { return a.n_->print < b.n_->print; }

FormulaSet::FormulaSet(std::initializer_list<Formula> items)
    : FormulaSet(std::vector<Formula>(items)) {}

FormulaSet::FormulaSet(std::vector<Formula> items) : items_(std::move(items)) {
  std::sort(items_.begin(), items_.end());
  items_.erase(std::unique(items_.begin(), items_.end()), items_.end());
}

bool FormulaSet::insert(const Formula& f) {
  auto it = std::lower_bound(items_.begin(), items_.end(), f);
  if (it != items_.end() && *it == f) return false;
  items_.insert(it, f);
  return true;
}

bool FormulaSet::contains(const Formula& f) const {
  return std::binary_search(items_.begin(), items_.end(), f);
}

FormulaSet FormulaSet::united(const FormulaSet& other) const {
  std::vector<Formula> merged;
  merged.reserve(items_.size() + other.items_.size());
  std::merge(items_.begin(), items_.end(), other.items_.begin(), other.items_.end(),
             std::back_inserter(merged));
  return FormulaSet(std::move(merged));
}

FormulaSet FormulaSet::without(const Formula& f) const {
  std::vector<Formula> rest;
  rest.reserve(items_.size());
  for (const auto& g : items_)
    if (!(g == f)) rest.push_back(g);
  FormulaSet out;
  out.items_ = std::move(rest);  // already sorted and unique
  return out;
}

bool FormulaSet::subset_of(const FormulaSet& other) const {
  return std::includes(other.items_.begin(), other.items_.end(), items_.begin(), items_.end());
}

std::string FormulaSet::key() const {
  std::string k;
  for (const auto& f : items_) {
    k += f.str();
    k += '\x1f';
  }
  return k;
}

std::string FormulaSet::str() const {
  std::string s = "{";
  for (std::size_t i = 0; i < items_.size(); ++i) {
    if (i) s += ", ";
    s += items_[i].str();
  }
  return s + "}";
}

namespace {

// Recursive-descent parser over the raw text; whitespace insignificant.
class Parser {
 public:
  Parser(std::string_view text, const Signature& sig) : text_(text), sig_(sig) {}

  Formula parse() {
    Formula f = formula();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return f;
  }

 private:
  std::string_view text_;
  const Signature& sig_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  bool eat_arrow() {
    skip_ws();
    if (pos_ + 1 < text_.size() && text_[pos_] == '-' && text_[pos_ + 1] == '>') {
      pos_ += 2;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  std::string ident() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < text_.size() && ident_char(text_[pos_])) ++pos_;
    if (pos_ == start) fail("expected an identifier");
    return std::string(text_.substr(start, pos_ - start));
  }

  Formula formula() {
    Formula lhs = disjunction();
    if (eat_arrow()) {
      Formula rhs = formula();  // right-associative
      return Formula::app("imp", {lhs, rhs});
    }
    return lhs;
  }

  Formula disjunction() {
    Formula f = conjunction();
    while (true) {
      skip_ws();
      if (pos_ < text_.size() && text_[pos_] == '|') {
        ++pos_;
        f = Formula::app("or", {f, conjunction()});
      } else {
        break;
      }
    }
    return f;
  }

  Formula conjunction() {
    Formula f = negation();
    while (eat('&')) f = Formula::app("and", {f, negation()});
    return f;
  }

  Formula negation() {
    if (eat('~')) return Formula::app("neg", {negation()});
    return atom();
  }

  Formula atom() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Formula f = formula();
      if (!eat(')')) fail("expected ')'");
      return f;
    }
    if (c == '#') return element_constant();
    if (!ident_start(c)) fail(std::string("unexpected character '") + c + "'");
    std::size_t at = pos_;
    std::string name = ident();
    if (name == "T") return Formula::top();
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == '(') return application(name, at);
    if (sig_.contains(name)) {
      pos_ = at;
      fail("connective '" + name + "' used without an argument list");
    }
    if (!valid_variable_name(name)) {
      pos_ = at;
      fail("invalid variable name '" + name + "'");
    }
    return Formula::var(name);
  }

  Formula application(const std::string& name, std::size_t at) {
    if (!sig_.contains(name)) {
      pos_ = at;
      fail("unknown connective '" + name + "'");
    }
    eat('(');
    std::vector<Formula> args;
    if (!eat(')')) {
      args.push_back(formula());
      while (eat(',')) args.push_back(formula());
      if (!eat(')')) fail("expected ')' in argument list");
    }
    int want = sig_.arity(name);
    if (static_cast<int>(args.size()) != want) {
      pos_ = at;
      fail("arity mismatch for '" + name + "': expected " + std::to_string(want) + " arguments, got " +
           std::to_string(args.size()));
    }
    return Formula::app(name, std::move(args));
  }

  Formula element_constant() {
    ++pos_;  // '#'
    std::size_t start = pos_;
    while (pos_ < text_.size() && (ident_char(text_[pos_]) || text_[pos_] == '^')) ++pos_;
    if (pos_ == start) fail("expected a matrix name after '#'");
    std::string matrix(text_.substr(start, pos_ - start));
    if (pos_ >= text_.size() || text_[pos_] != ':') fail("expected ':' in element constant");
    ++pos_;
    std::size_t estart = pos_;
    while (pos_ < text_.size() && ident_char(text_[pos_])) ++pos_;
    if (pos_ == estart) fail("expected an element id after ':'");
    return Formula::elem(matrix, std::string(text_.substr(estart, pos_ - estart)));
  }
};

void collect_variables(const Formula& f, std::set<std::string>& out) {
  switch (f.kind()) {
    case Formula::Kind::Var:
      out.insert(f.var_name());
      break;
    case Formula::Kind::Elem:
      break;
    case Formula::Kind::App:
      for (const auto& a : f.args()) collect_variables(a, out);
      break;
  }
}

}  // namespace

Formula parse_formula(std::string_view text, const Signature& sig) {
  return Parser(text, sig).parse();
}

std::set<std::string> variables(const Formula& f) {
  std::set<std::string> out;
  collect_variables(f, out);
  return out;
}

std::set<std::string> variables(const FormulaSet& x) {
  std::set<std::string> out;
  for (const auto& f : x) collect_variables(f, out);
  return out;
}

Formula apply_substitution(const Substitution& s, const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::Var: {
      auto it = s.find(f.var_name());
      return it == s.end() ? f : it->second;
    }
    case Formula::Kind::Elem:
      return f;
    case Formula::Kind::App: {
      bool changed = false;
      std::vector<Formula> args;
      args.reserve(f.args().size());
      for (const auto& a : f.args()) {
        args.push_back(apply_substitution(s, a));
        if (args.back() != a) changed = true;
      }
      if (!changed) return f;
      return Formula::app(f.connective(), std::move(args));
    }
  }
  throw std::logic_error("unreachable");
}

FormulaSet apply_substitution(const Substitution& s, const FormulaSet& x) {
  std::vector<Formula> out;
  out.reserve(x.size());
  for (const auto& f : x) out.push_back(apply_substitution(s, f));
  return FormulaSet(std::move(out));
}

Formula conjunction_of(const FormulaSet& delta, const Signature& sig) {
  if (!sig.contains("and") || !sig.contains("top"))
    throw std::invalid_argument("conjunction_of needs and/2 and top/0 in the signature");
  if (delta.empty()) return Formula::top();
  auto it = delta.begin();
  Formula acc = *it;
  for (++it; it != delta.end(); ++it) acc = Formula::app("and", {acc, *it});
  return acc;
}

}  // namespace matrel
