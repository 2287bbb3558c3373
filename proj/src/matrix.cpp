#include "matrel/matrix.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <functional>
#include <unordered_map>

namespace matrel {

namespace {

bool valid_element_id(const std::string& id) {
  if (id.empty()) return false;
  return std::all_of(id.begin(), id.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  });
}

std::uint64_t fnv1a(const std::string& s, std::uint64_t h) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace

FiniteMatrix::FiniteMatrix(std::string name, std::vector<std::string> carrier,
                           std::set<std::string> designated,
                           std::map<std::string, OpTable> ops)
    : name_(std::move(name)),
      carrier_(std::move(carrier)),
      designated_names_(std::move(designated)),
      ops_(std::move(ops)) {
  for (std::size_t i = 0; i < carrier_.size(); ++i)
    index_.emplace(carrier_[i], static_cast<int>(i));
  designated_.assign(carrier_.size(), false);
  for (const auto& d : designated_names_) {
    auto it = index_.find(d);
    if (it != index_.end()) designated_[it->second] = true;
  }
  std::uint64_t h = 1469598103934665603ull;
  for (const auto& e : carrier_) h = fnv1a(e + ";", h);
  for (const auto& d : designated_names_) h = fnv1a(d + "!", h);
  for (const auto& [op, t] : ops_) {
    h = fnv1a(op + "/" + std::to_string(t.arity), h);
    for (int v : t.values) h = fnv1a(std::to_string(v) + ",", h);
  }
  cache_key_ = name_ + "#" + std::to_string(h);
}

int FiniteMatrix::index_of(const std::string& element) const {
  auto it = index_.find(element);
  return it == index_.end() ? -1 : it->second;
}

bool FiniteMatrix::is_designated(const std::string& element) const {
  int i = index_of(element);
  return i >= 0 && designated_[i];
}

const OpTable& FiniteMatrix::op(const std::string& name) const {
  auto it = ops_.find(name);
  if (it == ops_.end()) throw EvalError("matrix " + name_ + " has no operation '" + name + "'");
  return it->second;
}

int FiniteMatrix::apply(const OpTable& t, const int* args) const {
  std::size_t idx = 0;
  for (int i = 0; i < t.arity; ++i) idx = idx * carrier_.size() + static_cast<std::size_t>(args[i]);
  return t.values[idx];
}

Signature FiniteMatrix::signature() const {
  Signature sig;
  for (const auto& [name, t] : ops_) sig.add(name, t.arity);
  return sig;
}

bool FiniteMatrix::is_unital() const {
  auto it = ops_.find("top");
  if (it == ops_.end() || it->second.values.empty()) return false;
  return designated_[it->second.values[0]];
}

std::string Valuation::str() const {
  std::string s = "{";
  bool first = true;
  for (const auto& [var, val] : assign) {
    if (!first) s += ", ";
    first = false;
    s += var + ":" + val;
  }
  return s + "}";
}

std::vector<std::string> validate_matrix(const FiniteMatrix& m, const Signature& sig) {
  std::vector<std::string> errors;
  if (m.carrier().empty()) errors.push_back("carrier: must be nonempty");
  std::set<std::string> seen;
  for (const auto& e : m.carrier()) {
    if (!valid_element_id(e))
      errors.push_back("carrier: invalid element id '" + e + "'");
    if (!seen.insert(e).second)
      errors.push_back("carrier: duplicate element id '" + e + "'");
  }
  for (const auto& d : m.designated())
    if (m.index_of(d) < 0)
      errors.push_back("designated: element '" + d + "' is not in the carrier");
  std::size_t n = m.carrier().size();
  for (const auto& [name, arity] : sig.connectives()) {
    if (!m.has_op(name)) {
      errors.push_back("operations." + name + ": missing table");
      continue;
    }
    const OpTable& t = m.op(name);
    if (t.arity != arity) {
      errors.push_back("operations." + name + ": arity " + std::to_string(t.arity) +
                       " does not match signature arity " + std::to_string(arity));
      continue;
    }
    std::size_t want = 1;
    for (int i = 0; i < arity; ++i) want *= n;
    if (t.values.size() != want) {
      errors.push_back("operations." + name + ": incomplete table (" +
                       std::to_string(t.values.size()) + " of " + std::to_string(want) +
                       " entries)");
      continue;
    }
    for (std::size_t i = 0; i < t.values.size(); ++i)
      if (t.values[i] < 0 || t.values[i] >= static_cast<int>(n)) {
        errors.push_back("operations." + name + ": entry " + std::to_string(i) +
                         " is outside the carrier");
        break;
      }
  }
  for (const auto& [name, t] : m.ops())
    if (!sig.contains(name))
      errors.push_back("operations." + name + ": not in the signature");
  return errors;
}

FiniteMatrix build_b2() {
  std::map<std::string, OpTable> ops;
  ops["and"] = {2, {0, 0, 0, 1}};
  ops["or"] = {2, {0, 1, 1, 1}};
  ops["imp"] = {2, {1, 1, 0, 1}};
  ops["neg"] = {1, {1, 0}};
  ops["top"] = {0, {1}};
  return FiniteMatrix("B2", {"0", "1"}, {"1"}, std::move(ops));
}

FiniteMatrix build_implicative2() {
  std::map<std::string, OpTable> ops;
  ops["imp"] = {2, {1, 1, 0, 1}};
  ops["top"] = {0, {1}};
  return FiniteMatrix("IMP2", {"0", "1"}, {"1"}, std::move(ops));
}

FiniteMatrix power_matrix(const FiniteMatrix& m, int k) {
  if (k < 1) throw std::invalid_argument("power_matrix: k must be >= 1");
  std::size_t n = m.size();
  std::size_t total = 1;
  for (int i = 0; i < k; ++i) {
    total *= n;
    if (total > 1u << 20) throw std::invalid_argument("power_matrix: carrier too large");
  }

  // Tuple t <-> index sum t_i * n^(k-1-i); ids are concatenated component ids.
  auto components = [&](std::size_t idx) {
    std::vector<int> c(k);
    for (int i = k - 1; i >= 0; --i) {
      c[i] = static_cast<int>(idx % n);
      idx /= n;
    }
    return c;
  };

  std::vector<std::string> carrier(total);
  std::set<std::string> designated;
  for (std::size_t idx = 0; idx < total; ++idx) {
    auto c = components(idx);
    std::string id;
    bool all_designated = true;
    for (int i = 0; i < k; ++i) {
      id += m.element(c[i]);
      if (!m.designated_index(c[i])) all_designated = false;
    }
    carrier[idx] = id;
    if (all_designated) designated.insert(id);
  }
  std::set<std::string> unique(carrier.begin(), carrier.end());
  if (unique.size() != carrier.size())
    throw std::invalid_argument("power_matrix: concatenated element ids collide");

  std::map<std::string, OpTable> ops;
  for (const auto& [name, base] : m.ops()) {
    OpTable t;
    t.arity = base.arity;
    std::size_t rows = 1;
    for (int i = 0; i < base.arity; ++i) rows *= total;
    t.values.resize(rows);
    std::vector<std::size_t> arg_idx(base.arity, 0);
    for (std::size_t row = 0; row < rows; ++row) {
      std::size_t r = row;
      for (int i = base.arity - 1; i >= 0; --i) {
        arg_idx[i] = r % total;
        r /= total;
      }
      std::vector<std::vector<int>> arg_comp;
      arg_comp.reserve(base.arity);
      for (int i = 0; i < base.arity; ++i) arg_comp.push_back(components(arg_idx[i]));
      std::size_t out = 0;
      std::vector<int> slot(base.arity);
      for (int comp = 0; comp < k; ++comp) {
        for (int i = 0; i < base.arity; ++i) slot[i] = arg_comp[i][comp];
        out = out * n + static_cast<std::size_t>(m.apply(base, slot.data()));
      }
      t.values[row] = static_cast<int>(out);
    }
    ops[name] = std::move(t);
  }
  return FiniteMatrix(m.name() + "^" + std::to_string(k), std::move(carrier),
                      std::move(designated), std::move(ops));
}

std::optional<FiniteMatrix> builtin_matrix(const std::string& name) {
  if (name == "B2") return build_b2();
  if (name == "IMP2") return build_implicative2();
  if (name.rfind("B2^", 0) == 0 && name.size() == 4 && name[3] >= '1' && name[3] <= '4')
    return power_matrix(build_b2(), name[3] - '0');
  return std::nullopt;
}

FiniteMatrix load_matrix_json(const nlohmann::json& doc) {
  auto require = [&](const char* field) -> const nlohmann::json& {
    if (!doc.contains(field))
      throw std::invalid_argument(std::string("matrix file: missing field '") + field + "'");
    return doc.at(field);
  };
  std::string name = require("name").get<std::string>();
  std::vector<std::string> elements = require("elements").get<std::vector<std::string>>();
  std::set<std::string> designated;
  for (const auto& d : require("designated")) designated.insert(d.get<std::string>());

  std::map<std::string, int> elem_index;
  for (std::size_t i = 0; i < elements.size(); ++i)
    elem_index[elements[i]] = static_cast<int>(i);

  std::map<std::string, int> sig_map;
  for (auto it = require("signature").begin(); it != require("signature").end(); ++it)
    sig_map[it.key()] = it.value().get<int>();

  std::map<std::string, OpTable> ops;
  const auto& operations = require("operations");
  for (auto it = operations.begin(); it != operations.end(); ++it) {
    auto sig_it = sig_map.find(it.key());
    int arity = sig_it == sig_map.end() ? -1 : sig_it->second;
    const auto& table = it.value().at("table");
    OpTable t;
    if (arity < 0) {
      // Fill anyway; validate_matrix reports the signature mismatch.
      t.arity = 0;
      ops[it.key()] = std::move(t);
      continue;
    }
    t.arity = arity;
    std::size_t rows = 1;
    for (int i = 0; i < arity; ++i) rows *= elements.size();
    t.values.assign(rows, -1);
    std::size_t filled = 0;
    for (auto row = table.begin(); row != table.end(); ++row) {
      std::vector<std::string> parts;
      const std::string& key = row.key();
      if (!key.empty()) {
        std::size_t start = 0;
        while (true) {
          std::size_t comma = key.find(',', start);
          parts.push_back(key.substr(start, comma - start));
          if (comma == std::string::npos) break;
          start = comma + 1;
        }
      }
      if (static_cast<int>(parts.size()) != arity)
        throw std::invalid_argument("matrix file: operation " + it.key() + ": key '" + key +
                                    "' does not list " + std::to_string(arity) + " arguments");
      std::size_t idx = 0;
      for (const auto& p : parts) {
        auto e = elem_index.find(p);
        if (e == elem_index.end())
          throw std::invalid_argument("matrix file: operation " + it.key() + ": unknown element '" +
                                      p + "'");
        idx = idx * elements.size() + static_cast<std::size_t>(e->second);
      }
      auto v = elem_index.find(row.value().get<std::string>());
      if (v == elem_index.end())
        throw std::invalid_argument("matrix file: operation " + it.key() +
                                    ": value outside the carrier for key '" + key + "'");
      if (t.values[idx] == -1) ++filled;
      t.values[idx] = v->second;
    }
    if (filled != rows) {
      // Leave holes visible: validate_matrix reports them as incomplete.
      std::vector<int> compact;
      compact.reserve(filled);
      for (int v : t.values)
        if (v != -1) compact.push_back(v);
      t.values = std::move(compact);
    }
    ops[it.key()] = std::move(t);
  }
  return FiniteMatrix(std::move(name), std::move(elements), std::move(designated), std::move(ops));
}

FiniteMatrix load_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open matrix file: " + path);
  nlohmann::json doc = nlohmann::json::parse(in);
  return load_matrix_json(doc);
}

namespace {

int eval_rec(const FiniteMatrix& m, const std::map<std::string, int>& env, const Formula& f,
             std::unordered_map<const void*, int>& memo) {
  const void* id = f.identity();
  auto hit = memo.find(id);
  if (hit != memo.end()) return hit->second;
  int out;
  switch (f.kind()) {
    case Formula::Kind::Var: {
      auto it = env.find(f.var_name());
      if (it == env.end())
        throw EvalError("unassigned variable '" + f.var_name() + "' in " + m.name());
      out = it->second;
      break;
    }
    case Formula::Kind::Elem: {
      if (f.matrix_name() != m.name())
        throw EvalError("constant " + f.str() + " names a foreign matrix (evaluating in " +
                        m.name() + ")");
      int idx = m.index_of(f.element());
      if (idx < 0) throw EvalError("constant " + f.str() + " is outside the carrier");
      out = idx;
      break;
    }
    case Formula::Kind::App: {
      const OpTable& t = m.op(f.connective());
      if (t.arity != static_cast<int>(f.args().size()))
        throw EvalError("connective '" + f.connective() + "' applied to " +
                        std::to_string(f.args().size()) + " arguments in " + m.name());
      std::vector<int> vals(f.args().size());
      for (std::size_t i = 0; i < f.args().size(); ++i)
        vals[i] = eval_rec(m, env, f.args()[i], memo);
      out = m.apply(t, vals.data());
      break;
    }
    default:
      throw std::logic_error("unreachable");
  }
  memo.emplace(id, out);
  return out;
}

std::map<std::string, int> compile_env(const FiniteMatrix& m, const Valuation& v) {
  std::map<std::string, int> env;
  for (const auto& [var, val] : v.assign) {
    int idx = m.index_of(val);
    if (idx < 0)
      throw EvalError("valuation assigns '" + val + "' which is not in the carrier of " + m.name());
    env[var] = idx;
  }
  return env;
}

}  // namespace

int evaluate_index(const FiniteMatrix& m, const Valuation& v, const Formula& f) {
  auto env = compile_env(m, v);
  std::unordered_map<const void*, int> memo;
  return eval_rec(m, env, f, memo);
}

std::string evaluate(const FiniteMatrix& m, const Valuation& v, const Formula& f) {
  return m.element(evaluate_index(m, v, f));
}

bool designates(const FiniteMatrix& m, const Valuation& v, const Formula& f) {
  return m.designated_index(evaluate_index(m, v, f));
}

bool designates_all(const FiniteMatrix& m, const Valuation& v, const FormulaSet& x) {
  auto env = compile_env(m, v);
  std::unordered_map<const void*, int> memo;  // shared across the set
  for (const auto& f : x)
    if (!m.designated_index(eval_rec(m, env, f, memo))) return false;
  return true;
}

}  // namespace matrel
