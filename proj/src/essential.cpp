#include "matrel/essential.hpp"

#include <algorithm>
#include <mutex>
#include <stdexcept>
#include <unordered_map>

namespace matrel {

namespace {

std::set<std::string> intersection(const std::set<std::string>& a,
                                   const std::set<std::string>& b) {
  std::set<std::string> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.begin()));
  return out;
}

struct EssentialCache {
  std::mutex mu;
  std::unordered_map<std::string, std::set<std::string>> entries;
};

EssentialCache& cache() {
  static EssentialCache c;
  return c;
}

}  // namespace

std::optional<EssentialWitness> essential_witness(const FiniteMatrix& m, const Formula& f,
                                                  const std::string& p) {
  std::set<std::string> vars = variables(f);
  if (!vars.count(p))
    throw std::invalid_argument("variable '" + p + "' does not occur in " + f.str());
  std::set<std::string> others = vars;
  others.erase(p);
  ValuationEnumerator e(m, others);
  while (auto base = e.next()) {
    std::optional<int> first;
    std::string first_elem;
    for (std::size_t a = 0; a < m.size(); ++a) {
      Valuation v = *base;
      v.assign[p] = m.element(static_cast<int>(a));
      int value = evaluate_index(m, v, f);
      if (!first) {
        first = value;
        first_elem = m.element(static_cast<int>(a));
      } else if (value != *first) {
        Valuation v0 = *base;
        v0.assign[p] = first_elem;
        Valuation v1 = *base;
        v1.assign[p] = m.element(static_cast<int>(a));
        return EssentialWitness{v0, v1};
      }
    }
  }
  return std::nullopt;
}

bool is_essential(const FiniteMatrix& m, const Formula& f, const std::string& p) {
  return essential_witness(m, f, p).has_value();
}

EssentialReport essential_report(const FiniteMatrix& m, const Formula& f) {
  EssentialReport report;
  report.formula = f;
  report.matrix = m.name();
  for (const auto& p : variables(f)) {
    auto w = essential_witness(m, f, p);
    if (w) {
      report.essential.insert(p);
      report.witnesses.emplace(p, *w);
    } else {
      report.inessential.insert(p);
    }
  }
  return report;
}

std::set<std::string> essential_variables(const FiniteMatrix& m, const Formula& f) {
  std::string key = m.cache_key() + '\x1f' + f.str();
  {
    std::lock_guard<std::mutex> lock(cache().mu);
    auto it = cache().entries.find(key);
    if (it != cache().entries.end()) return it->second;
  }
  std::set<std::string> essential;
  for (const auto& p : variables(f))
    if (is_essential(m, f, p)) essential.insert(p);
  std::lock_guard<std::mutex> lock(cache().mu);
  cache().entries.emplace(key, essential);
  return essential;
}

std::set<std::string> essential_set(const FiniteMatrix& m, const FormulaSet& x) {
  std::set<std::string> out;
  for (const auto& f : x)
    for (const auto& p : essential_variables(m, f)) out.insert(p);
  return out;
}

std::set<std::string> essential_set(const std::vector<FiniteMatrix>& ms, const FormulaSet& x) {
  if (ms.empty()) throw std::invalid_argument("essential_set: empty matrix family");
  std::set<std::string> out;
  for (const auto& m : ms)
    for (const auto& p : essential_set(m, x)) out.insert(p);
  return out;
}

std::optional<std::string> is_constant(const FiniteMatrix& m, const Formula& f) {
  ValuationEnumerator e(m, variables(f));
  std::optional<int> value;
  while (auto v = e.next()) {
    int got = evaluate_index(m, *v, f);
    if (!value)
      value = got;
    else if (got != *value)
      return std::nullopt;
  }
  return m.element(*value);
}

namespace {

Formula replace_vars(const Formula& f, const std::set<std::string>& targets,
                     const std::string& matrix, const std::string& element) {
  switch (f.kind()) {
    case Formula::Kind::Var:
      return targets.count(f.var_name()) ? Formula::elem(matrix, element) : f;
    case Formula::Kind::Elem:
      return f;
    case Formula::Kind::App: {
      bool changed = false;
      std::vector<Formula> args;
      args.reserve(f.args().size());
      for (const auto& a : f.args()) {
        args.push_back(replace_vars(a, targets, matrix, element));
        if (args.back() != a) changed = true;
      }
      return changed ? Formula::app(f.connective(), std::move(args)) : f;
    }
  }
  throw std::logic_error("unreachable");
}

}  // namespace

Formula c_instance(const FiniteMatrix& m, const Formula& f,
                   const std::optional<std::string>& element) {
  std::string a = element.value_or(m.element(0));
  if (m.index_of(a) < 0)
    throw std::invalid_argument("element '" + a + "' is not in the carrier of " + m.name());
  std::set<std::string> vars = variables(f);
  std::set<std::string> essential = essential_variables(m, f);
  std::set<std::string> inessential;
  std::set_difference(vars.begin(), vars.end(), essential.begin(), essential.end(),
                      std::inserter(inessential, inessential.begin()));
  if (inessential.empty()) return f;
  return replace_vars(f, inessential, m.name(), a);
}

FormulaSet c_instance_set(const FiniteMatrix& m, const FormulaSet& x,
                          const std::optional<std::string>& element) {
  std::vector<Formula> out;
  out.reserve(x.size());
  for (const auto& f : x) out.push_back(c_instance(m, f, element));
  return FormulaSet(std::move(out));
}

Verdict rstar_consequence(const Query& q) {
  validate_query(q);
  Verdict verdict;
  for (const auto& m : q.matrices) {
    Query per;
    per.premises = c_instance_set(m, q.premises);
    per.conclusion = q.conclusion;
    per.matrices = {m};
    per.mode = Mode::R;
    Verdict v = r_consequence(per);
    verdict.valuations += v.valuations;
    if (!v.holds) {
      verdict.holds = false;
      verdict.witness = v.witness;
      return verdict;
    }
  }
  return verdict;
}

Verdict rstar_consequence_direct(const Query& q) {
  validate_query(q);
  Verdict verdict;
  for (const auto& m : q.matrices) {
    FormulaSet xc = c_instance_set(m, q.premises);
    std::set<std::string> star_vars = essential_set(m, q.premises);
    std::set<std::string> all_vars = variables(q.premises);
    for (const auto& v : variables(q.conclusion)) all_vars.insert(v);
    std::set<std::string> ext_vars;
    std::set_difference(all_vars.begin(), all_vars.end(), star_vars.begin(), star_vars.end(),
                        std::inserter(ext_vars, ext_vars.begin()));
    ValuationEnumerator e(m, star_vars);
    while (auto v = e.next()) {
      ++verdict.valuations;
      if (!q.premises.empty() && !designates_all(m, *v, xc)) continue;
      bool found = false;
      ValuationEnumerator exts(m, ext_vars);
      while (auto ext = exts.next()) {
        ++verdict.valuations;
        Valuation w = *v;
        for (const auto& [var, val] : ext->assign) w.assign[var] = val;
        if (designates(m, w, q.conclusion)) {
          found = true;
          break;
        }
      }
      if (!found) {
        verdict.holds = false;
        verdict.witness = {m.name(), *v};
        return verdict;
      }
    }
  }
  return verdict;
}

Verdict decide(const Query& q) {
  switch (q.mode) {
    case Mode::CN: return cn_consequence(q);
    case Mode::R: return r_consequence(q);
    case Mode::RSTAR: return rstar_consequence(q);
  }
  throw std::logic_error("unreachable");
}

namespace {

bool core_condition(const std::vector<FiniteMatrix>& family, const FormulaSet& x,
                    const FormulaSet& y, const std::set<std::string>& alpha_vars, Mode mode) {
  if (mode == Mode::R) {
    return intersection(variables(y), alpha_vars) == intersection(variables(x), alpha_vars);
  }
  for (const auto& m : family) {
    if (intersection(essential_set(m, y), alpha_vars) !=
        intersection(essential_set(m, x), alpha_vars))
      return false;
  }
  return true;
}

}  // namespace

FormulaSet finitary_core(const std::vector<FiniteMatrix>& family, const FormulaSet& x,
                         const Formula& alpha, Mode mode) {
  if (mode == Mode::CN)
    throw std::invalid_argument("finitary_core is defined for modes r and rstar");
  if (x.empty()) throw std::invalid_argument("finitary_core: premise set must be nonempty");
  Query full{x, alpha, family, mode};
  if (!decide(full).holds)
    throw std::invalid_argument("finitary_core: the consequence does not hold for the input");

  std::set<std::string> alpha_vars = variables(alpha);
  std::size_t n = x.size();
  const auto& items = x.items();
  for (std::size_t k = 1; k <= n; ++k) {
    // lexicographic combinations of k indices
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    while (true) {
      std::vector<Formula> picked;
      picked.reserve(k);
      for (std::size_t i : idx) picked.push_back(items[i]);
      FormulaSet y(std::move(picked));
      if (core_condition(family, x, y, alpha_vars, mode)) {
        Query sub{y, alpha, family, mode};
        if (decide(sub).holds) return y;
      }
      // next combination
      std::size_t i = k;
      while (i-- > 0) {
        if (idx[i] + 1 <= n - (k - i)) {
          ++idx[i];
          for (std::size_t j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
          break;
        }
        if (i == 0) {
          i = k;  // exhausted
          break;
        }
      }
      if (i == k) break;
    }
  }
  throw std::logic_error("finitary_core: no core found although the full set entails");
}

}  // namespace matrel
