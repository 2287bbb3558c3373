#include "matrel/engine.hpp"

#include <algorithm>
#include <stdexcept>

namespace matrel {

std::string mode_name(Mode mode) {
  switch (mode) {
    case Mode::CN: return "cn";
    case Mode::R: return "r";
    case Mode::RSTAR: return "rstar";
  }
  return "?";
}

Mode mode_from_name(const std::string& name) {
  if (name == "cn") return Mode::CN;
  if (name == "r") return Mode::R;
  if (name == "rstar" || name == "r*") return Mode::RSTAR;
  throw std::invalid_argument("unknown mode: " + name);
}

ValuationEnumerator::ValuationEnumerator(const FiniteMatrix& m, const std::set<std::string>& vars)
    : m_(m), vars_(vars.begin(), vars.end()), odometer_(vars.size(), 0) {
  total_ = 1;
  for (std::size_t i = 0; i < vars_.size(); ++i) total_ *= m_.size();
  if (m_.size() == 0) done_ = true;
}

std::optional<Valuation> ValuationEnumerator::next() {
  if (done_) return std::nullopt;
  Valuation v;
  v.matrix = m_.name();
  for (std::size_t i = 0; i < vars_.size(); ++i) v.assign[vars_[i]] = m_.element(odometer_[i]);
  // advance, last variable fastest
  done_ = true;
  for (std::size_t i = vars_.size(); i-- > 0;) {
    if (++odometer_[i] < static_cast<int>(m_.size())) {
      done_ = false;
      break;
    }
    odometer_[i] = 0;
  }
  if (vars_.empty()) done_ = true;
  return v;
}

std::vector<Valuation> enumerate_valuations(const FiniteMatrix& m,
                                            const std::set<std::string>& vars) {
  std::vector<Valuation> out;
  ValuationEnumerator e(m, vars);
  while (auto v = e.next()) out.push_back(*v);
  return out;
}

namespace {

std::set<std::string> difference(const std::set<std::string>& a, const std::set<std::string>& b) {
  std::set<std::string> out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.begin()));
  return out;
}

std::set<std::string> intersection(const std::set<std::string>& a,
                                   const std::set<std::string>& b) {
  std::set<std::string> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.begin()));
  return out;
}

std::set<std::string> domain(const Valuation& v) {
  std::set<std::string> out;
  for (const auto& [var, _] : v.assign) out.insert(var);
  return out;
}

Valuation merged(const Valuation& base, const Valuation& ext) {
  Valuation w = base;
  for (const auto& [var, val] : ext.assign) w.assign[var] = val;
  return w;
}

}  // namespace

std::optional<Valuation> adopting_extension(const FiniteMatrix& m, const Valuation& v,
                                            const FormulaSet& x, std::uint64_t* counter) {
  if (x.empty()) throw std::invalid_argument("adopts is defined for nonempty formula sets only");
  std::set<std::string> ext_vars = difference(variables(x), domain(v));
  ValuationEnumerator e(m, ext_vars);
  while (auto ext = e.next()) {
    if (counter) ++*counter;
    Valuation w = merged(v, *ext);
    if (designates_all(m, w, x)) return w;
  }
  return std::nullopt;
}

bool adopts(const FiniteMatrix& m, const Valuation& v, const FormulaSet& x) {
  return adopting_extension(m, v, x).has_value();
}

bool adopts(const FiniteMatrix& m, const Valuation& v, const Formula& f) {
  return adopting_extension(m, v, FormulaSet{f}).has_value();
}

void validate_query(const Query& q) {
  if (q.matrices.empty()) throw std::invalid_argument("query needs a nonempty matrix family");
  for (const auto& m : q.matrices) {
    Signature sig = m.signature();
    auto check = [&](const Formula& f, auto&& self) -> void {
      switch (f.kind()) {
        case Formula::Kind::Var:
          return;
        case Formula::Kind::Elem:
          if (f.matrix_name() != m.name())
            throw std::invalid_argument("constant " + f.str() + " does not belong to matrix " +
                                        m.name());
          if (m.index_of(f.element()) < 0)
            throw std::invalid_argument("constant " + f.str() + " is outside the carrier");
          return;
        case Formula::Kind::App:
          if (!sig.contains(f.connective()))
            throw std::invalid_argument("matrix " + m.name() + " does not interpret connective '" +
                                        f.connective() + "'");
          if (sig.arity(f.connective()) != static_cast<int>(f.args().size()))
            throw std::invalid_argument("arity mismatch for '" + f.connective() + "' in matrix " +
                                        m.name());
          for (const auto& a : f.args()) self(a, self);
          return;
      }
    };
    for (const auto& f : q.premises) check(f, check);
    check(q.conclusion, check);
  }
}

namespace {

// Per-matrix CN check over V(X ∪ {alpha}).
std::optional<Valuation> cn_counterexample(const FiniteMatrix& m, const FormulaSet& premises,
                                           const Formula& conclusion, std::uint64_t& count) {
  std::set<std::string> vars = variables(premises);
  for (const auto& v : variables(conclusion)) vars.insert(v);
  ValuationEnumerator e(m, vars);
  while (auto v = e.next()) {
    ++count;
    if (designates_all(m, *v, premises) && !designates(m, *v, conclusion)) return v;
  }
  return std::nullopt;
}

// Per-matrix R check. Restrictions v0 range over V(X) ∩ V(alpha); v0 must
// adopt alpha whenever it adopts X. A failing v0 is widened to the
// X-designating restriction over V(X) found by the adopts search, so the
// witness falsifies the definitional form directly.
std::optional<Valuation> r_counterexample(const FiniteMatrix& m, const FormulaSet& premises,
                                          const Formula& conclusion, std::uint64_t& count) {
  if (premises.empty()) {
    std::set<std::string> avars = variables(conclusion);
    ValuationEnumerator e(m, avars);
    while (auto v = e.next()) {
      ++count;
      if (designates(m, *v, conclusion)) return std::nullopt;
    }
    return Valuation{m.name(), {}};  // the empty restriction; alpha unsatisfiable
  }
  std::set<std::string> shared = intersection(variables(premises), variables(conclusion));
  ValuationEnumerator e(m, shared);
  while (auto v0 = e.next()) {
    ++count;
    auto wx = adopting_extension(m, *v0, premises, &count);
    if (!wx) continue;
    if (!adopting_extension(m, *v0, FormulaSet{conclusion}, &count)) return wx;
  }
  return std::nullopt;
}

// Literal definitional form: restrictions over V(X), extension search over
// V(alpha) \ V(X).
std::optional<Valuation> r_direct_counterexample(const FiniteMatrix& m, const FormulaSet& premises,
                                                 const Formula& conclusion, std::uint64_t& count) {
  std::set<std::string> xvars = variables(premises);
  std::set<std::string> ext_vars = difference(variables(conclusion), xvars);
  ValuationEnumerator e(m, xvars);
  while (auto v = e.next()) {
    ++count;
    if (!designates_all(m, *v, premises)) continue;
    bool found = false;
    ValuationEnumerator exts(m, ext_vars);
    while (auto ext = exts.next()) {
      ++count;
      if (designates(m, merged(*v, *ext), conclusion)) {
        found = true;
        break;
      }
    }
    if (!found) return v;
  }
  return std::nullopt;
}

template <typename PerMatrix>
Verdict family_verdict(const Query& q, PerMatrix&& per_matrix) {
  validate_query(q);
  Verdict verdict;
  for (const auto& m : q.matrices) {
    auto witness = per_matrix(m, q.premises, q.conclusion, verdict.valuations);
    if (witness) {
      verdict.holds = false;
      verdict.witness = {m.name(), *witness};
      return verdict;
    }
  }
  return verdict;
}

}  // namespace

Verdict cn_consequence(const Query& q) { return family_verdict(q, cn_counterexample); }

Verdict r_consequence(const Query& q) { return family_verdict(q, r_counterexample); }

Verdict r_consequence_direct(const Query& q) {
  return family_verdict(q, r_direct_counterexample);
}

}  // namespace matrel
