// Essential/inessential variables, c-instances, matrix constants, the
// refined restricted consequence r*, and finitary core extraction.
#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "matrel/engine.hpp"

namespace matrel {

struct EssentialWitness {
  Valuation v;
  Valuation w;  // differs from v only at the probed variable
};

struct EssentialReport {
  Formula formula;
  std::string matrix;
  std::set<std::string> essential;
  std::set<std::string> inessential;
  std::map<std::string, EssentialWitness> witnesses;  // per essential variable

  EssentialReport() : formula(Formula::top()) {}
};

// A variable is essential when two valuations agreeing everywhere else give
// the formula different values. Requires p in variables(f).
bool is_essential(const FiniteMatrix& m, const Formula& f, const std::string& p);
std::optional<EssentialWitness> essential_witness(const FiniteMatrix& m, const Formula& f,
                                                  const std::string& p);

EssentialReport essential_report(const FiniteMatrix& m, const Formula& f);

// Cached per (matrix, formula).
std::set<std::string> essential_variables(const FiniteMatrix& m, const Formula& f);

// Union over formulas and matrices; a variable is family-essential when it
// is essential for at least one member. Rejects an empty family.
std::set<std::string> essential_set(const std::vector<FiniteMatrix>& ms, const FormulaSet& x);
std::set<std::string> essential_set(const FiniteMatrix& m, const FormulaSet& x);

// The unique value the formula takes under every valuation, if any.
std::optional<std::string> is_constant(const FiniteMatrix& m, const Formula& f);

// Replaces every inessential variable by the constant for element a
// (default: first carrier element). A formula without inessential variables
// is returned unchanged.
Formula c_instance(const FiniteMatrix& m, const Formula& f,
                   const std::optional<std::string>& element = std::nullopt);
FormulaSet c_instance_set(const FiniteMatrix& m, const FormulaSet& x,
                          const std::optional<std::string>& element = std::nullopt);

// r*: per matrix, the premises are replaced by their c-instances and the
// result is decided as a restricted consequence; the family verdict is the
// conjunction over members.
Verdict rstar_consequence(const Query& q);

// Literal definitional form (restrictions over the essential premise
// variables); independent oracle for rstar_consequence.
Verdict rstar_consequence_direct(const Query& q);

// Smallest (size, then lexicographic) nonempty core Y of x that still
// entails alpha in the given mode and matches the shared-variable condition:
// V(Y)∩V(alpha) = V(x)∩V(alpha) for R, the per-matrix essential-variable
// analogue for RSTAR. Requires that the consequence holds for (x, alpha).
FormulaSet finitary_core(const std::vector<FiniteMatrix>& family, const FormulaSet& x,
                         const Formula& alpha, Mode mode);

// Dispatch on the query mode.
Verdict decide(const Query& q);

}  // namespace matrel
