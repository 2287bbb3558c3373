// Decision procedures for matrix consequence and restricted consequence
// over finite premise sets, by valuation enumeration.
#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "matrel/formula.hpp"
#include "matrel/matrix.hpp"

namespace matrel {

enum class Mode { CN, R, RSTAR };

std::string mode_name(Mode mode);
Mode mode_from_name(const std::string& name);

struct Query {
  FormulaSet premises;
  Formula conclusion;
  std::vector<FiniteMatrix> matrices;
  Mode mode = Mode::CN;
};

// witness is present iff holds is false; replaying it through the
// definitional check of the queried relation reproduces the failure.
struct Verdict {
  bool holds = true;
  std::optional<std::pair<std::string, Valuation>> witness;
  std::uint64_t valuations = 0;  // candidate valuations materialized
};

// Odometer over |carrier|^|vars| assignments: variables in sorted order,
// the last variable cycling fastest.
class ValuationEnumerator {
 public:
  ValuationEnumerator(const FiniteMatrix& m, const std::set<std::string>& vars);
  std::optional<Valuation> next();
  std::uint64_t total() const { return total_; }

 private:
  const FiniteMatrix& m_;
  std::vector<std::string> vars_;
  std::vector<int> odometer_;
  std::uint64_t total_;
  bool done_ = false;
};

std::vector<Valuation> enumerate_valuations(const FiniteMatrix& m,
                                            const std::set<std::string>& vars);

// True iff some extension of v over variables(x) designates every member
// of x. Defined for nonempty x only.
bool adopts(const FiniteMatrix& m, const Valuation& v, const FormulaSet& x);
bool adopts(const FiniteMatrix& m, const Valuation& v, const Formula& f);

// The extension found by the adopts search, in odometer order.
std::optional<Valuation> adopting_extension(const FiniteMatrix& m, const Valuation& v,
                                            const FormulaSet& x, std::uint64_t* counter = nullptr);

// Monotonic matrix consequence: every valuation over the query's variables
// designating all premises designates the conclusion, in every matrix.
Verdict cn_consequence(const Query& q);

// Restricted consequence, decided through the shared-variable reduction
// (restrictions over V(X) ∩ V(alpha)); witnesses are reported as failing
// restrictions over V(X) that designate the premises.
Verdict r_consequence(const Query& q);

// Literal form of the definition (restrictions over V(X), extension search
// over the conclusion's variables); kept as an independent oracle.
Verdict r_consequence_direct(const Query& q);

// Throws std::invalid_argument on malformed queries (empty family, formulas
// outside a matrix signature, foreign element constants).
void validate_query(const Query& q);

}  // namespace matrel
