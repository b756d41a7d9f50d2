#ifndef STTL_STL_FORMULA_HPP
#define STTL_STL_FORMULA_HPP

#include <functional>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sttl {

// Hyperrectangle predicate h(x) = min_i (half_width_i - |x_i - center_i|),
// positive iff x is strictly inside the box. A custom evaluation hook can be
// attached programmatically for other predicate shapes; the parser only
// produces boxes, and Lipschitz bounding rejects custom predicates.
struct Predicate {
  std::string label;
  std::vector<double> center;
  std::vector<double> half_width;  // same length as center, strictly positive
  std::function<double(std::span<const double>)> custom;

  Predicate() = default;
  Predicate(std::string label, std::vector<double> center, std::vector<double> half_width);
  Predicate(std::string label, std::vector<double> center, double half_width);

  bool is_box() const { return !custom; }
  std::size_t dim() const { return center.size(); }
  double eval(std::span<const double> x) const;
};

enum class StlKind { truth, predicate, negation, conjunction, disjunction, eventually, always, until };

struct Interval {
  double a = 0.0;
  double b = 0.0;
};

struct StlFormula;
using FormulaPtr = std::shared_ptr<const StlFormula>;

// Immutable AST node. Construct through the factory functions, which validate
// arity and interval well-formedness; all evaluation is side-effect free.
struct StlFormula {
  StlKind kind = StlKind::truth;
  std::shared_ptr<const Predicate> pred;  // kind == predicate
  std::vector<FormulaPtr> children;       // arity 0, 1 or 2
  Interval interval;                      // temporal kinds only

  static FormulaPtr truth();
  static FormulaPtr predicate(Predicate p);
  static FormulaPtr negation(FormulaPtr f);
  static FormulaPtr conjunction(FormulaPtr lhs, FormulaPtr rhs);
  static FormulaPtr disjunction(FormulaPtr lhs, FormulaPtr rhs);
  static FormulaPtr eventually(Interval iv, FormulaPtr f);
  static FormulaPtr always(Interval iv, FormulaPtr f);
  static FormulaPtr until(Interval iv, FormulaPtr lhs, FormulaPtr rhs);
};

using RegionTable = std::map<std::string, Predicate>;

// Grammar (see README for the full EBNF):
//   implication (lowest, right-assoc, desugared to !p | q) < "|" < "&" <
//   infix "U[a,b]" < prefix "!", "G[a,b]", "F[a,b]" < atoms.
// Atoms are `true`, `false` (sugar for !true), names bound via the region
// table, and parenthesized formulas. G/F/U are treated as operators only when
// followed by '['; otherwise they are plain region names.
FormulaPtr parse_formula(std::string_view text, const RegionTable& regions);

// Pretty-printer; parse_formula(to_string(f)) is structurally identical to f.
std::string to_string(const StlFormula& f);

bool structurally_equal(const StlFormula& lhs, const StlFormula& rhs);

// Max nesting of b-endpoints; 0 for temporal-free formulas.
double formula_horizon(const StlFormula& f);

// Upper bound on the per-coordinate Lipschitz constant of the robustness with
// respect to a single signal coordinate. Box predicates are 1-Lipschitz per
// coordinate and min/max/negation preserve that, so this returns 1.0; custom
// predicates are rejected.
double robustness_lipschitz_bound(const StlFormula& f);

// State dimension required by the predicates (0 if none); throws on mismatch.
std::size_t formula_dimension(const StlFormula& f);

void collect_predicates(const StlFormula& f, std::vector<const Predicate*>& out);

}  // namespace sttl

#endif
