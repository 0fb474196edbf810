#pragma once

#include <memory>
#include <string>
#include <vector>

#include "stltube/linalg.hpp"

namespace stltube::stl {

enum class SignalKind { State, Input };

struct VarRef {
  SignalKind kind = SignalKind::State;
  int subsystem = 0;
  int component = 0;

  friend bool operator==(const VarRef&, const VarRef&) = default;
  friend auto operator<=>(const VarRef&, const VarRef&) = default;
};

/* Linear predicate, stored normalized as  sum coef * var >= bound. */
struct Predicate {
  std::vector<std::pair<VarRef, double>> terms;
  double bound = 0.0;
};

enum class NodeType { Pred, Not, And, Or, Always, Eventually, Until };

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Formula {
  NodeType type = NodeType::Pred;
  Predicate pred;                    // Pred only
  std::vector<FormulaPtr> children;  // Not: 1, And/Or: >= 2, G/F: 1, Until: 2
  int a = 0, b = 0;                  // step interval for temporal nodes

  static FormulaPtr make_pred(Predicate p);
  static FormulaPtr make_not(FormulaPtr f);
  static FormulaPtr make_and(std::vector<FormulaPtr> fs);
  static FormulaPtr make_or(std::vector<FormulaPtr> fs);
  static FormulaPtr make_always(int a, int b, FormulaPtr f);
  static FormulaPtr make_eventually(int a, int b, FormulaPtr f);
  static FormulaPtr make_until(int a, int b, FormulaPtr lhs, FormulaPtr rhs);
};

bool equal(const FormulaPtr& a, const FormulaPtr& b);
std::string print_formula(const FormulaPtr& f);

/* Per-subsystem state/input dimensions; predicates resolve against this. */
struct SubsystemDims {
  int n = 0;
  int m = 0;
};
using Signature = std::vector<SubsystemDims>;

/* Complete signal over t = 0..horizon for states, 0..horizon-1 for inputs. */
struct Trajectory {
  int horizon = 0;
  std::vector<std::vector<Vec>> x;  // [subsystem][t]
  std::vector<std::vector<Vec>> u;  // [subsystem][t]

  double value(const VarRef& v, int t) const;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, size_t pos)
      : std::runtime_error(msg + " at position " + std::to_string(pos)), position(pos) {}
  size_t position;
};

/* Text grammar (prefix operators bind tighter than the infix U):
 *   formula := or ;  or := and ('|' and)* ;  and := until ('&' until)*
 *   until   := prefix ('U' '[' INT ',' INT ']' prefix)*
 *   prefix  := ('G'|'F') '[' INT ',' INT ']' prefix | '!' prefix
 *            | '(' formula ')' | atom
 *   atom    := linexpr ('<='|'>='|'<'|'>') REAL   (strict forms collapse)
 *   linexpr := term (('+'|'-') term)* ;  term := [REAL '*'] var
 *   var     := ('x'|'u') INT '[' INT ']'
 */
FormulaPtr parse_formula(const std::string& text, const Signature& sig);

/* Negation pushdown; the result contains no Not nodes.  Negated Until is
 * rewritten through its bounded disjunctive expansion first. */
FormulaPtr normalize_negation_free(const FormulaPtr& f);

/* Steps needed to decide the formula from time t. */
int horizon(const FormulaPtr& f);

struct SplitResult {
  bool separable = false;
  std::vector<FormulaPtr> parts;  // indexed by subsystem; null when unconstrained
  std::string reason;
};

/* Top-level conjunction split by subsystem footprint (Assumption 1). */
SplitResult split_separable(const FormulaPtr& f, int num_subsystems);

/* Subsystems referenced by any predicate of f. */
std::vector<int> footprint(const FormulaPtr& f);

/* Quantitative semantics; positive means satisfied. */
double robustness(const FormulaPtr& f, const Trajectory& s, int t);

/* Independent Boolean semantics used as a test oracle. */
bool bool_sat(const FormulaPtr& f, const Trajectory& s, int t);

}  // namespace stltube::stl
