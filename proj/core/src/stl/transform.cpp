#include <algorithm>
#include <set>
#include <stdexcept>

#include "stltube/stl/formula.hpp"

namespace stltube::stl {

namespace {

/* Bounded disjunctive expansion of Until over pointwise F[t,t] wrappers;
 * the grammar has no Release operator, so a negated Until is rewritten
 * through this expansion before pushing the negation inward. */
FormulaPtr expand_until(const FormulaPtr& u) {
  std::vector<FormulaPtr> disjuncts;
  for (int tp = u->a; tp <= u->b; ++tp) {
    std::vector<FormulaPtr> conj;
    conj.push_back(Formula::make_eventually(tp, tp, u->children[1]));
    for (int ts = 0; ts <= tp; ++ts)
      conj.push_back(Formula::make_eventually(ts, ts, u->children[0]));
    disjuncts.push_back(Formula::make_and(std::move(conj)));
  }
  return Formula::make_or(std::move(disjuncts));
}

FormulaPtr norm(const FormulaPtr& f, bool negate) {
  switch (f->type) {
    case NodeType::Pred: {
      if (!negate) return f;
      Predicate p = f->pred;
      for (auto& [v, c] : p.terms) c = -c;
      p.bound = -p.bound;  // strict complement collapsed to non-strict
      return Formula::make_pred(std::move(p));
    }
    case NodeType::Not:
      return norm(f->children[0], !negate);
    case NodeType::And:
    case NodeType::Or: {
      std::vector<FormulaPtr> cs;
      cs.reserve(f->children.size());
      for (const auto& c : f->children) cs.push_back(norm(c, negate));
      bool make_conj = (f->type == NodeType::And) != negate;
      return make_conj ? Formula::make_and(std::move(cs)) : Formula::make_or(std::move(cs));
    }
    case NodeType::Always: {
      auto c = norm(f->children[0], negate);
      return negate ? Formula::make_eventually(f->a, f->b, c)
                    : Formula::make_always(f->a, f->b, c);
    }
    case NodeType::Eventually: {
      auto c = norm(f->children[0], negate);
      return negate ? Formula::make_always(f->a, f->b, c)
                    : Formula::make_eventually(f->a, f->b, c);
    }
    case NodeType::Until: {
      if (!negate)
        return Formula::make_until(f->a, f->b, norm(f->children[0], false),
                                   norm(f->children[1], false));
      return norm(expand_until(f), true);
    }
  }
  throw std::logic_error("normalize: unreachable");
}

}  // namespace

FormulaPtr normalize_negation_free(const FormulaPtr& f) { return norm(f, false); }

int horizon(const FormulaPtr& f) {
  switch (f->type) {
    case NodeType::Pred:
      return 0;
    case NodeType::Not:
      return horizon(f->children[0]);
    case NodeType::And:
    case NodeType::Or: {
      int h = 0;
      for (const auto& c : f->children) h = std::max(h, horizon(c));
      return h;
    }
    case NodeType::Always:
    case NodeType::Eventually:
      return f->b + horizon(f->children[0]);
    case NodeType::Until:
      return f->b + std::max(horizon(f->children[0]), horizon(f->children[1]));
  }
  throw std::logic_error("horizon: unreachable");
}

namespace {
void collect_footprint(const FormulaPtr& f, std::set<int>& out) {
  if (f->type == NodeType::Pred) {
    for (const auto& [v, c] : f->pred.terms) out.insert(v.subsystem);
    return;
  }
  for (const auto& c : f->children) collect_footprint(c, out);
}

void flatten_and(const FormulaPtr& f, std::vector<FormulaPtr>& out) {
  if (f->type == NodeType::And) {
    for (const auto& c : f->children) flatten_and(c, out);
    return;
  }
  out.push_back(f);
}
}  // namespace

std::vector<int> footprint(const FormulaPtr& f) {
  std::set<int> s;
  collect_footprint(f, s);
  return {s.begin(), s.end()};
}

SplitResult split_separable(const FormulaPtr& f, int num_subsystems) {
  SplitResult res;
  std::vector<FormulaPtr> conjuncts;
  flatten_and(f, conjuncts);
  std::vector<std::vector<FormulaPtr>> per(num_subsystems);
  for (const auto& c : conjuncts) {
    auto fp = footprint(c);
    if (fp.size() != 1) {
      res.separable = false;
      res.reason = "conjunct '" + print_formula(c) + "' references " +
                   std::to_string(fp.size()) + " subsystems";
      return res;
    }
    if (fp[0] >= num_subsystems) {
      res.separable = false;
      res.reason = "subsystem index out of range";
      return res;
    }
    per[fp[0]].push_back(c);
  }
  res.separable = true;
  res.parts.resize(num_subsystems);
  for (int i = 0; i < num_subsystems; ++i) {
    if (per[i].empty()) continue;
    res.parts[i] = per[i].size() == 1 ? per[i][0] : Formula::make_and(std::move(per[i]));
  }
  return res;
}

}  // namespace stltube::stl
