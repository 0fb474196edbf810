#include <algorithm>
#include <stdexcept>

#include "stltube/stl/formula.hpp"

namespace stltube::stl {

namespace {

double pred_value(const Predicate& p, const Trajectory& s, int t) {
  double v = -p.bound;
  for (const auto& [var, coef] : p.terms) v += coef * s.value(var, t);
  return v;
}

double rob(const FormulaPtr& f, const Trajectory& s, int t) {
  switch (f->type) {
    case NodeType::Pred:
      return pred_value(f->pred, s, t);
    case NodeType::Not:
      return -rob(f->children[0], s, t);
    case NodeType::And: {
      double v = kInf;
      for (const auto& c : f->children) v = std::min(v, rob(c, s, t));
      return v;
    }
    case NodeType::Or: {
      double v = -kInf;
      for (const auto& c : f->children) v = std::max(v, rob(c, s, t));
      return v;
    }
    case NodeType::Always: {
      double v = kInf;
      for (int tp = t + f->a; tp <= t + f->b; ++tp) v = std::min(v, rob(f->children[0], s, tp));
      return v;
    }
    case NodeType::Eventually: {
      double v = -kInf;
      for (int tp = t + f->a; tp <= t + f->b; ++tp) v = std::max(v, rob(f->children[0], s, tp));
      return v;
    }
    case NodeType::Until: {
      double best = -kInf;
      double prefix = kInf;
      int tp = t;
      // running min of the left operand over [t, t']
      for (; tp < t + f->a; ++tp) prefix = std::min(prefix, rob(f->children[0], s, tp));
      for (; tp <= t + f->b; ++tp) {
        prefix = std::min(prefix, rob(f->children[0], s, tp));
        best = std::max(best, std::min(prefix, rob(f->children[1], s, tp)));
      }
      return best;
    }
  }
  throw std::logic_error("robustness: unreachable");
}

}  // namespace

double robustness(const FormulaPtr& f, const Trajectory& s, int t) {
  if (t + horizon(f) > s.horizon)
    throw std::out_of_range("robustness: t + hrz(f) exceeds the trajectory horizon");
  return rob(f, s, t);
}

bool bool_sat(const FormulaPtr& f, const Trajectory& s, int t) {
  switch (f->type) {
    case NodeType::Pred:
      return pred_value(f->pred, s, t) >= 0.0;
    case NodeType::Not:
      return !bool_sat(f->children[0], s, t);
    case NodeType::And:
      return std::all_of(f->children.begin(), f->children.end(),
                         [&](const FormulaPtr& c) { return bool_sat(c, s, t); });
    case NodeType::Or:
      return std::any_of(f->children.begin(), f->children.end(),
                         [&](const FormulaPtr& c) { return bool_sat(c, s, t); });
    case NodeType::Always: {
      for (int tp = t + f->a; tp <= t + f->b; ++tp)
        if (!bool_sat(f->children[0], s, tp)) return false;
      return true;
    }
    case NodeType::Eventually: {
      for (int tp = t + f->a; tp <= t + f->b; ++tp)
        if (bool_sat(f->children[0], s, tp)) return true;
      return false;
    }
    case NodeType::Until: {
      for (int tp = t + f->a; tp <= t + f->b; ++tp) {
        if (!bool_sat(f->children[1], s, tp)) continue;
        bool ok = true;
        for (int ts = t; ts <= tp; ++ts)
          if (!bool_sat(f->children[0], s, ts)) {
            ok = false;
            break;
          }
        if (ok) return true;
      }
      return false;
    }
  }
  throw std::logic_error("bool_sat: unreachable");
}

}  // namespace stltube::stl
