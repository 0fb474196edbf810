#include "stltube/stl/formula.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace stltube::stl {

namespace {
FormulaPtr node(Formula f) { return std::make_shared<const Formula>(std::move(f)); }

void check_interval(int a, int b) {
  if (a < 0 || b < 0 || a > b)
    throw std::invalid_argument("Formula: malformed interval [" + std::to_string(a) + "," +
                                std::to_string(b) + "]");
}
}  // namespace

FormulaPtr Formula::make_pred(Predicate p) {
  if (p.terms.empty()) throw std::invalid_argument("Predicate: needs at least one term");
  for (auto& [v, c] : p.terms)
    if (!std::isfinite(c)) throw std::invalid_argument("Predicate: non-finite coefficient");
  Formula f;
  f.type = NodeType::Pred;
  f.pred = std::move(p);
  return node(std::move(f));
}

FormulaPtr Formula::make_not(FormulaPtr c) {
  Formula f;
  f.type = NodeType::Not;
  f.children = {std::move(c)};
  return node(std::move(f));
}

FormulaPtr Formula::make_and(std::vector<FormulaPtr> fs) {
  if (fs.size() == 1) return fs[0];
  if (fs.size() < 2) throw std::invalid_argument("And: needs at least two children");
  Formula f;
  f.type = NodeType::And;
  f.children = std::move(fs);
  return node(std::move(f));
}

FormulaPtr Formula::make_or(std::vector<FormulaPtr> fs) {
  if (fs.size() == 1) return fs[0];
  if (fs.size() < 2) throw std::invalid_argument("Or: needs at least two children");
  Formula f;
  f.type = NodeType::Or;
  f.children = std::move(fs);
  return node(std::move(f));
}

FormulaPtr Formula::make_always(int a, int b, FormulaPtr c) {
  check_interval(a, b);
  Formula f;
  f.type = NodeType::Always;
  f.a = a;
  f.b = b;
  f.children = {std::move(c)};
  return node(std::move(f));
}

FormulaPtr Formula::make_eventually(int a, int b, FormulaPtr c) {
  check_interval(a, b);
  Formula f;
  f.type = NodeType::Eventually;
  f.a = a;
  f.b = b;
  f.children = {std::move(c)};
  return node(std::move(f));
}

FormulaPtr Formula::make_until(int a, int b, FormulaPtr lhs, FormulaPtr rhs) {
  check_interval(a, b);
  Formula f;
  f.type = NodeType::Until;
  f.a = a;
  f.b = b;
  f.children = {std::move(lhs), std::move(rhs)};
  return node(std::move(f));
}

bool equal(const FormulaPtr& a, const FormulaPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->type != b->type || a->a != b->a || a->b != b->b) return false;
  if (a->type == NodeType::Pred) {
    if (a->pred.bound != b->pred.bound) return false;
    if (a->pred.terms != b->pred.terms) return false;
  }
  if (a->children.size() != b->children.size()) return false;
  for (size_t i = 0; i < a->children.size(); ++i)
    if (!equal(a->children[i], b->children[i])) return false;
  return true;
}

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void print_rec(const FormulaPtr& f, std::ostringstream& os, int parent_prec) {
  // precedence: or=0, and=1, until=2, prefix=3, atom=4
  auto open = [&](int prec) {
    if (prec < parent_prec) os << "(";
  };
  auto close = [&](int prec) {
    if (prec < parent_prec) os << ")";
  };
  switch (f->type) {
    case NodeType::Pred: {
      os << "(";
      bool first = true;
      for (const auto& [v, c] : f->pred.terms) {
        if (!first && c >= 0) os << " + ";
        if (!first && c < 0) os << " - ";
        double mag = first ? c : std::abs(c);
        first = false;
        if (mag != 1.0) os << fmt(mag) << "*";
        os << (v.kind == SignalKind::State ? "x" : "u") << v.subsystem << "[" << v.component
           << "]";
      }
      os << " >= " << fmt(f->pred.bound) << ")";
      break;
    }
    case NodeType::Not:
      open(3);
      os << "!";
      print_rec(f->children[0], os, 3);
      close(3);
      break;
    case NodeType::And: {
      open(1);
      for (size_t i = 0; i < f->children.size(); ++i) {
        if (i) os << " & ";
        print_rec(f->children[i], os, 2);
      }
      close(1);
      break;
    }
    case NodeType::Or: {
      open(0);
      for (size_t i = 0; i < f->children.size(); ++i) {
        if (i) os << " | ";
        print_rec(f->children[i], os, 1);
      }
      close(0);
      break;
    }
    case NodeType::Always:
    case NodeType::Eventually:
      open(3);
      os << (f->type == NodeType::Always ? "G" : "F") << "[" << f->a << "," << f->b << "] ";
      print_rec(f->children[0], os, 3);
      close(3);
      break;
    case NodeType::Until:
      open(2);
      print_rec(f->children[0], os, 3);
      os << " U[" << f->a << "," << f->b << "] ";
      print_rec(f->children[1], os, 3);
      close(2);
      break;
  }
}

}  // namespace

std::string print_formula(const FormulaPtr& f) {
  std::ostringstream os;
  print_rec(f, os, 0);
  return os.str();
}

double Trajectory::value(const VarRef& v, int t) const {
  if (v.subsystem < 0 || v.subsystem >= static_cast<int>(x.size()))
    throw std::out_of_range("Trajectory: unknown subsystem");
  if (v.kind == SignalKind::State) {
    if (t < 0 || t >= static_cast<int>(x[v.subsystem].size()))
      throw std::out_of_range("Trajectory: state time index out of range");
    return x[v.subsystem][t][v.component];
  }
  if (t < 0 || t >= static_cast<int>(u[v.subsystem].size()))
    throw std::out_of_range("Trajectory: input time index out of range");
  return u[v.subsystem][t][v.component];
}

}  // namespace stltube::stl
