#include "stltube/opt/lp_file.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace stltube::opt {

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_terms(std::ostream& os, const std::vector<LinTerm>& terms) {
  if (terms.empty()) {
    os << " 0 x0";
    return;
  }
  for (const auto& t : terms) {
    os << (t.coef < 0 ? " - " : " + ") << num(std::abs(t.coef)) << " x" << t.var;
  }
}

}  // namespace

void export_lp(const OptModel& m, std::ostream& os) {
  if (!m.frozen()) throw std::logic_error("export_lp: model must be frozen");
  os << "\\ stltube model: " << m.num_vars() << " vars, " << m.num_rows() << " rows\n";
  os << (m.objective_sense() == ObjSense::Maximize ? "Maximize" : "Minimize") << "\n obj:";
  std::vector<LinTerm> obj_terms;
  for (int j = 0; j < m.num_vars(); ++j)
    if (m.objective_coefs()[j] != 0.0) obj_terms.push_back({j, m.objective_coefs()[j]});
  write_terms(os, obj_terms);
  if (m.objective_constant() != 0.0)
    os << (m.objective_constant() < 0 ? " - " : " + ") << num(std::abs(m.objective_constant()));
  os << "\nSubject To\n";
  for (int i = 0; i < m.num_rows(); ++i) {
    const auto& r = m.row(i);
    os << " c" << i << ":";
    write_terms(os, r.terms);
    switch (r.sense) {
      case RowSense::LE: os << " <= "; break;
      case RowSense::GE: os << " >= "; break;
      case RowSense::EQ: os << " = "; break;
    }
    os << num(r.rhs) << "\n";
  }
  os << "Bounds\n";
  for (int j = 0; j < m.num_vars(); ++j) {
    const auto& v = m.var(j);
    os << " ";
    if (!std::isfinite(v.lo) && !std::isfinite(v.up))
      os << "x" << j << " free";
    else if (!std::isfinite(v.lo))
      os << "x" << j << " <= " << num(v.up);
    else if (!std::isfinite(v.up))
      os << "x" << j << " >= " << num(v.lo);
    else
      os << num(v.lo) << " <= x" << j << " <= " << num(v.up);
    os << "\n";
  }
  bool any_bin = m.num_binaries() > 0;
  if (any_bin) {
    os << "Binaries\n";
    for (int j = 0; j < m.num_vars(); ++j)
      if (m.var(j).kind == VarKind::Binary) os << " x" << j << "\n";
  }
  os << "End\n";
}

void export_lp_file(const OptModel& m, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("export_lp_file: cannot open " + path);
  export_lp(m, f);
  if (!f.good()) throw std::runtime_error("export_lp_file: write failure on " + path);
}

namespace {

struct Tokenizer {
  std::vector<std::string> toks;
  size_t pos = 0;

  explicit Tokenizer(std::istream& is) {
    std::string line;
    while (std::getline(is, line)) {
      size_t c = line.find('\\');
      if (c != std::string::npos) line.resize(c);
      std::string cur;
      auto flush = [&] {
        if (!cur.empty()) {
          toks.push_back(cur);
          cur.clear();
        }
      };
      for (char ch : line) {
        if (std::isspace(static_cast<unsigned char>(ch))) {
          flush();
        } else if (ch == '<' || ch == '>' || ch == '=' || ch == '+' || ch == '-' || ch == ':') {
          // keep exponent signs inside numeric literals (e.g. 2.5e-3)
          if ((ch == '+' || ch == '-') && !cur.empty() &&
              (cur.back() == 'e' || cur.back() == 'E') &&
              (std::isdigit(static_cast<unsigned char>(cur[0])) || cur[0] == '.')) {
            cur += ch;
            continue;
          }
          // operators are their own tokens; "<=" ">=" glued below
          if ((ch == '=') && !cur.empty() && (cur == "<" || cur == ">")) {
            cur += ch;
            flush();
          } else {
            flush();
            cur += ch;
            if (ch != '<' && ch != '>') flush();
          }
        } else {
          if (cur == "<" || cur == ">") flush();
          cur += ch;
        }
      }
      if (cur == "<" || cur == ">") cur += "=";  // tolerate bare < >
      flush();
    }
  }

  bool done() const { return pos >= toks.size(); }
  const std::string& peek() const { return toks[pos]; }
  std::string next() { return toks[pos++]; }
};

bool is_number_start(const std::string& t) {
  return !t.empty() && (std::isdigit(static_cast<unsigned char>(t[0])) || t[0] == '.');
}

int var_index(const std::string& t) {
  if (t.size() < 2 || t[0] != 'x') throw std::runtime_error("import_lp: bad variable name " + t);
  return std::stoi(t.substr(1));
}

struct PendingVar {
  double lo = 0.0;  // LP-format default bounds
  double up = kInf;
  bool binary = false;
};

double parse_number(Tokenizer& tz) {
  double sign = 1.0;
  while (!tz.done() && (tz.peek() == "+" || tz.peek() == "-")) {
    if (tz.next() == "-") sign = -sign;
  }
  if (tz.done()) throw std::runtime_error("import_lp: expected number");
  std::string t = tz.next();
  if (t == "inf" || t == "infinity") return sign * kInf;
  return sign * std::stod(t);
}

// parses a linear expression, stops at a sense token or section keyword
LinExpr parse_expr(Tokenizer& tz, std::vector<PendingVar>& vars) {
  LinExpr e;
  double sign = 1.0;
  bool have_sign = false;
  while (!tz.done()) {
    const std::string& t = tz.peek();
    if (t == "+" || t == "-") {
      sign = (t == "-") ? -sign : sign;
      have_sign = true;
      tz.next();
      continue;
    }
    if (t == "<=" || t == ">=" || t == "=") break;
    if (t == "Subject" || t == "To" || t == "Bounds" || t == "Binaries" || t == "End" ||
        t == "Minimize" || t == "Maximize")
      break;
    if (is_number_start(t)) {
      double v = std::stod(tz.next());
      if (!tz.done() && tz.peek().size() > 1 && tz.peek()[0] == 'x' &&
          std::isdigit(static_cast<unsigned char>(tz.peek()[1]))) {
        int idx = var_index(tz.next());
        if (idx >= static_cast<int>(vars.size())) vars.resize(idx + 1);
        e.terms.push_back({idx, sign * v});
      } else {
        e.constant += sign * v;
      }
    } else if (t[0] == 'x') {
      int idx = var_index(tz.next());
      if (idx >= static_cast<int>(vars.size())) vars.resize(idx + 1);
      e.terms.push_back({idx, sign});
    } else {
      break;
    }
    sign = 1.0;
    have_sign = false;
  }
  (void)have_sign;
  return e;
}

}  // namespace

OptModel import_lp(std::istream& is) {
  Tokenizer tz(is);
  std::vector<PendingVar> vars;
  ObjSense sense = ObjSense::Minimize;
  LinExpr objective;
  struct Row {
    LinExpr e;
    RowSense s;
    double rhs;
  };
  std::vector<Row> rows;

  enum Section { None, Objective, Constraints, BoundsSec, BinariesSec } sec = None;
  while (!tz.done()) {
    std::string t = tz.peek();
    if (t == "Minimize" || t == "Maximize") {
      sense = (t == "Maximize") ? ObjSense::Maximize : ObjSense::Minimize;
      tz.next();
      sec = Objective;
      if (!tz.done() && tz.peek() == "obj") {
        tz.next();
        if (!tz.done() && tz.peek() == ":") tz.next();
      }
      objective = parse_expr(tz, vars);
      continue;
    }
    if (t == "Subject") {
      tz.next();
      if (!tz.done() && tz.peek() == "To") tz.next();
      sec = Constraints;
      continue;
    }
    if (t == "Bounds") {
      tz.next();
      sec = BoundsSec;
      continue;
    }
    if (t == "Binaries" || t == "Binary") {
      tz.next();
      sec = BinariesSec;
      continue;
    }
    if (t == "End") break;

    if (sec == Constraints) {
      // optional label "cN :"
      if (!t.empty() && t[0] == 'c' && t != "c") {
        tz.next();
        if (!tz.done() && tz.peek() == ":") tz.next();
      }
      LinExpr e = parse_expr(tz, vars);
      std::string op = tz.next();
      RowSense s = op == "<=" ? RowSense::LE : op == ">=" ? RowSense::GE : RowSense::EQ;
      LinExpr rhs = parse_expr(tz, vars);
      if (!rhs.terms.empty()) throw std::runtime_error("import_lp: rhs must be constant");
      rows.push_back({e, s, rhs.constant});
      continue;
    }
    if (sec == BoundsSec) {
      // forms: lo <= xN <= up | xN free | xN <= up | xN >= lo | xN = v
      if (is_number_start(t) || t == "-" || t == "+") {
        double lo = parse_number(tz);
        std::string op = tz.next();  // <=
        if (op != "<=") throw std::runtime_error("import_lp: bad bounds operator " + op);
        int idx = var_index(tz.next());
        if (idx >= static_cast<int>(vars.size())) vars.resize(idx + 1);
        vars[idx].lo = lo;
        if (!tz.done() && (tz.peek() == "<=")) {
          tz.next();
          vars[idx].up = parse_number(tz);
        }
      } else if (!t.empty() && t[0] == 'x') {
        int idx = var_index(tz.next());
        if (idx >= static_cast<int>(vars.size())) vars.resize(idx + 1);
        std::string op = tz.next();
        if (op == "free") {
          vars[idx].lo = -kInf;
          vars[idx].up = kInf;
        } else {
          double v = parse_number(tz);
          if (op == "<=")
            vars[idx].up = v;
          else if (op == ">=")
            vars[idx].lo = v;
          else {
            vars[idx].lo = vars[idx].up = v;
          }
        }
      } else {
        throw std::runtime_error("import_lp: bad bounds line near " + t);
      }
      continue;
    }
    if (sec == BinariesSec) {
      int idx = var_index(tz.next());
      if (idx >= static_cast<int>(vars.size())) vars.resize(idx + 1);
      vars[idx].binary = true;
      vars[idx].lo = std::max(vars[idx].lo, 0.0);
      vars[idx].up = std::min(vars[idx].up, 1.0);
      continue;
    }
    throw std::runtime_error("import_lp: unexpected token " + t);
  }

  OptModel m;
  for (auto& v : vars)
    m.add_var(v.lo, v.up, v.binary ? VarKind::Binary : VarKind::Continuous);
  for (auto& r : rows) m.add_row(r.e, r.s, r.rhs);
  m.set_objective(sense, objective);
  m.freeze();
  return m;
}

OptModel import_lp_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("import_lp_file: cannot open " + path);
  return import_lp(f);
}

}  // namespace stltube::opt
