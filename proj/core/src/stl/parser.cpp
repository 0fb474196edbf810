#include <cctype>
#include <cstdlib>
#include <string>

#include "stltube/stl/formula.hpp"

namespace stltube::stl {

namespace {

class Parser {
 public:
  Parser(const std::string& text, const Signature& sig) : s_(text), sig_(sig) {}

  FormulaPtr parse() {
    auto f = parse_or();
    skip_ws();
    if (pos_ < s_.size()) fail("unexpected trailing input");
    return f;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }

  void expect(char c) {
    if (!eat(c)) fail(std::string("expected '") + c + "'");
  }

  double parse_real() {
    skip_ws();
    const char* start = s_.c_str() + pos_;
    char* end = nullptr;
    double v = std::strtod(start, &end);
    if (end == start) fail("expected a number");
    pos_ += end - start;
    return v;
  }

  int parse_int_step() {
    skip_ws();
    size_t at = pos_;
    double v = parse_real();
    if (v != std::floor(v)) throw ParseError("time step must be an integer", at);
    if (v < 0) throw ParseError("time step must be nonnegative", at);
    return static_cast<int>(v);
  }

  std::pair<int, int> parse_interval() {
    expect('[');
    size_t at = pos_;
    int a = parse_int_step();
    expect(',');
    int b = parse_int_step();
    expect(']');
    if (a > b) throw ParseError("malformed interval: lower exceeds upper", at);
    return {a, b};
  }

  VarRef parse_var() {
    skip_ws();
    size_t at = pos_;
    char k = peek();
    if (k != 'x' && k != 'u') fail("expected variable");
    ++pos_;
    VarRef v;
    v.kind = k == 'x' ? SignalKind::State : SignalKind::Input;
    v.subsystem = parse_int_step();
    expect('[');
    v.component = parse_int_step();
    expect(']');
    if (v.subsystem >= static_cast<int>(sig_.size()))
      throw ParseError("unknown subsystem index " + std::to_string(v.subsystem), at);
    int dim = v.kind == SignalKind::State ? sig_[v.subsystem].n : sig_[v.subsystem].m;
    if (v.component >= dim)
      throw ParseError("unknown component " + std::to_string(v.component) + " for subsystem " +
                           std::to_string(v.subsystem),
                       at);
    return v;
  }

  bool starts_term() {
    char c = peek();
    return c == 'x' || c == 'u' || std::isdigit(static_cast<unsigned char>(c)) || c == '.' ||
           c == '-' || c == '+';
  }

  FormulaPtr parse_atom() {
    // linexpr ('<='|'>='|'<'|'>') REAL, normalized to >= form
    std::vector<std::pair<VarRef, double>> terms;
    double sign = 1.0;
    bool first = true;
    while (true) {
      skip_ws();
      double coef = sign;
      char c = peek();
      if (c == '-' || c == '+' || std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
        coef = sign * parse_real();
        if (peek() == '*') {
          expect('*');
        } else if (first && peek() != 'x' && peek() != 'u') {
          fail("a predicate needs at least one variable");
        }
      }
      terms.emplace_back(parse_var(), coef);
      first = false;
      char op = peek();
      if (op == '+') {
        expect('+');
        sign = 1.0;
        continue;
      }
      if (op == '-') {
        expect('-');
        sign = -1.0;
        continue;
      }
      break;
    }
    skip_ws();
    bool geq;
    if (eat('>')) {
      eat('=');  // strict '>' collapses to '>='
      geq = true;
    } else if (eat('<')) {
      eat('=');
      geq = false;
    } else {
      fail("expected comparison operator");
    }
    double bound = parse_real();
    Predicate p;
    if (geq) {
      p.terms = std::move(terms);
      p.bound = bound;
    } else {
      for (auto& [v, c] : terms) c = -c;
      p.terms = std::move(terms);
      p.bound = -bound;
    }
    return Formula::make_pred(std::move(p));
  }

  FormulaPtr parse_prefix() {
    skip_ws();
    char c = peek();
    if (c == 'G' || c == 'F') {
      // lookahead: 'G'/'F' must be followed by '[' to be temporal
      size_t save = pos_;
      ++pos_;
      if (peek() == '[') {
        auto [a, b] = parse_interval();
        auto child = parse_prefix();
        return c == 'G' ? Formula::make_always(a, b, child)
                        : Formula::make_eventually(a, b, child);
      }
      pos_ = save;
      fail("expected interval after temporal operator");
    }
    if (c == '!') {
      expect('!');
      return Formula::make_not(parse_prefix());
    }
    if (c == '(') {
      expect('(');
      auto f = parse_or();
      expect(')');
      return f;
    }
    if (starts_term()) return parse_atom();
    fail("expected formula");
  }

  FormulaPtr parse_until() {
    auto lhs = parse_prefix();
    while (true) {
      skip_ws();
      if (peek() == 'U') {
        size_t save = pos_;
        ++pos_;
        if (peek() != '[') {
          pos_ = save;
          break;
        }
        auto [a, b] = parse_interval();
        auto rhs = parse_prefix();
        lhs = Formula::make_until(a, b, lhs, rhs);
        continue;
      }
      break;
    }
    return lhs;
  }

  FormulaPtr parse_and() {
    std::vector<FormulaPtr> parts{parse_until()};
    while (eat('&')) parts.push_back(parse_until());
    return parts.size() == 1 ? parts[0] : Formula::make_and(std::move(parts));
  }

  FormulaPtr parse_or() {
    std::vector<FormulaPtr> parts{parse_and()};
    while (eat('|')) parts.push_back(parse_and());
    return parts.size() == 1 ? parts[0] : Formula::make_or(std::move(parts));
  }

  const std::string& s_;
  const Signature& sig_;
  size_t pos_ = 0;
};

}  // namespace

FormulaPtr parse_formula(const std::string& text, const Signature& sig) {
  return Parser(text, sig).parse();
}

}  // namespace stltube::stl
