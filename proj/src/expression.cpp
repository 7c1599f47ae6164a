#include "sinex/expression.hpp"

#include <algorithm>
#include <cctype>
#include <utility>

#include "sinex/numfmt.hpp"

namespace sinex {

namespace {

ExprPtr make(ExprKind kind, double value, std::string text, ExprPtr lhs, ExprPtr rhs) {
  auto e = std::make_shared<Expr>();
  e->kind = kind;
  e->value = value;
  e->text = std::move(text);
  e->lhs = std::move(lhs);
  e->rhs = std::move(rhs);
  return e;
}

}  // namespace

ExprPtr lit(double value) {
  return make(ExprKind::literal, value, format_double(value), nullptr, nullptr);
}

ExprPtr lit(std::string text) {
  auto v = parse_double(text);
  if (!v) throw InvalidArgument("not a numeric literal: '" + text + "'");
  return make(ExprKind::literal, *v, std::move(text), nullptr, nullptr);
}

ExprPtr ident(std::string name) {
  if (!is_identifier(name)) throw InvalidArgument("not an identifier: '" + name + "'");
  return make(ExprKind::identifier, 0.0, std::move(name), nullptr, nullptr);
}

ExprPtr neg(ExprPtr e) { return make(ExprKind::negate, 0.0, {}, std::move(e), nullptr); }
ExprPtr add(ExprPtr a, ExprPtr b) {
  return make(ExprKind::add, 0.0, {}, std::move(a), std::move(b));
}
ExprPtr sub(ExprPtr a, ExprPtr b) {
  return make(ExprKind::subtract, 0.0, {}, std::move(a), std::move(b));
}
ExprPtr mul(ExprPtr a, ExprPtr b) {
  return make(ExprKind::multiply, 0.0, {}, std::move(a), std::move(b));
}

bool expr_equal(const ExprPtr& a, const ExprPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case ExprKind::literal:
      return a->text == b->text && a->value == b->value;
    case ExprKind::identifier:
      return a->text == b->text;
    case ExprKind::negate:
      return expr_equal(a->lhs, b->lhs);
    case ExprKind::add:
    case ExprKind::subtract:
    case ExprKind::multiply:
      return expr_equal(a->lhs, b->lhs) && expr_equal(a->rhs, b->rhs);
  }
  return false;
}

namespace {

// Precedence: additive 1, multiplicative 2, unary minus 3, atoms 4.
int precedence(const Expr& e) {
  switch (e.kind) {
    case ExprKind::add:
    case ExprKind::subtract:
      return 1;
    case ExprKind::multiply:
      return 2;
    case ExprKind::negate:
      return 3;
    default:
      return 4;
  }
}

void render(const ExprPtr& e, std::string& out);

// Right operands need parentheses at equal precedence to preserve tree shape
// (left-associative grammar); left operands only below it.
void render_child(const ExprPtr& child, int parent_prec, bool is_right, std::string& out) {
  const int p = precedence(*child);
  const bool parens = is_right ? p <= parent_prec : p < parent_prec;
  if (parens) out.push_back('(');
  render(child, out);
  if (parens) out.push_back(')');
}

void render(const ExprPtr& e, std::string& out) {
  switch (e->kind) {
    case ExprKind::literal:
    case ExprKind::identifier:
      out += e->text;
      return;
    case ExprKind::negate:
      out.push_back('-');
      render_child(e->lhs, precedence(*e), true, out);
      return;
    case ExprKind::add:
      render_child(e->lhs, 1, false, out);
      out += " + ";
      render_child(e->rhs, 1, true, out);
      return;
    case ExprKind::subtract:
      render_child(e->lhs, 1, false, out);
      out += " - ";
      render_child(e->rhs, 1, true, out);
      return;
    case ExprKind::multiply:
      render_child(e->lhs, 2, false, out);
      out.push_back('*');
      render_child(e->rhs, 2, true, out);
      return;
  }
}

}  // namespace

std::string render_expr(const ExprPtr& e) {
  if (!e) throw InvalidArgument("cannot render a null expression");
  std::string out;
  render(e, out);
  return out;
}

namespace {

struct Parser {
  std::string_view src;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) ++pos;
  }
  bool eof() {
    skip_ws();
    return pos >= src.size();
  }
  char peek() {
    skip_ws();
    return pos < src.size() ? src[pos] : '\0';
  }
  bool consume(char c) {
    if (peek() == c) {
      ++pos;
      return true;
    }
    return false;
  }
  [[noreturn]] void fail(const std::string& what) {
    throw InvalidArgument("expression parse error at offset " + std::to_string(pos) + ": " + what +
                          " in '" + std::string(src) + "'");
  }

  ExprPtr expression() {
    ExprPtr e = term();
    for (;;) {
      if (consume('+'))
        e = add(e, term());
      else if (consume('-'))
        e = sub(e, term());
      else
        return e;
    }
  }

  ExprPtr term() {
    ExprPtr e = factor();
    while (consume('*')) e = mul(e, factor());
    return e;
  }

  ExprPtr factor() {
    if (consume('-')) return neg(factor());
    if (consume('(')) {
      ExprPtr e = expression();
      if (!consume(')')) fail("expected ')'");
      return e;
    }
    const char c = peek();
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    fail("expected a literal, identifier, or '('");
  }

  ExprPtr number() {
    skip_ws();
    const std::size_t start = pos;
    while (pos < src.size() && (std::isdigit(static_cast<unsigned char>(src[pos])) || src[pos] == '.'))
      ++pos;
    if (pos < src.size() && (src[pos] == 'e' || src[pos] == 'E')) {
      std::size_t exp = pos + 1;
      if (exp < src.size() && (src[exp] == '+' || src[exp] == '-')) ++exp;
      if (exp < src.size() && std::isdigit(static_cast<unsigned char>(src[exp]))) {
        pos = exp;
        while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) ++pos;
      }
    }
    std::string text(src.substr(start, pos - start));
    auto v = parse_double(text);
    if (!v) fail("bad numeric literal '" + text + "'");
    return lit(std::move(text));
  }

  ExprPtr identifier() {
    skip_ws();
    const std::size_t start = pos;
    while (pos < src.size() && (std::isalnum(static_cast<unsigned char>(src[pos])) || src[pos] == '_'))
      ++pos;
    return ident(std::string(src.substr(start, pos - start)));
  }
};

}  // namespace

ExprPtr parse_expr(std::string_view src) {
  Parser p{src};
  ExprPtr e = p.expression();
  if (!p.eof()) p.fail("trailing input");
  return e;
}

double eval_expr(const ExprPtr& e, const std::map<std::string, double>& env) {
  switch (e->kind) {
    case ExprKind::literal:
      return e->value;
    case ExprKind::identifier: {
      auto it = env.find(e->text);
      if (it == env.end()) throw UnboundSymbolError("unbound symbol '" + e->text + "'");
      return it->second;
    }
    case ExprKind::negate:
      return -eval_expr(e->lhs, env);
    case ExprKind::add:
      return eval_expr(e->lhs, env) + eval_expr(e->rhs, env);
    case ExprKind::subtract:
      return eval_expr(e->lhs, env) - eval_expr(e->rhs, env);
    case ExprKind::multiply:
      return eval_expr(e->lhs, env) * eval_expr(e->rhs, env);
  }
  throw InvalidArgument("corrupt expression node");
}

namespace {

void collect(const ExprPtr& e, std::vector<std::string>& out) {
  if (!e) return;
  if (e->kind == ExprKind::identifier) {
    if (std::find(out.begin(), out.end(), e->text) == out.end()) out.push_back(e->text);
    return;
  }
  collect(e->lhs, out);
  collect(e->rhs, out);
}

bool has_state_dependence(const AffineForm& f) {
  return std::any_of(f.coeffs.begin(), f.coeffs.end(), [](double c) { return c != 0.0; });
}

AffineForm normalize(const ExprPtr& e, const std::map<std::string, double>& constants,
                     const std::vector<std::string>& statevars) {
  const std::size_t n = statevars.size();
  AffineForm f;
  f.coeffs.assign(n, 0.0);
  switch (e->kind) {
    case ExprKind::literal:
      f.c0 = e->value;
      return f;
    case ExprKind::identifier: {
      auto sv = std::find(statevars.begin(), statevars.end(), e->text);
      if (sv != statevars.end()) {
        f.coeffs[static_cast<std::size_t>(sv - statevars.begin())] = 1.0;
        return f;
      }
      auto it = constants.find(e->text);
      if (it == constants.end()) throw UnboundSymbolError("unbound symbol '" + e->text + "'");
      f.c0 = it->second;
      return f;
    }
    case ExprKind::negate: {
      AffineForm a = normalize(e->lhs, constants, statevars);
      a.c0 = -a.c0;
      for (double& c : a.coeffs) c = -c;
      return a;
    }
    case ExprKind::add:
    case ExprKind::subtract: {
      AffineForm a = normalize(e->lhs, constants, statevars);
      AffineForm b = normalize(e->rhs, constants, statevars);
      const double sign = e->kind == ExprKind::add ? 1.0 : -1.0;
      a.c0 += sign * b.c0;
      for (std::size_t i = 0; i < n; ++i) a.coeffs[i] += sign * b.coeffs[i];
      return a;
    }
    case ExprKind::multiply: {
      AffineForm a = normalize(e->lhs, constants, statevars);
      AffineForm b = normalize(e->rhs, constants, statevars);
      const bool a_state = has_state_dependence(a);
      const bool b_state = has_state_dependence(b);
      if (a_state && b_state)
        throw NonAffineError("product of two state-dependent subexpressions: '" +
                             render_expr(e) + "'");
      if (b_state) std::swap(a, b);  // a carries the state terms, b is constant
      a.c0 *= b.c0;
      for (double& c : a.coeffs) c *= b.c0;
      return a;
    }
  }
  throw InvalidArgument("corrupt expression node");
}

}  // namespace

std::vector<std::string> collect_identifiers(const ExprPtr& e) {
  std::vector<std::string> out;
  collect(e, out);
  return out;
}

AffineForm affine_normal_form(const ExprPtr& e, const std::map<std::string, double>& constants,
                              const std::vector<std::string>& statevars) {
  if (!e) throw InvalidArgument("cannot normalize a null expression");
  return normalize(e, constants, statevars);
}

}  // namespace sinex
