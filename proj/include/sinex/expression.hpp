#pragma once

// Arithmetic expressions over {literals, identifiers, unary minus, +, -, *}.
// This is the full flow grammar the SX subset needs: no division, no powers,
// no transcendentals. Squares are written as self-multiplication so the text
// survives the SpaceEx parser unchanged.

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "sinex/errors.hpp"

namespace sinex {

enum class ExprKind { literal, identifier, negate, add, subtract, multiply };

class Expr;
using ExprPtr = std::shared_ptr<const Expr>;

class Expr {
 public:
  ExprKind kind;
  double value = 0.0;  // literal only
  std::string text;    // literal: exact decimal source text; identifier: name
  ExprPtr lhs;         // negate uses lhs only
  ExprPtr rhs;
};

// Node factories. Literals keep their exact decimal spelling so that
// re-serialization is byte-identical.
ExprPtr lit(double value);
ExprPtr lit(std::string text);
ExprPtr ident(std::string name);
ExprPtr neg(ExprPtr e);
ExprPtr add(ExprPtr a, ExprPtr b);
ExprPtr sub(ExprPtr a, ExprPtr b);
ExprPtr mul(ExprPtr a, ExprPtr b);

bool expr_equal(const ExprPtr& a, const ExprPtr& b);

/// Canonical text form: `*` binds tight and prints without spaces, `+`/`-`
/// print with spaces, parentheses only where the tree shape demands them.
/// parse_expr(render_expr(e)) reproduces e exactly.
std::string render_expr(const ExprPtr& e);

/// Recursive-descent parser for the same grammar.
/// Throws InvalidArgument on any token or structure outside the subset.
ExprPtr parse_expr(std::string_view src);

/// Direct recursive evaluation. Throws UnboundSymbolError for identifiers
/// missing from the environment.
double eval_expr(const ExprPtr& e, const std::map<std::string, double>& env);

/// Every identifier occurring in the expression, in first-appearance order.
std::vector<std::string> collect_identifiers(const ExprPtr& e);

/// Result of affine normalization: e == c0 + coeffs . statevars.
struct AffineForm {
  double c0 = 0.0;
  std::vector<double> coeffs;
};

/// Rewrites an expression as an affine function of the given state variables
/// after substituting the constants. Throws NonAffineError when two
/// state-dependent factors are multiplied, UnboundSymbolError for unknown
/// identifiers. Symbols listed in statevars shadow same-named constants.
AffineForm affine_normal_form(const ExprPtr& e, const std::map<std::string, double>& constants,
                              const std::vector<std::string>& statevars);

}  // namespace sinex
