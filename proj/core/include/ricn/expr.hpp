#ifndef RICN_EXPR_HPP
#define RICN_EXPR_HPP

#include <memory>
#include <string>
#include <vector>

#include "ricn/base.hpp"

namespace ricn {

/// Second-order forward-mode jet: value, gradient and Hessian with respect
/// to the free variables of the expression being evaluated. The Hessian is
/// exactly symmetric by construction (all update rules are symmetric).
struct Jet2 {
  double value = 0.0;
  Vec grad;
  Mat hess;

  static Jet2 constant(double c, int nvars);
  static Jet2 variable(double x, int index, int nvars);
};

Jet2 operator+(const Jet2& a, const Jet2& b);
Jet2 operator-(const Jet2& a, const Jet2& b);
Jet2 operator-(const Jet2& a);
Jet2 operator*(const Jet2& a, const Jet2& b);
Jet2 operator*(double c, const Jet2& a);

namespace detail {
struct ExprNode;
}

/// A parsed scalar formula over named coordinates.
///
/// Grammar (operator precedence high to low: `^`, unary minus, `* /`, `+ -`;
/// `^` is right-associative):
///
///   expr    := term (('+' | '-') term)*
///   term    := unary (('*' | '/') unary)*
///   unary   := ('-' | '+') unary | power
///   power   := primary ('^' unary)?
///   primary := NUMBER | IDENT | FUNC '(' expr ')' | '(' expr ')'
///
/// FUNC is one of sin, cos, sinh, cosh, tanh, exp, log, sqrt, arcsinh
/// (asinh accepted as an alias). Numbers may be decimal or scientific.
/// Expressions are immutable after parsing; evaluation is pure and safe to
/// call from multiple threads.
class Expression {
public:
  Expression();
  Expression(const Expression& other);
  Expression(Expression&&) noexcept;
  Expression& operator=(const Expression& other);
  Expression& operator=(Expression&&) noexcept;
  ~Expression();

  /// Parses `text` over the ordered coordinate names `variables`.
  /// Throws ParseError (with position) on malformed input, unknown
  /// identifiers, or wrong function arity.
  static Expression parse(const std::string& text,
                          const std::vector<std::string>& variables);

  /// Wraps a fixed value as a zero-variable-dependence expression.
  static Expression constant(double value,
                             const std::vector<std::string>& variables);

  const std::vector<std::string>& variables() const { return variables_; }

  /// Plain value at `point` (size = number of variables). Domain violations
  /// (log of a nonpositive value, division by zero, ...) throw DomainError
  /// naming the offending sub-expression; results are never silently
  /// non-finite.
  double value(const Vec& point) const;

  /// Value, gradient and Hessian at `point` by forward-mode AD. Exact up to
  /// floating-point rounding.
  Jet2 jet(const Vec& point) const;

  /// Fully parenthesized rendering that re-parses to an expression with
  /// identical evaluation.
  std::string to_string() const;

  bool valid() const { return root_ != nullptr; }

private:
  std::unique_ptr<detail::ExprNode> root_;
  std::vector<std::string> variables_;
};

/// Convenience wrapper matching the library-wide naming.
Expression parse(const std::string& text,
                 const std::vector<std::string>& variables);

} // namespace ricn

#endif
