#pragma once

/*!
 * \file expr.hpp
 *
 * \brief Scalar integrand expressions in x, y, z.
 *
 * Grammar (whitespace is ignored):
 * \code
 *   expr    := term (('+' | '-') term)*
 *   term    := unary (('*' | '/') unary)*
 *   unary   := '-' unary | power
 *   power   := primary ('^' power)?        exponent must be an integer literal
 *   primary := number | 'x' | 'y' | 'z' | func '(' expr ')' | '(' expr ')'
 *   func    := 'sqrt' | 'exp' | 'sin' | 'cos' | 'log'
 * \endcode
 */

#include "ratquad/errors.hpp"

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

namespace ratquad
{
/// Syntax error with the byte offset where parsing failed.
class ParseError : public ValidationError
{
public:
  ParseError(const std::string& message, std::size_t offset);
  std::size_t offset() const { return m_offset; }

private:
  std::size_t m_offset;
};

/// Domain error during evaluation (division by zero, sqrt of a negative, log of a nonpositive).
class EvalError : public NumericError
{
public:
  using NumericError::NumericError;
};

enum class ExprKind
{
  literal,
  variable,
  negate,
  add,
  subtract,
  multiply,
  divide,
  power,
  call
};

enum class ExprFunction
{
  sqrt,
  exp,
  sin,
  cos,
  log
};

struct ExprNode
{
  ExprKind kind = ExprKind::literal;
  double value = 0.0;                        // literal
  int variable = 0;                          // 0, 1, 2 for x, y, z
  int exponent = 0;                          // power
  ExprFunction function = ExprFunction::sqrt;  // call
  std::shared_ptr<const ExprNode> lhs;       // operand of unary nodes and calls
  std::shared_ptr<const ExprNode> rhs;
};

/// Immutable expression tree; copies share structure.
class Expr
{
public:
  explicit Expr(std::shared_ptr<const ExprNode> root);
  const ExprNode& root() const { return *m_root; }

private:
  std::shared_ptr<const ExprNode> m_root;
};

/// Throws ParseError on syntax errors and unknown identifiers.
Expr parse(std::string_view text);

/// Throws EvalError on domain errors, naming the failing subexpression and the point.
double eval(const Expr& e, double x, double y, double z);

/// Fully parenthesized text that parses back to the same tree.
std::string print(const Expr& e);

/// Total degree when the expression is a polynomial in x, y, z; empty otherwise.
/// Division is allowed by nonzero variable-free subexpressions.
std::optional<int> polynomial_degree(const Expr& e);

bool structurally_equal(const Expr& a, const Expr& b);

}  // namespace ratquad
