#include "ratquad/expr.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <utility>

namespace ratquad
{
namespace
{
using NodePtr = std::shared_ptr<const ExprNode>;

constexpr std::array<std::pair<std::string_view, ExprFunction>, 5> functions{{{"sqrt", ExprFunction::sqrt},
                                                                              {"exp", ExprFunction::exp},
                                                                              {"sin", ExprFunction::sin},
                                                                              {"cos", ExprFunction::cos},
                                                                              {"log", ExprFunction::log}}};

std::string_view function_name(ExprFunction f)
{
  for(const auto& [name, fn] : functions)
  {
    if(fn == f)
    {
      return name;
    }
  }
  return "?";
}

NodePtr make_binary(ExprKind kind, NodePtr lhs, NodePtr rhs)
{
  auto n = std::make_shared<ExprNode>();
  n->kind = kind;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return n;
}

class Parser
{
public:
  explicit Parser(std::string_view text)
    : m_text(text)
  { }

  NodePtr parse_all()
  {
    NodePtr e = parse_expr();
    skip_space();
    if(m_pos != m_text.size())
    {
      fail("unexpected '" + std::string(1, m_text[m_pos]) + "'");
    }
    return e;
  }

private:
  [[noreturn]] void fail(const std::string& message) const
  {
    throw ParseError(message + " at offset " + std::to_string(m_pos), m_pos);
  }

  void skip_space()
  {
    while(m_pos < m_text.size() && (m_text[m_pos] == ' ' || m_text[m_pos] == '\t' || m_text[m_pos] == '\n' || m_text[m_pos] == '\r'))
    {
      ++m_pos;
    }
  }

  bool accept(char c)
  {
    skip_space();
    if(m_pos < m_text.size() && m_text[m_pos] == c)
    {
      ++m_pos;
      return true;
    }
    return false;
  }

  NodePtr parse_expr()
  {
    NodePtr lhs = parse_term();
    while(true)
    {
      if(accept('+'))
      {
        lhs = make_binary(ExprKind::add, lhs, parse_term());
      }
      else if(accept('-'))
      {
        lhs = make_binary(ExprKind::subtract, lhs, parse_term());
      }
      else
      {
        return lhs;
      }
    }
  }

  NodePtr parse_term()
  {
    NodePtr lhs = parse_unary();
    while(true)
    {
      if(accept('*'))
      {
        lhs = make_binary(ExprKind::multiply, lhs, parse_unary());
      }
      else if(accept('/'))
      {
        lhs = make_binary(ExprKind::divide, lhs, parse_unary());
      }
      else
      {
        return lhs;
      }
    }
  }

  NodePtr parse_unary()
  {
    if(accept('-'))
    {
      auto n = std::make_shared<ExprNode>();
      n->kind = ExprKind::negate;
      n->lhs = parse_unary();
      return n;
    }
    return parse_power();
  }

  NodePtr parse_power()
  {
    NodePtr base = parse_primary();
    if(!accept('^'))
    {
      return base;
    }
    skip_space();
    const std::size_t at = m_pos;
    NodePtr exponent = parse_power();
    if(exponent->kind != ExprKind::literal || !m_last_literal_integer || exponent->value > 1e6)
    {
      m_pos = at;
      fail("exponent must be a nonnegative integer literal");
    }
    auto n = std::make_shared<ExprNode>();
    n->kind = ExprKind::power;
    n->exponent = static_cast<int>(exponent->value);
    n->lhs = std::move(base);
    return n;
  }

  NodePtr parse_primary()
  {
    skip_space();
    m_last_literal_integer = false;
    if(m_pos >= m_text.size())
    {
      fail("unexpected end of input");
    }
    const char c = m_text[m_pos];
    if(c == '(')
    {
      ++m_pos;
      NodePtr e = parse_expr();
      if(!accept(')'))
      {
        fail("expected ')'");
      }
      return e;
    }
    if((c >= '0' && c <= '9') || c == '.')
    {
      return parse_number();
    }
    if((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_')
    {
      const std::size_t start = m_pos;
      while(m_pos < m_text.size() && ((m_text[m_pos] >= 'a' && m_text[m_pos] <= 'z') ||
                                      (m_text[m_pos] >= 'A' && m_text[m_pos] <= 'Z') ||
                                      (m_text[m_pos] >= '0' && m_text[m_pos] <= '9') || m_text[m_pos] == '_'))
      {
        ++m_pos;
      }
      const std::string_view name = m_text.substr(start, m_pos - start);
      if(name == "x" || name == "y" || name == "z")
      {
        auto n = std::make_shared<ExprNode>();
        n->kind = ExprKind::variable;
        n->variable = name[0] - 'x';
        return n;
      }
      for(const auto& [fname, fn] : functions)
      {
        if(name == fname)
        {
          if(!accept('('))
          {
            fail("expected '(' after " + std::string(name));
          }
          auto n = std::make_shared<ExprNode>();
          n->kind = ExprKind::call;
          n->function = fn;
          n->lhs = parse_expr();
          if(!accept(')'))
          {
            fail("expected ')'");
          }
          return n;
        }
      }
      m_pos = start;
      fail("unknown identifier '" + std::string(name) + "'");
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  NodePtr parse_number()
  {
    const char* first = m_text.data() + m_pos;
    const char* last = m_text.data() + m_text.size();
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if(ec != std::errc())
    {
      fail("malformed number");
    }
    const std::string_view digits(first, static_cast<std::size_t>(ptr - first));
    m_last_literal_integer = digits.find_first_not_of("0123456789") == std::string_view::npos;
    m_pos += digits.size();
    auto n = std::make_shared<ExprNode>();
    n->kind = ExprKind::literal;
    n->value = value;
    return n;
  }

  std::string_view m_text;
  std::size_t m_pos = 0;
  bool m_last_literal_integer = false;
};

std::string format_literal(double v)
{
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void print_node(const ExprNode& n, std::string& out)
{
  switch(n.kind)
  {
  case ExprKind::literal:
    out += format_literal(n.value);
    return;
  case ExprKind::variable:
    out += static_cast<char>('x' + n.variable);
    return;
  case ExprKind::negate:
    out += "(-";
    print_node(*n.lhs, out);
    out += ')';
    return;
  case ExprKind::power:
    out += '(';
    print_node(*n.lhs, out);
    out += '^';
    out += std::to_string(n.exponent);
    out += ')';
    return;
  case ExprKind::call:
    out += function_name(n.function);
    out += '(';
    print_node(*n.lhs, out);
    out += ')';
    return;
  default:
    break;
  }
  const char op = n.kind == ExprKind::add ? '+' : n.kind == ExprKind::subtract ? '-' : n.kind == ExprKind::multiply ? '*' : '/';
  out += '(';
  print_node(*n.lhs, out);
  out += op;
  print_node(*n.rhs, out);
  out += ')';
}

[[noreturn]] void domain_error(const std::string& what, const ExprNode& node, double x, double y, double z)
{
  std::string text;
  print_node(node, text);
  char where[128];
  std::snprintf(where, sizeof where, " at (%.17g, %.17g, %.17g)", x, y, z);
  throw EvalError(what + " in " + text + where);
}

double eval_node(const ExprNode& n, double x, double y, double z)
{
  switch(n.kind)
  {
  case ExprKind::literal:
    return n.value;
  case ExprKind::variable:
    return n.variable == 0 ? x : n.variable == 1 ? y : z;
  case ExprKind::negate:
    return -eval_node(*n.lhs, x, y, z);
  case ExprKind::add:
    return eval_node(*n.lhs, x, y, z) + eval_node(*n.rhs, x, y, z);
  case ExprKind::subtract:
    return eval_node(*n.lhs, x, y, z) - eval_node(*n.rhs, x, y, z);
  case ExprKind::multiply:
    return eval_node(*n.lhs, x, y, z) * eval_node(*n.rhs, x, y, z);
  case ExprKind::divide:
  {
    const double num = eval_node(*n.lhs, x, y, z);
    const double den = eval_node(*n.rhs, x, y, z);
    if(den == 0.0)
    {
      domain_error("division by zero", n, x, y, z);
    }
    return num / den;
  }
  case ExprKind::power:
    return std::pow(eval_node(*n.lhs, x, y, z), static_cast<double>(n.exponent));
  case ExprKind::call:
  {
    const double a = eval_node(*n.lhs, x, y, z);
    switch(n.function)
    {
    case ExprFunction::sqrt:
      if(a < 0.0)
      {
        domain_error("sqrt of a negative number", n, x, y, z);
      }
      return std::sqrt(a);
    case ExprFunction::exp:
      return std::exp(a);
    case ExprFunction::sin:
      return std::sin(a);
    case ExprFunction::cos:
      return std::cos(a);
    case ExprFunction::log:
      if(!(a > 0.0))
      {
        domain_error("log of a nonpositive number", n, x, y, z);
      }
      return std::log(a);
    }
  }
  }
  return 0.0;
}

bool has_variables(const ExprNode& n)
{
  if(n.kind == ExprKind::variable)
  {
    return true;
  }
  return (n.lhs && has_variables(*n.lhs)) || (n.rhs && has_variables(*n.rhs));
}

std::optional<int> degree_of(const ExprNode& n)
{
  if(!has_variables(n))
  {
    return 0;
  }
  switch(n.kind)
  {
  case ExprKind::variable:
    return 1;
  case ExprKind::negate:
    return degree_of(*n.lhs);
  case ExprKind::add:
  case ExprKind::subtract:
  {
    const auto a = degree_of(*n.lhs);
    const auto b = degree_of(*n.rhs);
    if(!a || !b)
    {
      return std::nullopt;
    }
    return std::max(*a, *b);
  }
  case ExprKind::multiply:
  {
    const auto a = degree_of(*n.lhs);
    const auto b = degree_of(*n.rhs);
    if(!a || !b)
    {
      return std::nullopt;
    }
    return *a + *b;
  }
  case ExprKind::divide:
  {
    if(has_variables(*n.rhs))
    {
      return std::nullopt;
    }
    try
    {
      const double den = eval_node(*n.rhs, 0.0, 0.0, 0.0);
      if(den == 0.0 || !std::isfinite(den))
      {
        return std::nullopt;
      }
    }
    catch(const EvalError&)
    {
      return std::nullopt;
    }
    return degree_of(*n.lhs);
  }
  case ExprKind::power:
  {
    const auto a = degree_of(*n.lhs);
    if(!a)
    {
      return std::nullopt;
    }
    return *a * n.exponent;
  }
  default:
    return std::nullopt;
  }
}

bool equal_nodes(const ExprNode& a, const ExprNode& b)
{
  if(a.kind != b.kind)
  {
    return false;
  }
  switch(a.kind)
  {
  case ExprKind::literal:
    return a.value == b.value;
  case ExprKind::variable:
    return a.variable == b.variable;
  case ExprKind::negate:
    return equal_nodes(*a.lhs, *b.lhs);
  case ExprKind::power:
    return a.exponent == b.exponent && equal_nodes(*a.lhs, *b.lhs);
  case ExprKind::call:
    return a.function == b.function && equal_nodes(*a.lhs, *b.lhs);
  default:
    return equal_nodes(*a.lhs, *b.lhs) && equal_nodes(*a.rhs, *b.rhs);
  }
}

}  // namespace

ParseError::ParseError(const std::string& message, std::size_t offset)
  : ValidationError(message)
  , m_offset(offset)
{ }

Expr::Expr(std::shared_ptr<const ExprNode> root)
  : m_root(std::move(root))
{
  if(!m_root)
  {
    throw ValidationError("expression has no root");
  }
}

Expr parse(std::string_view text) { return Expr(Parser(text).parse_all()); }

double eval(const Expr& e, double x, double y, double z) { return eval_node(e.root(), x, y, z); }

std::string print(const Expr& e)
{
  std::string out;
  print_node(e.root(), out);
  return out;
}

std::optional<int> polynomial_degree(const Expr& e) { return degree_of(e.root()); }

bool structurally_equal(const Expr& a, const Expr& b) { return equal_nodes(a.root(), b.root()); }

}  // namespace ratquad
