#pragma once

// Random expression text generator with a straightforward reference
// evaluator, used for differential testing of the parser and evaluator.

#include <charconv>
#include <cmath>
#include <memory>
#include <optional>
#include <random>
#include <string>

namespace exproracle
{
struct Node
{
  char op = 'n';  // n literal, v variable, ~ negate, + - * / ^ binary, f call
  double value = 0.0;
  int variable = 0;
  int exponent = 0;
  std::string function;
  std::unique_ptr<Node> a;
  std::unique_ptr<Node> b;
};

inline std::string literal_text(double v)
{
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline std::unique_ptr<Node> random_tree(std::mt19937_64& rng, int depth)
{
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 9);
  std::uniform_real_distribution<double> lit(0.0, 4.0);
  auto n = std::make_unique<Node>();
  switch(pick(rng))
  {
  case 0:
    n->op = 'n';
    n->value = std::round(lit(rng) * 1000.0) / 1000.0;
    break;
  case 1:
    n->op = 'v';
    n->variable = std::uniform_int_distribution<int>(0, 2)(rng);
    break;
  case 2:
    n->op = '~';
    n->a = random_tree(rng, depth - 1);
    break;
  case 3:
  case 4:
  case 5:
  case 6:
  {
    const char ops[] = {'+', '-', '*', '/'};
    n->op = ops[std::uniform_int_distribution<int>(0, 3)(rng)];
    n->a = random_tree(rng, depth - 1);
    n->b = random_tree(rng, depth - 1);
    break;
  }
  case 7:
    n->op = '^';
    n->exponent = std::uniform_int_distribution<int>(0, 4)(rng);
    n->a = random_tree(rng, depth - 1);
    break;
  default:
  {
    const char* names[] = {"sqrt", "exp", "sin", "cos", "log"};
    n->op = 'f';
    n->function = names[std::uniform_int_distribution<int>(0, 4)(rng)];
    n->a = random_tree(rng, depth - 1);
    break;
  }
  }
  return n;
}

inline std::string text(const Node& n)
{
  switch(n.op)
  {
  case 'n':
    return literal_text(n.value);
  case 'v':
    return std::string(1, "xyz"[n.variable]);
  case '~':
    return "-(" + text(*n.a) + ")";
  case '^':
    return "(" + text(*n.a) + ")^" + std::to_string(n.exponent);
  case 'f':
    return n.function + "(" + text(*n.a) + ")";
  default:
    return "(" + text(*n.a) + ") " + std::string(1, n.op) + " (" + text(*n.b) + ")";
  }
}

/// Reference value, or empty when the expression hits a domain error.
inline std::optional<double> eval(const Node& n, const double* v)
{
  switch(n.op)
  {
  case 'n':
    return n.value;
  case 'v':
    return v[n.variable];
  case '~':
  {
    const auto a = eval(*n.a, v);
    return a ? std::optional<double>(-*a) : std::nullopt;
  }
  case '^':
  {
    const auto a = eval(*n.a, v);
    return a ? std::optional<double>(std::pow(*a, static_cast<double>(n.exponent))) : std::nullopt;
  }
  case 'f':
  {
    const auto a = eval(*n.a, v);
    if(!a)
    {
      return std::nullopt;
    }
    if(n.function == "sqrt")
    {
      return *a < 0.0 ? std::nullopt : std::optional<double>(std::sqrt(*a));
    }
    if(n.function == "exp")
    {
      return std::exp(*a);
    }
    if(n.function == "sin")
    {
      return std::sin(*a);
    }
    if(n.function == "cos")
    {
      return std::cos(*a);
    }
    return *a > 0.0 ? std::optional<double>(std::log(*a)) : std::nullopt;
  }
  default:
  {
    const auto a = eval(*n.a, v);
    if(!a)
    {
      return std::nullopt;
    }
    const auto b = eval(*n.b, v);
    if(!b)
    {
      return std::nullopt;
    }
    switch(n.op)
    {
    case '+':
      return *a + *b;
    case '-':
      return *a - *b;
    case '*':
      return *a * *b;
    default:
      return *b == 0.0 ? std::nullopt : std::optional<double>(*a / *b);
    }
  }
  }
}

/// Bitwise equality that also treats any two NaNs as equal.
inline bool same_double(double a, double b)
{
  if(std::isnan(a) || std::isnan(b))
  {
    return std::isnan(a) && std::isnan(b);
  }
  return a == b && std::signbit(a) == std::signbit(b);
}

}  // namespace exproracle
