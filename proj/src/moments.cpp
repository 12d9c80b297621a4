#include "ratquad/moments.hpp"

#include "ratquad/io.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

namespace ratquad
{
namespace
{
constexpr double solid_agreement = 1e-11;
constexpr int solid_max_order = 64;

template <typename Rule>
std::vector<double> integrate_monomials(const Rule& rule, std::span<const Monomial> exponents, int dimension)
{
  std::vector<double> acc(exponents.size(), 0.0);
  std::vector<double> values(exponents.size());
  for(std::size_t l = 0; l < rule.size(); ++l)
  {
    eval_monomials(exponents, std::span<const double>(rule.points[l].data(), static_cast<std::size_t>(dimension)), values);
    for(std::size_t j = 0; j < values.size(); ++j)
    {
      acc[j] += rule.weights[l] * values[j];
    }
  }
  return acc;
}

}  // namespace

std::vector<Monomial> graded_monomials(int dimension, int p)
{
  if(dimension != 2 && dimension != 3)
  {
    throw ValidationError("moments need dimension 2 or 3");
  }
  if(p < 0)
  {
    throw ValidationError("moment degree must be nonnegative");
  }
  std::vector<Monomial> out;
  for(int d = 0; d <= p; ++d)
  {
    for(int a = d; a >= 0; --a)
    {
      if(dimension == 2)
      {
        out.push_back({a, d - a, 0});
        continue;
      }
      for(int b = d - a; b >= 0; --b)
      {
        out.push_back({a, b, d - a - b});
      }
    }
  }
  return out;
}

double MomentVector::at(int a, int b, int c) const
{
  const Monomial key{a, b, c};
  for(std::size_t j = 0; j < exponents.size(); ++j)
  {
    if(exponents[j] == key)
    {
      return values[j];
    }
  }
  throw ValidationError("moment x^" + std::to_string(a) + " y^" + std::to_string(b) + " z^" + std::to_string(c) +
                        " not present");
}

void eval_monomials(std::span<const Monomial> exponents, std::span<const double> point, std::span<double> out)
{
  int top = 0;
  for(const auto& e : exponents)
  {
    top = std::max({top, e.a, e.b, e.c});
  }
  // powers[axis][k] = coordinate^k
  std::vector<double> powers(3 * static_cast<std::size_t>(top + 1), 1.0);
  for(std::size_t axis = 0; axis < point.size() && axis < 3; ++axis)
  {
    double* row = powers.data() + axis * static_cast<std::size_t>(top + 1);
    for(int k = 1; k <= top; ++k)
    {
      row[k] = row[k - 1] * point[axis];
    }
  }
  const auto stride = static_cast<std::size_t>(top + 1);
  for(std::size_t j = 0; j < exponents.size(); ++j)
  {
    const auto& e = exponents[j];
    out[j] = powers[static_cast<std::size_t>(e.a)] * powers[stride + static_cast<std::size_t>(e.b)] *
      powers[2 * stride + static_cast<std::size_t>(e.c)];
  }
}

MomentVector geometric_moments(const PlanarRegion& region, int p)
{
  MomentVector m;
  m.dimension = 2;
  m.max_degree = p;
  m.exponents = graded_monomials(2, p);
  m.values = integrate_monomials(spectral_pe_rule(region, p), m.exponents, 2);
  return m;
}

MomentVector geometric_moments(const SolidModel& solid, int p, Diagnostics* diag)
{
  MomentVector m;
  m.dimension = 3;
  m.max_degree = p;
  m.exponents = graded_monomials(3, p);

  int order = (p + 2) / 2 + 4;
  auto previous = integrate_monomials(volume_rule(solid, order, order, order, std::nullopt, diag), m.exponents, 3);
  while(true)
  {
    if(order >= solid_max_order)
    {
      throw NumericError("solid moments did not settle by order " + std::to_string(order));
    }
    order = std::min(2 * order, solid_max_order);
    auto current = integrate_monomials(volume_rule(solid, order, order, order), m.exponents, 3);
    double scale = 0.0;
    double change = 0.0;
    for(std::size_t j = 0; j < current.size(); ++j)
    {
      scale = std::max(scale, std::abs(current[j]));
      change = std::max(change, std::abs(current[j] - previous[j]));
    }
    previous = std::move(current);
    if(change <= solid_agreement * scale)
    {
      break;
    }
  }
  m.values = std::move(previous);
  return m;
}

MomentFit moment_fit_weights(std::span<const double> points, const MomentVector& moments)
{
  const auto dim = static_cast<std::size_t>(moments.dimension);
  if(points.size() % dim != 0)
  {
    throw ValidationError("point data does not match the moment dimension");
  }
  const std::size_t n = points.size() / dim;
  const std::size_t rows = moments.size();
  if(n < rows)
  {
    throw ValidationError("moment fitting needs at least " + std::to_string(rows) + " points, got " + std::to_string(n));
  }
  for(double c : points)
  {
    if(!std::isfinite(c))
    {
      throw ValidationError("moment fitting point is not finite");
    }
  }

  Eigen::MatrixXd vander(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(n));
  std::vector<double> column(rows);
  for(std::size_t l = 0; l < n; ++l)
  {
    eval_monomials(moments.exponents, points.subspan(l * dim, dim), column);
    for(std::size_t j = 0; j < rows; ++j)
    {
      vander(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(l)) = column[j];
    }
  }
  const Eigen::Map<const Eigen::VectorXd> rhs(moments.values.data(), static_cast<Eigen::Index>(rows));

  Eigen::VectorXd scale(static_cast<Eigen::Index>(rows));
  for(Eigen::Index j = 0; j < vander.rows(); ++j)
  {
    const double s = vander.row(j).cwiseAbs().maxCoeff();
    scale[j] = s > 0.0 ? 1.0 / s : 1.0;
  }
  const Eigen::MatrixXd scaled = scale.asDiagonal() * vander;
  const Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(scaled);
  Eigen::VectorXd w = cod.solve(scale.asDiagonal() * rhs);
  w += cod.solve(scale.asDiagonal() * (rhs - vander * w));

  MomentFit fit;
  fit.weights.assign(w.data(), w.data() + w.size());
  fit.residual = (vander * w - rhs).norm();
  fit.rank = static_cast<int>(cod.rank());
  if(fit.rank < static_cast<int>(rows) && fit.residual > 1e-8 * rhs.norm())
  {
    char text[64];
    std::snprintf(text, sizeof text, "%.3e (rank %d of %zu)", fit.residual, fit.rank, rows);
    throw NumericError(std::string("moment system is rank deficient; residual ") + text);
  }
  return fit;
}

MomentFit moment_fit_weights(std::span<const Vec2> points, const MomentVector& moments)
{
  if(moments.dimension != 2)
  {
    throw ValidationError("planar points need a planar moment vector");
  }
  std::vector<double> flat;
  flat.reserve(points.size() * 2);
  for(const auto& p : points)
  {
    flat.push_back(p.x());
    flat.push_back(p.y());
  }
  return moment_fit_weights(std::span<const double>(flat), moments);
}

MomentFit moment_fit_weights(std::span<const Vec3> points, const MomentVector& moments)
{
  if(moments.dimension != 3)
  {
    throw ValidationError("spatial points need a spatial moment vector");
  }
  std::vector<double> flat;
  flat.reserve(points.size() * 3);
  for(const auto& p : points)
  {
    flat.insert(flat.end(), {p.x(), p.y(), p.z()});
  }
  return moment_fit_weights(std::span<const double>(flat), moments);
}

void write_moments_csv(std::ostream& out, const MomentVector& moments)
{
  out << (moments.dimension == 3 ? "a,b,c,value\n" : "a,b,value\n");
  for(std::size_t j = 0; j < moments.size(); ++j)
  {
    const auto& e = moments.exponents[j];
    out << e.a << ',' << e.b << ',';
    if(moments.dimension == 3)
    {
      out << e.c << ',';
    }
    out << format_number(moments.values[j]) << '\n';
  }
}

}  // namespace ratquad
