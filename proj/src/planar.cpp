#include "ratquad/planar.hpp"

#include "ratquad/trim_fit.hpp"

#include <algorithm>
#include <cstdio>
#include <string>

namespace ratquad
{
PlanarRegion::PlanarRegion(std::vector<Loop> loops)
  : m_loops(std::move(loops))
{
  if(m_loops.empty())
  {
    throw ValidationError("region needs at least one loop");
  }
  for(std::size_t k = 0; k < m_loops.size(); ++k)
  {
    const auto& loop = m_loops[k];
    if(loop.empty())
    {
      throw ValidationError("loop " + std::to_string(k) + " has no curves");
    }
    const double tol = 1e-10 * control_bbox(std::span<const RationalBezierCurve>(loop)).diagonal();
    const auto report = closure_check(loop, tol);
    if(!report.closed)
    {
      char text[32];
      std::snprintf(text, sizeof text, "%.3e", report.max_gap);
      throw ValidationError("loop " + std::to_string(k) + " is open (gap " + text + ")");
    }
  }
}

std::size_t PlanarRegion::curve_count() const
{
  std::size_t n = 0;
  for(const auto& loop : m_loops)
  {
    n += loop.size();
  }
  return n;
}

PlanarRegion PlanarRegion::translated(const Vec2& offset) const
{
  auto loops = m_loops;
  for(auto& loop : loops)
  {
    for(auto& c : loop)
    {
      c = c.translated(offset);
    }
  }
  return PlanarRegion(std::move(loops));
}

PlanarRegion PlanarRegion::reversed() const
{
  std::vector<Loop> loops;
  for(const auto& loop : m_loops)
  {
    Loop rev;
    for(auto it = loop.rbegin(); it != loop.rend(); ++it)
    {
      rev.push_back(it->reversed());
    }
    loops.push_back(std::move(rev));
  }
  return PlanarRegion(std::move(loops));
}

double region_constant_C(const PlanarRegion& region)
{
  double c = std::numeric_limits<double>::infinity();
  for(const auto& loop : region.loops())
  {
    c = std::min(c, control_bbox(std::span<const RationalBezierCurve>(loop)).min.y());
  }
  return c;
}

Rule2D green_rule(std::span<const Loop> loops,
                  double constant,
                  std::span<const Rule1D> intermediate,
                  int antiderivative_points,
                  Diagnostics* diag)
{
  const Rule1D reference = gauss_legendre(antiderivative_points);

  Rule2D rule;
  int curve = 0;
  for(std::size_t k = 0; k < loops.size(); ++k)
  {
    for(std::size_t j = 0; j < loops[k].size(); ++j, ++curve)
    {
      const auto& c = loops[k][j];
      if(static_cast<std::size_t>(curve) >= intermediate.size())
      {
        throw ValidationError("missing intermediate rule for curve " + std::to_string(curve));
      }
      if(diag != nullptr && control_bbox(c).diagonal() == 0.0)
      {
        diag->warn("curve " + std::to_string(curve) + " has zero length");
      }
      const Rule1D& outer = intermediate[curve];
      for(std::size_t q = 0; q < outer.size(); ++q)
      {
        const auto sample = c.sample(outer.nodes[q]);
        const Rule1D inner = reference.mapped(constant, sample.point.y());
        for(std::size_t z = 0; z < inner.size(); ++z)
        {
          Source2D src;
          src.loop = static_cast<int>(k);
          src.segment = static_cast<int>(j);
          src.curve = curve;
          src.q = static_cast<int>(q);
          src.zeta = static_cast<int>(z);
          src.curve_weight = outer.weights[q];
          src.antiderivative_weight = inner.weights[z];
          src.jacobian = sample.tangent.x();
          rule.points.emplace_back(sample.point.x(), inner.nodes[z]);
          rule.weights.push_back(-src.curve_weight * src.antiderivative_weight * src.jacobian);
          rule.sources.push_back(src);
        }
      }
    }
  }
  return rule;
}

Rule2D spectral_rule(const PlanarRegion& region, int q_points, int p_points, Diagnostics* diag)
{
  if(q_points < 1 || p_points < 1)
  {
    throw ValidationError("spectral rule needs Q >= 1 and P >= 1");
  }
  const Rule1D gauss = gauss_legendre(q_points, 0.0, 1.0);
  const std::vector<Rule1D> intermediate(region.curve_count(), gauss);
  return green_rule(region.loops(), region_constant_C(region), intermediate, p_points, diag);
}

int pe_polynomial_points(int m, int k)
{
  const int degree = m * (k + 2) + (m - 1);
  return std::max(1, (degree + 2) / 2);
}

Rule1D pe_intermediate_rule(const RationalBezierCurve& curve, int k)
{
  const int m = curve.degree();
  if(curve.is_polynomial())
  {
    return gauss_legendre(pe_polynomial_points(m, k), 0.0, 1.0);
  }
  const auto roots = weight_poly_roots(curve.weights());
  const PoleSet poles = PoleSet::from_roots(roots).scaled(k + 3);
  const int padding = (m - static_cast<int>(roots.size())) * (k + 3);
  return rational_rule(poles, padding);
}

Rule2D spectral_pe_rule(const PlanarRegion& region, int k, Diagnostics* diag)
{
  if(k < 0)
  {
    throw ValidationError("polynomial degree k must be nonnegative");
  }
  std::vector<Rule1D> intermediate;
  int curve = 0;
  for(const auto& loop : region.loops())
  {
    for(const auto& c : loop)
    {
      try
      {
        intermediate.push_back(pe_intermediate_rule(c, k));
      }
      catch(const NumericError& e)
      {
        throw NumericError("curve " + std::to_string(curve) + ": " + e.what());
      }
      ++curve;
    }
  }
  return green_rule(region.loops(), region_constant_C(region), intermediate, (k + 2) / 2, diag);
}

void check_integrand_value(double value, std::size_t index, std::span<const double> point)
{
  std::string where;
  for(double c : point)
  {
    char text[32];
    std::snprintf(text, sizeof text, "%.17g", c);
    where += where.empty() ? "" : ", ";
    where += text;
  }
  char text[32];
  std::snprintf(text, sizeof text, "%g", value);
  throw NumericError("integrand is " + std::string(text) + " at node " + std::to_string(index) + " (" + where + ")");
}

}  // namespace ratquad
