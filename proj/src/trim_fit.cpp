#include "ratquad/trim_fit.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <string>

namespace ratquad
{
namespace
{
std::size_t nearest_index(std::span<const double> t, double target, std::size_t lo, std::size_t hi)
{
  auto it = std::lower_bound(t.begin() + static_cast<std::ptrdiff_t>(lo), t.begin() + static_cast<std::ptrdiff_t>(hi) + 1, target);
  auto idx = static_cast<std::size_t>(it - t.begin());
  if(idx > hi)
  {
    idx = hi;
  }
  if(idx > lo && std::abs(t[idx - 1] - target) <= std::abs(t[idx] - target))
  {
    --idx;
  }
  return idx;
}

double bernstein(int m, int j, double s)
{
  double b = 1.0;
  for(int k = 1; k <= j; ++k)
  {
    b = b * static_cast<double>(m - j + k) / static_cast<double>(k);
  }
  return b * std::pow(s, j) * std::pow(1.0 - s, m - j);
}

}  // namespace

std::vector<double> chord_parameters(std::span<const Vec2> points)
{
  std::vector<double> t(points.size(), 0.0);
  for(std::size_t k = 1; k < points.size(); ++k)
  {
    const double step = (points[k] - points[k - 1]).norm();
    if(!(step > 0.0))
    {
      throw ValidationError("trim points " + std::to_string(k - 1) + " and " + std::to_string(k) + " coincide");
    }
    t[k] = t[k - 1] + step;
  }
  return t;
}

std::vector<RationalBezierCurve> fit_trim_curves(std::span<const Vec2> points, int segments, int degree)
{
  if(segments < 1)
  {
    throw ValidationError("segment count must be positive");
  }
  if(degree < 1)
  {
    throw ValidationError("fit degree must be positive");
  }
  const auto n = points.size();
  const auto per_span = static_cast<std::size_t>(degree);
  if(n < static_cast<std::size_t>(segments) * (per_span + 1))
  {
    throw ValidationError(std::to_string(n) + " trim points cannot supply " + std::to_string(degree + 1) +
                          " points to each of " + std::to_string(segments) + " segments");
  }
  const auto t = chord_parameters(points);
  const double length = t.back();

  std::vector<std::size_t> bounds(static_cast<std::size_t>(segments) + 1);
  bounds.front() = 0;
  bounds.back() = n - 1;
  for(int k = 1; k < segments; ++k)
  {
    bounds[k] = nearest_index(t, length * k / segments, 0, n - 1);
  }
  for(int k = 0; k < segments; ++k)
  {
    if(bounds[k + 1] < bounds[k] + per_span)
    {
      throw ValidationError("trim segment " + std::to_string(k) + " holds fewer than " +
                            std::to_string(degree + 1) + " points");
    }
  }

  std::vector<RationalBezierCurve> curves;
  curves.reserve(static_cast<std::size_t>(segments));
  for(int k = 0; k < segments; ++k)
  {
    const std::size_t a = bounds[k];
    const std::size_t b = bounds[k + 1];
    const double ta = t[a];
    const double span = t[b] - ta;

    std::vector<std::size_t> picks{a};
    for(int i = 1; i < degree; ++i)
    {
      const std::size_t lo = picks.back() + 1;
      const std::size_t hi = b - static_cast<std::size_t>(degree - i);
      picks.push_back(nearest_index(t, ta + span * i / degree, lo, hi));
    }
    picks.push_back(b);

    Eigen::MatrixXd vander(degree + 1, degree + 1);
    Eigen::MatrixXd rhs(degree + 1, 2);
    for(int i = 0; i <= degree; ++i)
    {
      const double tau = (t[picks[i]] - ta) / span;
      for(int j = 0; j <= degree; ++j)
      {
        vander(i, j) = bernstein(degree, j, tau);
      }
      rhs.row(i) = points[picks[i]].transpose();
    }
    const Eigen::MatrixXd control = vander.partialPivLu().solve(rhs);

    std::vector<Vec2> cps(static_cast<std::size_t>(degree) + 1);
    for(int j = 0; j <= degree; ++j)
    {
      cps[j] = control.row(j).transpose();
    }
    cps.front() = points[a];
    cps.back() = points[b];
    curves.emplace_back(std::move(cps));
  }
  return curves;
}

ClosureReport closure_check(std::span<const RationalBezierCurve> loop, double tolerance)
{
  ClosureReport report;
  for(std::size_t k = 0; k < loop.size(); ++k)
  {
    const auto& next = loop[(k + 1) % loop.size()];
    report.max_gap = std::max(report.max_gap, (loop[k].end() - next.start()).norm());
  }
  report.closed = report.max_gap <= tolerance;
  return report;
}

}  // namespace ratquad
