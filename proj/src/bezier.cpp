#include "ratquad/bezier.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ratquad
{
namespace
{
template <int D>
using HVec = Eigen::Matrix<double, D, 1>;

template <int D>
struct HomogeneousSample
{
  HVec<D> value;
  HVec<D> derivative;
};

// de Casteljau on homogeneous control points; the derivative is
// m * (b^{m-1}_1 - b^{m-1}_0) from the second to last level.
template <int D>
HomogeneousSample<D> de_casteljau(std::vector<HVec<D>> work, double s)
{
  const int m = static_cast<int>(work.size()) - 1;
  if(m == 0)
  {
    return {work[0], HVec<D>::Zero()};
  }
  const double t = 1.0 - s;
  for(int level = m; level > 1; --level)
  {
    for(int k = 0; k < level; ++k)
    {
      work[k] = t * work[k] + s * work[k + 1];
    }
  }
  HomogeneousSample<D> out;
  out.derivative = static_cast<double>(m) * (work[1] - work[0]);
  out.value = t * work[0] + s * work[1];
  return out;
}

void check_parameter(double s, Extrapolate mode)
{
  if(mode == Extrapolate::no && !(s >= 0.0 && s <= 1.0))
  {
    throw ValidationError("curve parameter " + std::to_string(s) + " outside [0,1]");
  }
}

void check_weights(std::span<const double> weights)
{
  for(std::size_t j = 0; j < weights.size(); ++j)
  {
    if(!(weights[j] > 0.0) || !std::isfinite(weights[j]))
    {
      throw ValidationError("weight " + std::to_string(j) + " must be positive and finite, got " +
                            std::to_string(weights[j]));
    }
  }
}

double binomial(int n, int k)
{
  if(k < 0 || k > n)
  {
    return 0.0;
  }
  k = std::min(k, n - k);
  double r = 1.0;
  for(int i = 1; i <= k; ++i)
  {
    r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  }
  return std::round(r);
}

void warn_degree(std::size_t size, Diagnostics* diag)
{
  if(diag != nullptr && size > 21)
  {
    diag->warn("basis conversion at degree " + std::to_string(size - 1) +
               " loses roughly half as many digits as the degree");
  }
}

}  // namespace

// -- RationalBezierCurve ------------------------------------------------------

RationalBezierCurve::RationalBezierCurve(std::vector<Vec2> points, std::vector<double> weights)
  : m_points(std::move(points))
  , m_weights(std::move(weights))
{
  if(m_points.empty())
  {
    throw ValidationError("curve needs at least one control point");
  }
  if(m_points.size() != m_weights.size())
  {
    throw ValidationError("curve has " + std::to_string(m_points.size()) + " points but " +
                          std::to_string(m_weights.size()) + " weights");
  }
  for(const auto& p : m_points)
  {
    if(!p.allFinite())
    {
      throw ValidationError("curve control point is not finite");
    }
  }
  check_weights(m_weights);
}

RationalBezierCurve::RationalBezierCurve(std::vector<Vec2> points)
  : RationalBezierCurve(points, std::vector<double>(points.size(), 1.0))
{ }

bool RationalBezierCurve::is_polynomial(double rel_tol) const
{
  const auto [lo, hi] = std::minmax_element(m_weights.begin(), m_weights.end());
  return (*hi - *lo) <= rel_tol * *hi;
}

CurveSample RationalBezierCurve::sample(double s, Extrapolate mode) const
{
  check_parameter(s, mode);
  std::vector<HVec<3>> work(m_points.size());
  for(std::size_t j = 0; j < m_points.size(); ++j)
  {
    const double w = m_weights[j];
    work[j] << w * m_points[j].x(), w * m_points[j].y(), w;
  }
  const auto h = de_casteljau<3>(std::move(work), s);
  const double w = h.value[2];
  const Vec2 point = h.value.head<2>() / w;
  const Vec2 tangent = (h.derivative.head<2>() - point * h.derivative[2]) / w;
  return {point, tangent};
}

Vec2 RationalBezierCurve::eval(double s, Extrapolate mode) const { return sample(s, mode).point; }

Vec2 RationalBezierCurve::derivative(double s, Extrapolate mode) const
{
  return sample(s, mode).tangent;
}

RationalBezierCurve RationalBezierCurve::reversed() const
{
  return RationalBezierCurve(std::vector<Vec2>(m_points.rbegin(), m_points.rend()),
                             std::vector<double>(m_weights.rbegin(), m_weights.rend()));
}

RationalBezierCurve RationalBezierCurve::translated(const Vec2& offset) const
{
  auto pts = m_points;
  for(auto& p : pts)
  {
    p += offset;
  }
  return RationalBezierCurve(std::move(pts), m_weights);
}

// -- RationalBezierPatch ------------------------------------------------------

RationalBezierPatch::RationalBezierPatch(int degree_u,
                                         int degree_v,
                                         std::vector<Vec3> points,
                                         std::vector<double> weights)
  : m_degree_u(degree_u)
  , m_degree_v(degree_v)
  , m_points(std::move(points))
  , m_weights(std::move(weights))
{
  if(degree_u < 0 || degree_v < 0)
  {
    throw ValidationError("patch degrees must be nonnegative");
  }
  const auto expected = static_cast<std::size_t>(degree_u + 1) * static_cast<std::size_t>(degree_v + 1);
  if(m_points.size() != expected || m_weights.size() != expected)
  {
    throw ValidationError("patch of bi-degree (" + std::to_string(degree_u) + "," +
                          std::to_string(degree_v) + ") needs " + std::to_string(expected) +
                          " points and weights, got " + std::to_string(m_points.size()) + " and " +
                          std::to_string(m_weights.size()));
  }
  for(const auto& p : m_points)
  {
    if(!p.allFinite())
    {
      throw ValidationError("patch control point is not finite");
    }
  }
  check_weights(m_weights);
  m_scale = control_bbox(*this).diagonal();
}

RationalBezierPatch::RationalBezierPatch(int degree_u, int degree_v, std::vector<Vec3> points)
  : RationalBezierPatch(degree_u, degree_v, points, std::vector<double>(points.size(), 1.0))
{ }

PatchSample RationalBezierPatch::sample(double u, double v) const
{
  const int m = m_degree_u;
  const int n = m_degree_v;

  // Collapse each u-row in v, keeping the v-derivative, then collapse in u.
  std::vector<HVec<4>> rows(m + 1);
  std::vector<HVec<4>> rows_dv(m + 1);
  std::vector<HVec<4>> work(n + 1);
  for(int i = 0; i <= m; ++i)
  {
    for(int j = 0; j <= n; ++j)
    {
      const double w = weight(i, j);
      const Vec3& p = point(i, j);
      work[j] << w * p.x(), w * p.y(), w * p.z(), w;
    }
    const auto h = de_casteljau<4>(work, v);
    rows[i] = h.value;
    rows_dv[i] = h.derivative;
  }
  const auto hu = de_casteljau<4>(rows, u);
  const auto hv = de_casteljau<4>(rows_dv, u);

  const double w = hu.value[3];
  PatchSample out;
  out.point = hu.value.head<3>() / w;
  out.du = (hu.derivative.head<3>() - out.point * hu.derivative[3]) / w;
  out.dv = (hv.value.head<3>() - out.point * hv.value[3]) / w;
  return out;
}

Vec3 RationalBezierPatch::eval(double u, double v) const { return sample(u, v).point; }

NormalSample RationalBezierPatch::normal(double u, double v) const
{
  const auto s = sample(u, v);
  NormalSample out;
  out.normal = s.du.cross(s.dv);
  out.degenerate = !(out.normal.norm() >= 1e-14 * m_scale * m_scale) || m_scale == 0.0;
  return out;
}

RationalBezierPatch RationalBezierPatch::swapped_uv() const
{
  std::vector<Vec3> pts;
  std::vector<double> wts;
  pts.reserve(m_points.size());
  wts.reserve(m_weights.size());
  for(int j = 0; j <= m_degree_v; ++j)
  {
    for(int i = 0; i <= m_degree_u; ++i)
    {
      pts.push_back(point(i, j));
      wts.push_back(weight(i, j));
    }
  }
  return RationalBezierPatch(m_degree_v, m_degree_u, std::move(pts), std::move(wts));
}

RationalBezierPatch RationalBezierPatch::translated(const Vec3& offset) const
{
  return transformed(Eigen::Matrix3d::Identity(), offset);
}

RationalBezierPatch RationalBezierPatch::transformed(const Eigen::Matrix3d& linear,
                                                     const Vec3& offset) const
{
  auto pts = m_points;
  for(auto& p : pts)
  {
    p = linear * p + offset;
  }
  return RationalBezierPatch(m_degree_u, m_degree_v, std::move(pts), m_weights);
}

// -- Basis conversion ---------------------------------------------------------

std::vector<double> bernstein_to_monomial(std::span<const double> coeffs, Diagnostics* diag)
{
  if(coeffs.empty())
  {
    throw ValidationError("basis conversion needs at least one coefficient");
  }
  warn_degree(coeffs.size(), diag);
  const int m = static_cast<int>(coeffs.size()) - 1;
  std::vector<double> out(coeffs.size(), 0.0);
  for(int k = 0; k <= m; ++k)
  {
    double acc = 0.0;
    for(int j = 0; j <= k; ++j)
    {
      const double sign = ((k - j) % 2 == 0) ? 1.0 : -1.0;
      acc += sign * binomial(k, j) * coeffs[j];
    }
    out[k] = binomial(m, k) * acc;
  }
  return out;
}

std::vector<double> monomial_to_bernstein(std::span<const double> coeffs, Diagnostics* diag)
{
  if(coeffs.empty())
  {
    throw ValidationError("basis conversion needs at least one coefficient");
  }
  warn_degree(coeffs.size(), diag);
  const int m = static_cast<int>(coeffs.size()) - 1;
  std::vector<double> out(coeffs.size(), 0.0);
  for(int j = 0; j <= m; ++j)
  {
    double acc = 0.0;
    for(int k = 0; k <= j; ++k)
    {
      acc += binomial(j, k) / binomial(m, k) * coeffs[k];
    }
    out[j] = acc;
  }
  return out;
}

double eval_bernstein(std::span<const double> coeffs, double s)
{
  std::vector<double> work(coeffs.begin(), coeffs.end());
  const double t = 1.0 - s;
  for(std::size_t level = work.size(); level > 1; --level)
  {
    for(std::size_t k = 0; k + 1 < level; ++k)
    {
      work[k] = t * work[k] + s * work[k + 1];
    }
  }
  return work.empty() ? 0.0 : work[0];
}

// -- Bounding boxes -----------------------------------------------------------

BoundingBox2 control_bbox(const RationalBezierCurve& curve)
{
  BoundingBox2 box;
  for(const auto& p : curve.points())
  {
    box.expand(p);
  }
  return box;
}

BoundingBox2 control_bbox(std::span<const RationalBezierCurve> curves)
{
  BoundingBox2 box;
  for(const auto& c : curves)
  {
    box.expand(control_bbox(c));
  }
  return box;
}

BoundingBox3 control_bbox(const RationalBezierPatch& patch)
{
  BoundingBox3 box;
  for(const auto& p : patch.points())
  {
    box.expand(p);
  }
  return box;
}

}  // namespace ratquad
