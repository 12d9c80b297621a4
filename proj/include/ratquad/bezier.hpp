#pragma once

/*!
 * \file bezier.hpp
 *
 * \brief Rational Bernstein-Bezier curves and tensor-product patches.
 *
 * Curves and patches are evaluated with de Casteljau's algorithm on
 * homogeneous coordinates (w*x, w*y[, w*z], w) followed by a perspective
 * division. Derivatives come from the same recursion and the quotient rule.
 * All types are immutable values; every member function is safe to call
 * concurrently.
 */

#include "ratquad/errors.hpp"

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

namespace ratquad
{
using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;

/// Controls whether curve evaluation accepts parameters outside [0,1].
enum class Extrapolate
{
  no,
  yes
};

/// Axis-aligned box. Default-constructed boxes are empty (min > max).
template <int Dim>
struct BoundingBox
{
  using VecType = Eigen::Matrix<double, Dim, 1>;

  VecType min = VecType::Constant(std::numeric_limits<double>::infinity());
  VecType max = VecType::Constant(-std::numeric_limits<double>::infinity());

  bool empty() const { return (min.array() > max.array()).any(); }

  void expand(const VecType& p)
  {
    min = min.cwiseMin(p);
    max = max.cwiseMax(p);
  }

  void expand(const BoundingBox& other)
  {
    if(!other.empty())
    {
      expand(other.min);
      expand(other.max);
    }
  }

  bool contains(const VecType& p, double tol = 0.0) const
  {
    return ((p.array() >= min.array() - tol) && (p.array() <= max.array() + tol)).all();
  }

  double diagonal() const { return empty() ? 0.0 : (max - min).norm(); }
};

using BoundingBox2 = BoundingBox<2>;
using BoundingBox3 = BoundingBox<3>;

/// A point on a planar curve together with its parametric derivative.
struct CurveSample
{
  Vec2 point;
  Vec2 tangent;
};

/*!
 * \brief Degree-m rational Bezier curve in the plane (or in a patch's
 *        (u,v) parameter square).
 *
 * Invariants: points().size() == weights().size() == degree()+1 and every
 * weight is strictly positive, so the weight polynomial has no root on [0,1].
 */
class RationalBezierCurve
{
public:
  /// Throws ValidationError on size mismatch, empty input, or a weight <= 0.
  RationalBezierCurve(std::vector<Vec2> points, std::vector<double> weights);

  /// Polynomial curve (all weights 1).
  explicit RationalBezierCurve(std::vector<Vec2> points);

  int degree() const { return static_cast<int>(m_points.size()) - 1; }
  std::span<const Vec2> points() const { return m_points; }
  std::span<const double> weights() const { return m_weights; }

  /// True when all weights agree to \a rel_tol relative, i.e. the curve is a polynomial curve.
  bool is_polynomial(double rel_tol = 1e-14) const;

  Vec2 start() const { return m_points.front(); }
  Vec2 end() const { return m_points.back(); }

  Vec2 eval(double s, Extrapolate mode = Extrapolate::no) const;
  Vec2 derivative(double s, Extrapolate mode = Extrapolate::no) const;
  CurveSample sample(double s, Extrapolate mode = Extrapolate::no) const;

  /// Same geometry traversed in the opposite direction.
  RationalBezierCurve reversed() const;
  RationalBezierCurve translated(const Vec2& offset) const;

private:
  std::vector<Vec2> m_points;
  std::vector<double> m_weights;
};

/// Point and first partials of a patch at (u,v).
struct PatchSample
{
  Vec3 point;
  Vec3 du;
  Vec3 dv;
};

/// Unnormalized normal d/du x d/dv, flagged when it is numerically zero.
struct NormalSample
{
  Vec3 normal;
  bool degenerate = false;
};

/*!
 * \brief Tensor-product rational Bezier patch of bi-degree (m, n).
 *
 * Control points are stored row-major with the u index outermost:
 * point(i, j) = points()[i * (n + 1) + j] for 0 <= i <= m, 0 <= j <= n.
 */
class RationalBezierPatch
{
public:
  RationalBezierPatch(int degree_u,
                      int degree_v,
                      std::vector<Vec3> points,
                      std::vector<double> weights);

  /// Polynomial patch (all weights 1).
  RationalBezierPatch(int degree_u, int degree_v, std::vector<Vec3> points);

  int degree_u() const { return m_degree_u; }
  int degree_v() const { return m_degree_v; }
  std::span<const Vec3> points() const { return m_points; }
  std::span<const double> weights() const { return m_weights; }

  const Vec3& point(int i, int j) const { return m_points[index(i, j)]; }
  double weight(int i, int j) const { return m_weights[index(i, j)]; }

  Vec3 eval(double u, double v) const;
  PatchSample sample(double u, double v) const;

  /*!
   * \brief Unnormalized normal vector d/du x d/dv at (u,v).
   *
   * The result is flagged degenerate when its magnitude is below
   * 1e-14 * scale()^2 (collapsed edges, e.g. sphere poles).
   */
  NormalSample normal(double u, double v) const;

  /// Diagonal of the control-point bounding box.
  double scale() const { return m_scale; }

  /// Same surface with the u and v directions exchanged (normal flips sign).
  RationalBezierPatch swapped_uv() const;
  RationalBezierPatch translated(const Vec3& offset) const;
  /// Applies an affine map x -> A x + b to the control points.
  RationalBezierPatch transformed(const Eigen::Matrix3d& linear, const Vec3& offset) const;

private:
  std::size_t index(int i, int j) const
  {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(m_degree_v + 1) +
      static_cast<std::size_t>(j);
  }

  int m_degree_u;
  int m_degree_v;
  std::vector<Vec3> m_points;
  std::vector<double> m_weights;
  double m_scale = 0.0;
};

/*!
 * \brief Bernstein coefficients of degree coeffs.size()-1 to monomial coefficients
 *        (a_0 + a_1 s + ... + a_m s^m).
 *
 * The conversion matrix has condition number around 10^(m/2); a warning is
 * added to \a diag when the degree exceeds 20.
 */
std::vector<double> bernstein_to_monomial(std::span<const double> coeffs,
                                          Diagnostics* diag = nullptr);

/// Inverse of bernstein_to_monomial.
std::vector<double> monomial_to_bernstein(std::span<const double> coeffs,
                                          Diagnostics* diag = nullptr);

/// Evaluates sum_j c_j B_j^m(s) by de Casteljau.
double eval_bernstein(std::span<const double> coeffs, double s);

BoundingBox2 control_bbox(const RationalBezierCurve& curve);
BoundingBox2 control_bbox(std::span<const RationalBezierCurve> curves);
BoundingBox3 control_bbox(const RationalBezierPatch& patch);

}  // namespace ratquad
