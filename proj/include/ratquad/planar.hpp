#pragma once

/*!
 * \file planar.hpp
 *
 * \brief Quadrature rules for planar regions bounded by loops of rational
 *        Bezier curves, built from Green's theorem with a numerical
 *        y-antiderivative.
 *
 * For a region D with boundary loops traversed counter-clockwise around the
 * material, \f$\int_D f\,dA = -\oint A_f\,dx\f$ with
 * \f$A_f(x,y) = \int_C^y f(x,t)\,dt\f$. Each boundary curve gets an
 * intermediate rule (s_q, gamma_q) in its parameter and each intermediate
 * point gets a Gauss rule (y_zeta, gamma_zeta) on [C, y(s_q)]. The emitted
 * weight of (x(s_q), y_zeta) is -gamma_q * gamma_zeta * x'(s_q).
 */

#include "ratquad/bezier.hpp"
#include "ratquad/quad1d.hpp"

#include <cmath>
#include <span>
#include <vector>

namespace ratquad
{
using Loop = std::vector<RationalBezierCurve>;

/*!
 * \brief Region bounded by one or more closed loops of curves.
 *
 * The sign of a loop's contribution follows its traversal: counter-clockwise
 * loops add material, clockwise loops remove it. No reorientation is done.
 */
class PlanarRegion
{
public:
  /// Throws ValidationError when there are no loops, a loop is empty, or a
  /// loop is open by more than 1e-10 times its control bounding-box diagonal.
  explicit PlanarRegion(std::vector<Loop> loops);

  std::span<const Loop> loops() const { return m_loops; }
  std::size_t curve_count() const;

  /// Same region translated by \a offset.
  PlanarRegion translated(const Vec2& offset) const;
  /// Same curves traversed backwards (every loop reversed).
  PlanarRegion reversed() const;

private:
  std::vector<Loop> m_loops;
};

/// Origin of one point of a Rule2D. The point's weight is
/// -curve_weight * antiderivative_weight * jacobian.
struct Source2D
{
  int loop = 0;
  int segment = 0;   // curve index within its loop
  int curve = 0;     // curve index over all loops
  int q = 0;         // intermediate node
  int zeta = 0;      // antiderivative node
  double curve_weight = 0.0;
  double antiderivative_weight = 0.0;
  double jacobian = 0.0;  // dx/ds (or du/ds) at the intermediate node
};

struct Rule2D
{
  std::vector<Vec2> points;
  std::vector<double> weights;
  std::vector<Source2D> sources;

  std::size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }
};

/// Minimum y over every control point of the region.
double region_constant_C(const PlanarRegion& region);

/*!
 * \brief Green's-theorem rule for arbitrary loops and intermediate rules.
 *
 * \a intermediate holds one rule on [0,1] per curve, in loop-major order.
 * Each intermediate node gets an \a antiderivative_points Gauss rule on
 * [constant, y]. A degenerate interval (y == constant) yields zero weights.
 * Zero-length curves are reported through \a diag.
 */
Rule2D green_rule(std::span<const Loop> loops,
                  double constant,
                  std::span<const Rule1D> intermediate,
                  int antiderivative_points,
                  Diagnostics* diag = nullptr);

/// Spectral rule: Q-point Gauss intermediate rules and P-point antiderivative rules.
Rule2D spectral_rule(const PlanarRegion& region, int q_points, int p_points, Diagnostics* diag = nullptr);

/// Number of Gauss points the polynomial-exact rule uses on a polynomial curve of degree m.
int pe_polynomial_points(int m, int k);

/// Intermediate rule the polynomial-exact rule uses for one curve.
Rule1D pe_intermediate_rule(const RationalBezierCurve& curve, int k);

/*!
 * \brief Rule exact for every polynomial of total degree <= k.
 *
 * Rational curves use an intermediate rule exact for the weight
 * polynomial's poles at multiplicity k+3 with m(k+3)+1 nodes; polynomial
 * curves use Gauss rules of pe_polynomial_points(m, k) points. The
 * antiderivative rules have ceil((k+1)/2) points. NumericError from the
 * rational rules is rethrown with the curve index.
 */
Rule2D spectral_pe_rule(const PlanarRegion& region, int k, Diagnostics* diag = nullptr);

/// Throws NumericError naming node \a index when \a value is not finite.
void check_integrand_value(double value, std::size_t index, std::span<const double> point);

/// Sum of w_l f(x_l, y_l); an empty rule gives 0.
template <typename F>
double integrate2d(const Rule2D& rule, F&& f)
{
  double acc = 0.0;
  for(std::size_t l = 0; l < rule.size(); ++l)
  {
    const Vec2& p = rule.points[l];
    const double value = f(p.x(), p.y());
    if(!std::isfinite(value))
    {
      check_integrand_value(value, l, std::span<const double>(p.data(), 2));
    }
    acc += rule.weights[l] * value;
  }
  return acc;
}

}  // namespace ratquad
