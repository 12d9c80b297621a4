#pragma once

/*!
 * \file quad1d.hpp
 *
 * \brief One-dimensional quadrature kernels: Gauss-Legendre rules, weight
 *        polynomial pole finding, and rules exact for rational functions
 *        with prescribed poles on [0,1].
 */

#include "ratquad/errors.hpp"

#include <complex>
#include <span>
#include <vector>

namespace ratquad
{
using Complex = std::complex<double>;

/// Nodes and weights of a rule on [lo, hi].
struct Rule1D
{
  std::vector<double> nodes;
  std::vector<double> weights;
  double lo = 0.0;
  double hi = 1.0;

  std::size_t size() const { return nodes.size(); }

  /// Affine image of this rule on [lo, hi]. A reversed interval negates the weights.
  Rule1D mapped(double new_lo, double new_hi) const;

  template <typename F>
  double integrate(F&& f) const
  {
    double acc = 0.0;
    for(std::size_t k = 0; k < nodes.size(); ++k)
    {
      acc += weights[k] * f(nodes[k]);
    }
    return acc;
  }
};

/*!
 * \brief n-point Gauss-Legendre rule on [lo, hi].
 *
 * Nodes come from the eigenvalues of the symmetric tridiagonal Jacobi matrix
 * and are polished by Newton iteration on P_n. For hi < lo the weights are
 * negative (signed-interval convention). Throws ValidationError for n == 0
 * or hi == lo.
 */
Rule1D gauss_legendre(int n, double lo = -1.0, double hi = 1.0);

/// One pole of a rational function, counted with multiplicity.
struct Pole
{
  Complex location;
  int multiplicity = 1;
};

/*!
 * \brief Poles of a rational integrand, closed under complex conjugation.
 *
 * Nonreal poles are stored in conjugate pairs with equal multiplicities.
 * Construction validates closure and distance from [0,1].
 */
class PoleSet
{
public:
  PoleSet() = default;

  /// Throws ValidationError unless the poles are conjugate-closed and off [0,1].
  explicit PoleSet(std::vector<Pole> poles);

  /// Groups roots that agree to \a merge_tol (relative) into poles of higher multiplicity.
  static PoleSet from_roots(std::span<const Complex> roots, double merge_tol = 1e-7);

  std::span<const Pole> poles() const { return m_poles; }
  bool empty() const { return m_poles.empty(); }

  /// Sum of multiplicities, counting both members of a conjugate pair.
  int total_multiplicity() const;

  /// Copy with every multiplicity multiplied by \a factor.
  PoleSet scaled(int factor) const;

private:
  std::vector<Pole> m_poles;
};

/// Distance from \a p to the segment [0,1] of the real axis.
double distance_to_unit_interval(Complex p);

/*!
 * \brief Complex roots of w(s) = sum_j w_j B_j^m(s).
 *
 * The Bernstein coefficients are converted to the monomial basis and the
 * roots are the eigenvalues of the companion matrix, refined by Newton steps
 * on the Bernstein form. Leading (highest-degree) monomial coefficients that
 * vanish relative to the largest coefficient reduce the degree; a constant
 * polynomial has no roots. Roots are returned with conjugates adjacent
 * (positive imaginary part first) and numerically real roots snapped to the
 * real axis. Throws ValidationError for an empty or all-zero list.
 */
std::vector<Complex> weight_poly_roots(std::span<const double> weights,
                                       Diagnostics* diag = nullptr);

/*!
 * \brief Exact value of the integral of (s - p)^(-j) over [0,1].
 *
 * Uses the principal logarithm for j = 1. Throws ValidationError when p lies
 * on [0,1] or j < 1.
 */
Complex partial_fraction_moment(Complex pole, int j);

/*!
 * \brief Rule on [0,1] exact for rational functions with the given poles.
 *
 * The rule has N = poles.total_multiplicity() + extra_poly_degree + 1 nodes
 * and integrates exactly every polynomial of degree <= extra_poly_degree and
 * every partial fraction (s - p)^(-j), j <= multiplicity(p). The moment
 * conditions are imposed on an orthonormal real basis of that space, built by
 * rational Arnoldi on a composite Gauss grid graded toward the poles; the same
 * grid supplies the moments. Nodes sit where the phase of the rational
 * Chebyshev function for the poles crosses multiples of pi, so they cluster
 * toward nearby poles; with no poles they are the zeros of U_N.
 *
 * The condition estimate is the 2-norm condition number of the collocation
 * matrix. Above 1e13 the rule retries with 2N nodes and minimum-norm
 * weights, then throws NumericError. Throws ValidationError when a pole is
 * within 1e-8 of [0,1].
 */
Rule1D rational_rule(const PoleSet& poles, int extra_poly_degree = 0);

/// Condition estimate of the last rational_rule moment system (for reporting).
struct RationalRuleReport
{
  double condition = 0.0;
  bool oversampled = false;
};

/// rational_rule variant that also reports how the system was solved.
Rule1D rational_rule(const PoleSet& poles, int extra_poly_degree, RationalRuleReport& report);

}  // namespace ratquad
