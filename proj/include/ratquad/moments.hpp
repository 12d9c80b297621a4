#pragma once

/*!
 * \file moments.hpp
 *
 * \brief Geometric moments of planar regions and solids, and moment-fitted
 *        quadrature weights.
 */

#include "ratquad/planar.hpp"
#include "ratquad/volume.hpp"

#include <iosfwd>
#include <span>
#include <vector>

namespace ratquad
{
/// Exponents of x^a y^b z^c.
struct Monomial
{
  int a = 0;
  int b = 0;
  int c = 0;

  bool operator==(const Monomial&) const = default;
};

/// Monomials of total degree <= p in graded lexicographic order:
/// by degree, then a descending, then b descending.
std::vector<Monomial> graded_monomials(int dimension, int p);

struct MomentVector
{
  int dimension = 2;
  int max_degree = 0;
  std::vector<Monomial> exponents;
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  /// Value for x^a y^b z^c; throws ValidationError when not present.
  double at(int a, int b, int c = 0) const;
};

/// Moments up to degree p with the polynomial-exact planar rule of degree p.
MomentVector geometric_moments(const PlanarRegion& region, int p);

/*!
 * \brief Moments of a solid up to degree p.
 *
 * Orders start at ceil((p+1)/2)+4 and double until successive results agree
 * to 1e-11 relative to the largest moment. Throws NumericError when order 64
 * is reached without agreement.
 */
MomentVector geometric_moments(const SolidModel& solid, int p, Diagnostics* diag = nullptr);

/// Evaluates every monomial at one point, in the order of \a exponents.
void eval_monomials(std::span<const Monomial> exponents, std::span<const double> point, std::span<double> out);

struct MomentFit
{
  std::vector<double> weights;
  double residual = 0.0;  // ||V w - moments||_2
  int rank = 0;
};

/*!
 * \brief Minimum-norm weights for \a points that reproduce \a moments.
 *
 * Points have the moment vector's dimension (2 or 3 coordinates each, packed).
 * Throws ValidationError when there are fewer points than monomials and
 * NumericError when the system is rank deficient and the residual exceeds
 * 1e-8 times the moment norm.
 */
MomentFit moment_fit_weights(std::span<const double> points, const MomentVector& moments);
MomentFit moment_fit_weights(std::span<const Vec2> points, const MomentVector& moments);
MomentFit moment_fit_weights(std::span<const Vec3> points, const MomentVector& moments);

/// CSV with header a,b[,c],value; one row per monomial.
void write_moments_csv(std::ostream& out, const MomentVector& moments);

}  // namespace ratquad
