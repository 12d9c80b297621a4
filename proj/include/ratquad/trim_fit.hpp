#pragma once

/*!
 * \file trim_fit.hpp
 *
 * \brief Piecewise polynomial Bezier fits of trimming curves given as ordered
 *        point lists, and closure checks for curve loops.
 */

#include "ratquad/bezier.hpp"

#include <span>
#include <vector>

namespace ratquad
{
/*!
 * \brief Cumulative chord length of an ordered point list, starting at 0.
 *
 * Throws ValidationError when two consecutive points coincide.
 */
std::vector<double> chord_parameters(std::span<const Vec2> points);

/*!
 * \brief Fits \a segments polynomial Bezier curves of the given degree through
 *        an ordered point list.
 *
 * Span boundaries are the data points nearest to equal fractions of the total
 * chord length. Within a span the curve interpolates degree+1 data points
 * (the span ends plus the interior points nearest to equally spaced chord
 * positions) with parameters proportional to chord length. Adjacent curves
 * share their end points exactly; a closed point list yields a closed loop.
 *
 * Throws ValidationError when there are fewer than (degree+1)*segments points,
 * when a span would hold fewer than degree+1 points, or when consecutive points
 * coincide.
 */
std::vector<RationalBezierCurve> fit_trim_curves(std::span<const Vec2> points, int segments, int degree = 3);

struct ClosureReport
{
  bool closed = true;
  double max_gap = 0.0;
};

/// Largest distance between the end of each curve and the start of the next (cyclically).
ClosureReport closure_check(std::span<const RationalBezierCurve> loop, double tolerance = 1e-10);

}  // namespace ratquad
