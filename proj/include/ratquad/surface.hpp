#pragma once

/*!
 * \file surface.hpp
 *
 * \brief Quadrature over trimmed and untrimmed rational Bezier patches.
 *
 * A surface integral over a patch is an area integral over its parameter
 * domain weighted by the normal factor. Trimmed domains are handled with
 * Green's theorem in (u,v), antidifferentiating in v from P_v = 0. Untrimmed
 * patches use a tensor-product Gauss rule directly.
 */

#include "ratquad/bezier.hpp"
#include "ratquad/planar.hpp"

#include <cmath>
#include <span>
#include <string>
#include <vector>

namespace ratquad
{
/*!
 * \brief A rational patch restricted to the part of its parameter square
 *        enclosed by its trim loops (the full square when there are none).
 */
class TrimmedPatch
{
public:
  /// Throws ValidationError when a loop is empty, open by more than 1e-10, or
  /// has a control point outside [-1e-9, 1+1e-9]^2.
  explicit TrimmedPatch(RationalBezierPatch patch, std::vector<Loop> trim_loops = {});

  const RationalBezierPatch& patch() const { return m_patch; }
  std::span<const Loop> trim_loops() const { return m_trim_loops; }
  bool trimmed() const { return !m_trim_loops.empty(); }

  TrimmedPatch transformed(const Eigen::Matrix3d& linear, const Vec3& offset) const;
  TrimmedPatch translated(const Vec3& offset) const;
  /// Orientation flip: exchanges u and v in the patch and mirrors the trim loops to match.
  TrimmedPatch flipped() const;

private:
  RationalBezierPatch m_patch;
  std::vector<Loop> m_trim_loops;
};

enum class WeightMode
{
  full_normal,  // |du x dv|, surface measure
  z_normal      // z-component of du x dv, for the volume pipeline
};

/// Origin of one surface point. Untrimmed tensor rules use loop = segment = -1
/// with mu, eta the u and v Gauss indices.
struct SurfaceSource
{
  int patch = 0;
  int loop = -1;
  int segment = -1;
  int mu = 0;
  int eta = 0;
};

struct SurfaceRule
{
  std::vector<Vec3> points;
  std::vector<double> weights;
  std::vector<Vec2> params;
  std::vector<SurfaceSource> sources;
  std::size_t degenerate_normals = 0;

  std::size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }
  void append(const SurfaceRule& other);
};

/// The boundary of [0,1]^2 as four counter-clockwise linear curves.
Loop unit_square_loop();

/*!
 * \brief Green's-theorem rule over the region enclosed by \a loops in (u,v).
 *
 * Each curve gets an m_q-point Gauss rule and each intermediate node an
 * n_q-point Gauss rule in v on [0, v(s)].
 */
Rule2D parametric_area_rule(std::span<const Loop> loops, int m_q, int n_q, Diagnostics* diag = nullptr);

/// Trimmed-domain rule for one patch; an untrimmed patch uses the explicit unit-square loop.
SurfaceRule surface_rule(const TrimmedPatch& tp,
                         int m_q,
                         int n_q,
                         WeightMode mode = WeightMode::full_normal,
                         int patch_index = 0,
                         Diagnostics* diag = nullptr);

/// n x n tensor Gauss rule over the whole parameter square.
SurfaceRule untrimmed_rule(const RationalBezierPatch& patch,
                           int n,
                           WeightMode mode = WeightMode::full_normal,
                           int patch_index = 0,
                           Diagnostics* diag = nullptr);

/// Routes untrimmed patches to untrimmed_rule with n = max(m_q, n_q), trimmed ones to surface_rule.
SurfaceRule patch_rule(const TrimmedPatch& tp,
                       int m_q,
                       int n_q,
                       WeightMode mode,
                       int patch_index,
                       Diagnostics* diag = nullptr);

/// Concatenated patch_rule output over all patches; errors are rethrown with the patch index.
SurfaceRule surface_rule_all(std::span<const TrimmedPatch> patches,
                             int m_q,
                             int n_q,
                             WeightMode mode = WeightMode::full_normal,
                             Diagnostics* diag = nullptr);

template <typename F>
double integrate_surface_rule(const SurfaceRule& rule, F&& f)
{
  double acc = 0.0;
  for(std::size_t l = 0; l < rule.size(); ++l)
  {
    const Vec3& p = rule.points[l];
    const double value = f(p.x(), p.y(), p.z());
    if(!std::isfinite(value))
    {
      check_integrand_value(value, l, std::span<const double>(p.data(), 3));
    }
    acc += rule.weights[l] * value;
  }
  return acc;
}

/// Sum over patches of the surface integral of f; an empty list gives 0.
template <typename F>
double surface_integrate(std::span<const TrimmedPatch> patches,
                         F&& f,
                         int m_q,
                         int n_q,
                         WeightMode mode = WeightMode::full_normal)
{
  double acc = 0.0;
  for(std::size_t i = 0; i < patches.size(); ++i)
  {
    try
    {
      acc += integrate_surface_rule(patch_rule(patches[i], m_q, n_q, mode, static_cast<int>(i)), f);
    }
    catch(const NumericError& e)
    {
      throw NumericError("patch " + std::to_string(i) + ": " + e.what());
    }
    catch(const ValidationError& e)
    {
      throw ValidationError("patch " + std::to_string(i) + ": " + e.what());
    }
  }
  return acc;
}

}  // namespace ratquad
