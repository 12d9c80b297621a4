#pragma once

/*!
 * \file volume.hpp
 *
 * \brief Volume quadrature for solids bounded by closed sets of outward
 *        oriented trimmed patches.
 *
 * With \f$A_f(x,y,z) = \int_{P_z}^z f(x,y,t)\,dt\f$ the divergence theorem
 * gives \f$\int_V f\,dV = \oint A_f\,n_z\,dS\f$. The surface integral uses
 * z-normal surface rules; each surface point gets an n_p-point Gauss rule in
 * z on [P_z, z].
 */

#include "ratquad/surface.hpp"

#include <optional>
#include <span>
#include <vector>

namespace ratquad
{
struct SolidModel
{
  std::vector<TrimmedPatch> patches;
  /// Caller's assertion that the patches bound a solid; not verified.
  bool closed = false;

  SolidModel translated(const Vec3& offset) const;
  /// Every patch orientation flipped.
  SolidModel flipped() const;
};

struct VolumeSource
{
  int patch = 0;
  int sigma = 0;  // index within the patch's surface rule
  int psi = 0;    // antiderivative node
};

struct Rule3D
{
  std::vector<Vec3> points;
  std::vector<double> weights;
  std::vector<VolumeSource> sources;

  std::size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }
};

/// Minimum z over every control point of every patch. Throws ValidationError for an empty solid.
double solid_constant_Pz(const SolidModel& solid);

/// Control bounding box of every patch of the solid.
BoundingBox3 control_bbox(const SolidModel& solid);

/*!
 * \brief Volume rule with n_p antiderivative points per surface point.
 *
 * Untrimmed patches use the tensor rule of order max(m_q, n_q). \a p_z
 * overrides the antidifferentiation constant (default solid_constant_Pz).
 * Throws ValidationError unless solid.closed.
 */
Rule3D volume_rule(const SolidModel& solid,
                   int m_q,
                   int n_q,
                   int n_p,
                   std::optional<double> p_z = std::nullopt,
                   Diagnostics* diag = nullptr);

/// volume_rule with n_p = m_q.
Rule3D volume_rule(const SolidModel& solid, int m_q, int n_q);

template <typename F>
double integrate3d(const Rule3D& rule, F&& f)
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

template <typename F>
double volume_integrate(const SolidModel& solid,
                        F&& f,
                        int m_q,
                        int n_q,
                        int n_p,
                        std::optional<double> p_z = std::nullopt)
{
  return integrate3d(volume_rule(solid, m_q, n_q, n_p, p_z), f);
}

}  // namespace ratquad
