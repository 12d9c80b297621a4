#include "ratquad/volume.hpp"

#include <algorithm>

namespace ratquad
{
SolidModel SolidModel::translated(const Vec3& offset) const
{
  SolidModel out;
  out.closed = closed;
  for(const auto& tp : patches)
  {
    out.patches.push_back(tp.translated(offset));
  }
  return out;
}

SolidModel SolidModel::flipped() const
{
  SolidModel out;
  out.closed = closed;
  for(const auto& tp : patches)
  {
    out.patches.push_back(tp.flipped());
  }
  return out;
}

BoundingBox3 control_bbox(const SolidModel& solid)
{
  BoundingBox3 box;
  for(const auto& tp : solid.patches)
  {
    box.expand(control_bbox(tp.patch()));
  }
  return box;
}

double solid_constant_Pz(const SolidModel& solid)
{
  if(solid.patches.empty())
  {
    throw ValidationError("solid has no patches");
  }
  return control_bbox(solid).min.z();
}

Rule3D volume_rule(const SolidModel& solid, int m_q, int n_q, int n_p, std::optional<double> p_z, Diagnostics* diag)
{
  if(!solid.closed)
  {
    throw ValidationError("volume rules need a closed solid");
  }
  if(n_p < 1)
  {
    throw ValidationError("volume rule needs n_p >= 1");
  }
  const double base = p_z ? *p_z : solid_constant_Pz(solid);
  const Rule1D reference = gauss_legendre(n_p);
  const SurfaceRule surface = surface_rule_all(solid.patches, m_q, n_q, WeightMode::z_normal, diag);

  Rule3D rule;
  rule.points.reserve(surface.size() * static_cast<std::size_t>(n_p));
  rule.weights.reserve(surface.size() * static_cast<std::size_t>(n_p));
  rule.sources.reserve(surface.size() * static_cast<std::size_t>(n_p));
  int patch = -1;
  int sigma = 0;
  for(std::size_t l = 0; l < surface.size(); ++l)
  {
    const auto& src = surface.sources[l];
    sigma = src.patch == patch ? sigma + 1 : 0;
    patch = src.patch;
    const Vec3& p = surface.points[l];
    const Rule1D inner = reference.mapped(base, p.z());
    for(std::size_t k = 0; k < inner.size(); ++k)
    {
      rule.points.emplace_back(p.x(), p.y(), inner.nodes[k]);
      rule.weights.push_back(surface.weights[l] * inner.weights[k]);
      rule.sources.push_back({patch, sigma, static_cast<int>(k)});
    }
  }
  return rule;
}

Rule3D volume_rule(const SolidModel& solid, int m_q, int n_q) { return volume_rule(solid, m_q, n_q, m_q); }

}  // namespace ratquad
