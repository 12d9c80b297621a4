#include "ratquad/surface.hpp"

#include "ratquad/trim_fit.hpp"

#include <algorithm>

namespace ratquad
{
namespace
{
constexpr double trim_closure_tol = 1e-10;
constexpr double trim_box_slack = 1e-9;

double normal_factor(const NormalSample& n, WeightMode mode)
{
  return mode == WeightMode::full_normal ? n.normal.norm() : n.normal.z();
}

void report_degenerate(const SurfaceRule& rule, int patch_index, Diagnostics* diag)
{
  if(diag != nullptr && rule.degenerate_normals > 0)
  {
    diag->warn("patch " + std::to_string(patch_index) + ": " + std::to_string(rule.degenerate_normals) +
               " points with degenerate normals got zero weight");
  }
}

}  // namespace

TrimmedPatch::TrimmedPatch(RationalBezierPatch patch, std::vector<Loop> trim_loops)
  : m_patch(std::move(patch))
  , m_trim_loops(std::move(trim_loops))
{
  BoundingBox2 square;
  square.expand(Vec2(0.0, 0.0));
  square.expand(Vec2(1.0, 1.0));
  for(std::size_t k = 0; k < m_trim_loops.size(); ++k)
  {
    const auto& loop = m_trim_loops[k];
    if(loop.empty())
    {
      throw ValidationError("trim loop " + std::to_string(k) + " has no curves");
    }
    if(!closure_check(loop, trim_closure_tol).closed)
    {
      throw ValidationError("trim loop " + std::to_string(k) + " is open");
    }
    for(std::size_t j = 0; j < loop.size(); ++j)
    {
      for(const auto& p : loop[j].points())
      {
        if(!square.contains(p, trim_box_slack))
        {
          throw ValidationError("trim loop " + std::to_string(k) + " curve " + std::to_string(j) +
                                " has a control point outside the parameter square");
        }
      }
    }
  }
}

TrimmedPatch TrimmedPatch::transformed(const Eigen::Matrix3d& linear, const Vec3& offset) const
{
  return TrimmedPatch(m_patch.transformed(linear, offset), m_trim_loops);
}

TrimmedPatch TrimmedPatch::translated(const Vec3& offset) const
{
  return TrimmedPatch(m_patch.translated(offset), m_trim_loops);
}

TrimmedPatch TrimmedPatch::flipped() const
{
  std::vector<Loop> loops;
  for(const auto& loop : m_trim_loops)
  {
    Loop mirrored;
    for(auto it = loop.rbegin(); it != loop.rend(); ++it)
    {
      const auto rev = it->reversed();
      std::vector<Vec2> pts;
      for(const auto& p : rev.points())
      {
        pts.emplace_back(p.y(), p.x());
      }
      mirrored.emplace_back(std::move(pts), std::vector<double>(rev.weights().begin(), rev.weights().end()));
    }
    loops.push_back(std::move(mirrored));
  }
  return TrimmedPatch(m_patch.swapped_uv(), std::move(loops));
}

void SurfaceRule::append(const SurfaceRule& other)
{
  points.insert(points.end(), other.points.begin(), other.points.end());
  weights.insert(weights.end(), other.weights.begin(), other.weights.end());
  params.insert(params.end(), other.params.begin(), other.params.end());
  sources.insert(sources.end(), other.sources.begin(), other.sources.end());
  degenerate_normals += other.degenerate_normals;
}

Loop unit_square_loop()
{
  const Vec2 a(0.0, 0.0);
  const Vec2 b(1.0, 0.0);
  const Vec2 c(1.0, 1.0);
  const Vec2 d(0.0, 1.0);
  return {RationalBezierCurve({a, b}), RationalBezierCurve({b, c}), RationalBezierCurve({c, d}),
          RationalBezierCurve({d, a})};
}

Rule2D parametric_area_rule(std::span<const Loop> loops, int m_q, int n_q, Diagnostics* diag)
{
  if(m_q < 1 || n_q < 1)
  {
    throw ValidationError("parametric rule needs m_q >= 1 and n_q >= 1");
  }
  std::size_t curves = 0;
  for(const auto& loop : loops)
  {
    curves += loop.size();
  }
  const std::vector<Rule1D> intermediate(curves, gauss_legendre(m_q, 0.0, 1.0));
  return green_rule(loops, 0.0, intermediate, n_q, diag);
}

SurfaceRule surface_rule(const TrimmedPatch& tp, int m_q, int n_q, WeightMode mode, int patch_index, Diagnostics* diag)
{
  const Rule2D param = tp.trimmed() ? parametric_area_rule(tp.trim_loops(), m_q, n_q, diag)
                                    : parametric_area_rule(std::vector<Loop>{unit_square_loop()}, m_q, n_q, diag);
  SurfaceRule rule;
  rule.points.reserve(param.size());
  rule.weights.reserve(param.size());
  rule.params.reserve(param.size());
  rule.sources.reserve(param.size());
  for(std::size_t l = 0; l < param.size(); ++l)
  {
    const Vec2& uv = param.points[l];
    const auto n = tp.patch().normal(uv.x(), uv.y());
    double w = 0.0;
    if(n.degenerate)
    {
      ++rule.degenerate_normals;
    }
    else
    {
      w = param.weights[l] * normal_factor(n, mode);
    }
    const auto& src = param.sources[l];
    rule.points.push_back(tp.patch().eval(uv.x(), uv.y()));
    rule.weights.push_back(w);
    rule.params.push_back(uv);
    rule.sources.push_back({patch_index, src.loop, src.segment, src.q, src.zeta});
  }
  report_degenerate(rule, patch_index, diag);
  return rule;
}

SurfaceRule untrimmed_rule(const RationalBezierPatch& patch, int n, WeightMode mode, int patch_index, Diagnostics* diag)
{
  const Rule1D g = gauss_legendre(n, 0.0, 1.0);
  SurfaceRule rule;
  for(int i = 0; i < n; ++i)
  {
    for(int j = 0; j < n; ++j)
    {
      const double u = g.nodes[i];
      const double v = g.nodes[j];
      const auto ns = patch.normal(u, v);
      double w = 0.0;
      if(ns.degenerate)
      {
        ++rule.degenerate_normals;
      }
      else
      {
        w = g.weights[i] * g.weights[j] * normal_factor(ns, mode);
      }
      rule.points.push_back(patch.eval(u, v));
      rule.weights.push_back(w);
      rule.params.emplace_back(u, v);
      rule.sources.push_back({patch_index, -1, -1, i, j});
    }
  }
  report_degenerate(rule, patch_index, diag);
  return rule;
}

SurfaceRule patch_rule(const TrimmedPatch& tp, int m_q, int n_q, WeightMode mode, int patch_index, Diagnostics* diag)
{
  if(tp.trimmed())
  {
    return surface_rule(tp, m_q, n_q, mode, patch_index, diag);
  }
  return untrimmed_rule(tp.patch(), std::max(m_q, n_q), mode, patch_index, diag);
}

SurfaceRule surface_rule_all(std::span<const TrimmedPatch> patches, int m_q, int n_q, WeightMode mode, Diagnostics* diag)
{
  SurfaceRule all;
  for(std::size_t i = 0; i < patches.size(); ++i)
  {
    try
    {
      all.append(patch_rule(patches[i], m_q, n_q, mode, static_cast<int>(i), diag));
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
  return all;
}

}  // namespace ratquad
