#include "models.hpp"
#include "ratquad/bezier.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace ratquad;
using doctest::Approx;

namespace
{
const RationalBezierCurve quarter_arc({Vec2(1, 0), Vec2(1, 1), Vec2(0, 1)}, {1.0, std::sqrt(0.5), 1.0});

// Direct sum of weighted Bernstein terms.
Vec2 brute_eval(const RationalBezierCurve& c, double s)
{
  const int m = c.degree();
  Vec2 num = Vec2::Zero();
  double den = 0.0;
  for(int j = 0; j <= m; ++j)
  {
    const double b = std::tgamma(m + 1.0) / (std::tgamma(j + 1.0) * std::tgamma(m - j + 1.0)) * std::pow(1 - s, m - j) *
      std::pow(s, j);
    num += b * c.weights()[static_cast<std::size_t>(j)] * c.points()[static_cast<std::size_t>(j)];
    den += b * c.weights()[static_cast<std::size_t>(j)];
  }
  return num / den;
}
}  // namespace

TEST_CASE("quarter arc evaluation")
{
  CHECK((quarter_arc.eval(0.0) - Vec2(1, 0)).norm() == 0.0);
  CHECK((quarter_arc.eval(1.0) - Vec2(0, 1)).norm() == 0.0);
  const Vec2 mid = quarter_arc.eval(0.5);
  CHECK(mid.x() == Approx(0.7071067812).epsilon(1e-10));
  CHECK(mid.y() == Approx(0.7071067812).epsilon(1e-10));
  for(double s = 0.0; s <= 1.0; s += 0.05)
  {
    CHECK(quarter_arc.eval(s).norm() == Approx(1.0).epsilon(1e-15));
  }
}

TEST_CASE("evaluation outside [0,1] needs extrapolation")
{
  CHECK_THROWS_AS(quarter_arc.eval(1.5), ValidationError);
  CHECK_THROWS_AS(quarter_arc.eval(-0.1), ValidationError);
  CHECK(quarter_arc.eval(1.5, Extrapolate::yes).allFinite());
}

TEST_CASE("de Casteljau matches the Bernstein sum")
{
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> coord(-2, 2);
  std::uniform_real_distribution<double> weight(0.2, 3);
  for(int trial = 0; trial < 50; ++trial)
  {
    const int m = 1 + trial % 7;
    std::vector<Vec2> pts;
    std::vector<double> w;
    for(int j = 0; j <= m; ++j)
    {
      pts.emplace_back(coord(rng), coord(rng));
      w.push_back(weight(rng));
    }
    const RationalBezierCurve c(pts, w);
    for(double s : {0.0, 0.13, 0.5, 0.77, 1.0})
    {
      CHECK((c.eval(s) - brute_eval(c, s)).norm() <= 1e-13 * (1 + brute_eval(c, s).norm()));
    }
  }
}

TEST_CASE("curve derivative")
{
  const Vec2 d0 = quarter_arc.derivative(0.0);
  CHECK(d0.x() == Approx(0.0).epsilon(1e-14));
  CHECK(d0.y() == Approx(std::sqrt(2.0)).epsilon(1e-12));
  const RationalBezierCurve line({Vec2(0, 0), Vec2(2, 0)});
  for(double s : {0.0, 0.3, 1.0})
  {
    CHECK((line.derivative(s) - Vec2(2, 0)).norm() < 1e-15);
  }
  // central difference oracle on a random rational cubic
  const RationalBezierCurve c({Vec2(0, 0), Vec2(1, 2), Vec2(2, -1), Vec2(3, 1)}, {1.0, 0.5, 2.0, 1.2});
  const double h = 1e-6;
  for(double s : {0.2, 0.5, 0.8})
  {
    const Vec2 fd = (c.eval(s + h) - c.eval(s - h)) / (2 * h);
    CHECK((c.derivative(s) - fd).norm() < 1e-7);
  }
}

TEST_CASE("curve validation")
{
  CHECK_THROWS_AS(RationalBezierCurve(std::vector<Vec2>{}), ValidationError);
  CHECK_NOTHROW(RationalBezierCurve({Vec2(0, 0)}));
  CHECK_THROWS_AS(RationalBezierCurve({Vec2(0, 0), Vec2(1, 0)}, {1.0, 0.0}), ValidationError);
  CHECK_THROWS_AS(RationalBezierCurve({Vec2(0, 0), Vec2(1, 0)}, {1.0, -2.0}), ValidationError);
  CHECK_THROWS_AS(RationalBezierCurve({Vec2(0, 0), Vec2(1, 0)}, {1.0}), ValidationError);
}

TEST_CASE("reversal and translation")
{
  const auto r = quarter_arc.reversed();
  for(double s : {0.0, 0.3, 0.9})
  {
    CHECK((r.eval(s) - quarter_arc.eval(1 - s)).norm() < 1e-15);
  }
  const auto t = quarter_arc.translated(Vec2(2, -1));
  CHECK((t.eval(0.4) - quarter_arc.eval(0.4) - Vec2(2, -1)).norm() < 1e-14);
  CHECK(quarter_arc.is_polynomial() == false);
  CHECK(RationalBezierCurve({Vec2(0, 0), Vec2(1, 0)}, {2.0, 2.0}).is_polynomial());
}

TEST_CASE("bilinear patch evaluation and normals")
{
  const auto p = testmodels::bilinear({0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 1, 0});
  CHECK((p.eval(0.25, 0.75) - Vec3(0.25, 0.75, 0)).norm() < 1e-15);
  CHECK((p.eval(0, 0) - p.point(0, 0)).norm() == 0.0);
  const auto n = p.normal(0.3, 0.6);
  CHECK_FALSE(n.degenerate);
  CHECK((n.normal - Vec3(0, 0, 1)).norm() < 1e-15);
  CHECK((p.swapped_uv().normal(0.3, 0.6).normal - Vec3(0, 0, -1)).norm() < 1e-15);
}

TEST_CASE("patch partials against finite differences")
{
  std::mt19937_64 rng(3);
  const auto p = testmodels::random_bicubic(rng, true);
  const double h = 1e-6;
  for(double u : {0.2, 0.6})
  {
    for(double v : {0.35, 0.9})
    {
      const auto s = p.sample(u, v);
      CHECK((s.point - p.eval(u, v)).norm() < 1e-15);
      CHECK((s.du - (p.eval(u + h, v) - p.eval(u - h, v)) / (2 * h)).norm() < 1e-7);
      CHECK((s.dv - (p.eval(u, v + h) - p.eval(u, v - h)) / (2 * h)).norm() < 1e-7);
    }
  }
}

TEST_CASE("collapsed patch edge gives a degenerate normal")
{
  // triangle-like patch: the whole v = 1 edge collapses to one point
  const auto p = testmodels::bilinear({0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 1, 0});
  CHECK(p.normal(0.5, 1.0).degenerate);
  CHECK_FALSE(p.normal(0.5, 0.5).degenerate);
}

TEST_CASE("patch transforms")
{
  std::mt19937_64 rng(5);
  const auto p = testmodels::random_bicubic(rng, true);
  const auto t = p.translated(Vec3(1, 2, 3));
  CHECK((t.eval(0.3, 0.4) - p.eval(0.3, 0.4) - Vec3(1, 2, 3)).norm() < 1e-14);
  const auto sw = p.swapped_uv();
  CHECK((sw.eval(0.3, 0.4) - p.eval(0.4, 0.3)).norm() < 1e-14);
  CHECK_THROWS_AS(RationalBezierPatch(1, 1, {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0)}), ValidationError);
}

TEST_CASE("basis conversion")
{
  const std::vector<double> ones{1.0, 1.0, 1.0};
  const auto mono = bernstein_to_monomial(ones);
  CHECK(mono[0] == Approx(1.0));
  CHECK(mono[1] == Approx(0.0));
  CHECK(mono[2] == Approx(0.0));
  const std::vector<double> s2{0.0, 0.0, 1.0};
  const auto bern = monomial_to_bernstein(s2);
  CHECK(bern[0] == Approx(0.0));
  CHECK(bern[1] == Approx(0.0));
  CHECK(bern[2] == Approx(1.0));

  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> coef(-1, 1);
  for(int m = 0; m <= 12; ++m)
  {
    std::vector<double> b(static_cast<std::size_t>(m + 1));
    for(auto& c : b)
    {
      c = coef(rng);
    }
    const auto a = bernstein_to_monomial(b);
    const auto back = monomial_to_bernstein(a);
    for(std::size_t j = 0; j < b.size(); ++j)
    {
      CHECK(back[j] == Approx(b[j]).epsilon(1e-9));
    }
    for(double s : {0.1, 0.5, 0.95})
    {
      double horner = 0.0;
      for(std::size_t j = a.size(); j-- > 0;)
      {
        horner = horner * s + a[j];
      }
      CHECK(horner == Approx(eval_bernstein(b, s)).epsilon(1e-10));
    }
  }
}

TEST_CASE("high-degree conversion warns")
{
  Diagnostics diag;
  const std::vector<double> b(22, 1.0);
  bernstein_to_monomial(b, &diag);
  CHECK_FALSE(diag.warnings.empty());
}

TEST_CASE("control bounding boxes")
{
  const auto loop = testmodels::circle_loop();
  const auto box = control_bbox(std::span<const RationalBezierCurve>(loop));
  CHECK(box.min.x() == -1.0);
  CHECK(box.min.y() == -1.0);
  CHECK(box.max.x() == 1.0);
  CHECK(box.max.y() == 1.0);
  const RationalBezierCurve point({Vec2(2, 3), Vec2(2, 3), Vec2(2, 3)});
  CHECK(control_bbox(point).diagonal() == 0.0);
  Loop shifted;
  for(const auto& c : loop)
  {
    shifted.push_back(c.translated(Vec2(5, -2)));
  }
  const auto box2 = control_bbox(std::span<const RationalBezierCurve>(shifted));
  CHECK((box2.min - box.min - Vec2(5, -2)).norm() < 1e-15);
  CHECK((box2.max - box.max - Vec2(5, -2)).norm() < 1e-15);
  for(double s = 0; s <= 1; s += 0.1)
  {
    for(const auto& c : loop)
    {
      CHECK(box.contains(c.eval(s), 1e-15));
    }
  }
}
