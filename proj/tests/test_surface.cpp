#include "models.hpp"
#include "ratquad/surface.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace ratquad;
using doctest::Approx;
using std::numbers::pi;

namespace
{
const auto one = [](double, double) { return 1.0; };
const auto one3 = [](double, double, double) { return 1.0; };

RationalBezierPatch flat_square(double z = 0.0)
{
  return testmodels::bilinear({0, 0, z}, {1, 0, z}, {0, 1, z}, {1, 1, z});
}

// Reference surface integral by brute-force tensor Gauss on the whole square.
template <typename F>
double tensor_reference(const RationalBezierPatch& p, F&& f, int n)
{
  const auto g = gauss_legendre(n, 0.0, 1.0);
  double acc = 0.0;
  for(std::size_t i = 0; i < g.size(); ++i)
  {
    for(std::size_t j = 0; j < g.size(); ++j)
    {
      const auto s = p.sample(g.nodes[i], g.nodes[j]);
      acc += g.weights[i] * g.weights[j] * s.du.cross(s.dv).norm() * f(s.point.x(), s.point.y(), s.point.z());
    }
  }
  return acc;
}
}  // namespace

TEST_CASE("parametric area rules")
{
  const std::vector<Loop> square{unit_square_loop()};
  CHECK(integrate2d(parametric_area_rule(square, 4, 4), one) == Approx(1.0).epsilon(1e-13));
  const std::vector<Loop> triangle{testmodels::polygon_loop({Vec2(0, 0), Vec2(1, 0), Vec2(0, 1)})};
  CHECK(integrate2d(parametric_area_rule(triangle, 4, 4), one) == Approx(0.5).epsilon(1e-13));

  Loop quarter;
  quarter.emplace_back(std::vector<Vec2>{Vec2(0, 0), Vec2(1, 0)});
  quarter.emplace_back(std::vector<Vec2>{Vec2(1, 0), Vec2(1, 1), Vec2(0, 1)},
                       std::vector<double>{1.0, std::sqrt(0.5), 1.0});
  quarter.emplace_back(std::vector<Vec2>{Vec2(0, 1), Vec2(0, 0)});
  const std::vector<Loop> disk{quarter};
  CHECK(integrate2d(parametric_area_rule(disk, 16, 16), one) == Approx(pi / 4).epsilon(1e-12));
  for(const auto& p : parametric_area_rule(disk, 6, 6).points)
  {
    CHECK(p.x() >= 0.0);
    CHECK(p.x() <= 1.0);
    CHECK(p.y() >= 0.0);
    CHECK(p.y() <= 1.0);
  }
}

TEST_CASE("trim region and its complement cover the square")
{
  const auto disk = testmodels::circle_loop(0.5, 0.5, 0.3);
  const std::vector<Loop> inside{disk};
  const std::vector<Loop> outside{unit_square_loop(), testmodels::reversed_loop(disk)};
  const double a = integrate2d(parametric_area_rule(inside, 14, 14), one);
  const double b = integrate2d(parametric_area_rule(outside, 14, 14), one);
  CHECK(a + b == Approx(1.0).epsilon(1e-12));
  CHECK(a == Approx(pi * 0.09).epsilon(1e-12));
}

TEST_CASE("flat patch surface rules")
{
  const TrimmedPatch flat(flat_square(5.0));
  CHECK(integrate_surface_rule(surface_rule(flat, 3, 3), one3) == Approx(1.0).epsilon(1e-14));
  CHECK(integrate_surface_rule(surface_rule(flat, 3, 3, WeightMode::z_normal), one3) == Approx(1.0).epsilon(1e-14));
  const auto stretched = flat.transformed(Eigen::Vector3d(2, 1, 1).asDiagonal().toDenseMatrix(), Vec3::Zero());
  CHECK(integrate_surface_rule(surface_rule(stretched, 3, 3), one3) == Approx(2.0).epsilon(1e-13));

  const auto tensor = untrimmed_rule(flat_square(), 3);
  CHECK(tensor.size() == 9);
  double total = 0.0;
  for(double w : tensor.weights)
  {
    total += w;
  }
  CHECK(total == Approx(1.0).epsilon(1e-15));
}

TEST_CASE("tensor rule equals the explicit square-loop rule")
{
  std::mt19937_64 rng(101);
  const auto f = [](double x, double y, double z) { return std::exp(0.5 * x) * std::cos(y + z); };
  for(int trial = 0; trial < 5; ++trial)
  {
    const auto patch = testmodels::random_bicubic(rng, trial % 2 == 1);
    const int n = 8 + trial;
    const TrimmedPatch explicit_square(patch, {unit_square_loop()});
    const auto tensor = untrimmed_rule(patch, n);
    const auto green = surface_rule(explicit_square, n, n);
    CHECK(tensor.size() == static_cast<std::size_t>(n * n));
    CHECK(green.size() == static_cast<std::size_t>(4 * n * n));
    CHECK(integrate_surface_rule(green, f) == Approx(integrate_surface_rule(tensor, f)).epsilon(1e-12));
  }
}

TEST_CASE("trimmed surface integral against a smooth reference")
{
  std::mt19937_64 rng(7);
  const auto patch = testmodels::random_bicubic(rng);
  const TrimmedPatch full(patch, {unit_square_loop()});
  const auto f = [](double x, double y, double) { return 1.0 + x * y; };
  CHECK(integrate_surface_rule(surface_rule(full, 20, 20), f) ==
        Approx(tensor_reference(patch, f, 40)).epsilon(1e-12));

  const TrimmedPatch disk(flat_square(), {testmodels::circle_loop(0.5, 0.5, 0.5)});
  CHECK(integrate_surface_rule(surface_rule(disk, 12, 12), one3) == Approx(pi / 4).epsilon(1e-12));
}

TEST_CASE("full-normal weights are nonnegative and preimages stay in the square")
{
  std::mt19937_64 rng(15);
  const auto patch = testmodels::random_bicubic(rng, true);
  const TrimmedPatch tp(patch, {testmodels::circle_loop(0.5, 0.5, 0.45)});
  const auto rule = surface_rule(tp, 6, 6);
  const auto area = parametric_area_rule(tp.trim_loops(), 6, 6);
  REQUIRE(rule.params.size() == rule.size());
  for(std::size_t l = 0; l < rule.size(); ++l)
  {
    CHECK(rule.params[l].x() >= 0.0);
    CHECK(rule.params[l].x() <= 1.0);
    CHECK(rule.params[l].y() >= 0.0);
    CHECK(rule.params[l].y() <= 1.0);
    if(area.weights[l] >= 0.0)
    {
      CHECK(rule.weights[l] >= 0.0);
    }
    CHECK((rule.points[l] - patch.eval(rule.params[l].x(), rule.params[l].y())).norm() < 1e-14);
  }
}

TEST_CASE("cube surface integrals")
{
  const auto cube = testmodels::unit_cube();
  CHECK(surface_integrate(cube.patches, one3, 3, 3) == Approx(6.0).epsilon(1e-12));
  CHECK(surface_integrate(cube.patches, [](double, double, double z) { return z; }, 3, 3) == Approx(3.0).epsilon(1e-12));
  CHECK(surface_integrate(std::span<const TrimmedPatch>{}, one3, 3, 3) == 0.0);
  CHECK(surface_rule_all(cube.patches, 2, 3).size() == 6 * 9);
}

TEST_CASE("cylinder lateral surface and caps")
{
  const auto cyl = testmodels::capped_cylinder();
  const auto rule = surface_rule_all(cyl.patches, 16, 16);
  // lateral 2 pi plus two unit disks
  CHECK(integrate_surface_rule(rule, one3) == Approx(4 * pi).epsilon(1e-10));
  CHECK(rule.degenerate_normals == 0);
}

TEST_CASE("degenerate normals get zero weight and a warning")
{
  const auto collapsed = testmodels::bilinear({0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 1, 0});
  Diagnostics diag;
  // Gauss nodes never reach the collapsed edge
  const auto rule = surface_rule(TrimmedPatch(collapsed), 3, 3, WeightMode::full_normal, 0, &diag);
  CHECK(rule.degenerate_normals == 0);
  const auto point = testmodels::bilinear({1, 1, 1}, {1, 1, 1}, {1, 1, 1}, {1, 1, 1});
  const auto zero = surface_rule(TrimmedPatch(point), 3, 3, WeightMode::full_normal, 0, &diag);
  CHECK(zero.degenerate_normals == zero.size());
  for(double w : zero.weights)
  {
    CHECK(w == 0.0);
  }
  CHECK_FALSE(diag.warnings.empty());
}

TEST_CASE("trim loop validation")
{
  CHECK_THROWS_AS(TrimmedPatch(flat_square(), {testmodels::circle_loop(0.5, 0.5, 0.6)}), ValidationError);
  auto open = unit_square_loop();
  open.pop_back();
  CHECK_THROWS_AS(TrimmedPatch(flat_square(), {open}), ValidationError);
  CHECK_THROWS_AS(TrimmedPatch(flat_square(), {Loop{}}), ValidationError);
}

TEST_CASE("flipping a patch negates z-normal weights")
{
  std::mt19937_64 rng(4);
  const TrimmedPatch tp(testmodels::random_bicubic(rng), {testmodels::circle_loop(0.5, 0.5, 0.4)});
  const auto f = [](double x, double y, double z) { return 1 + x + y * z; };
  const double a = integrate_surface_rule(surface_rule(tp, 20, 20, WeightMode::z_normal), f);
  const double b = integrate_surface_rule(surface_rule(tp.flipped(), 20, 20, WeightMode::z_normal), f);
  CHECK(b == Approx(-a).epsilon(1e-12));
  const double c = integrate_surface_rule(surface_rule(tp, 20, 20), f);
  const double d = integrate_surface_rule(surface_rule(tp.flipped(), 20, 20), f);
  CHECK(d == Approx(c).epsilon(1e-12));
}
