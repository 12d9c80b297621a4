#include "models.hpp"
#include "ratquad/volume.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace ratquad;
using doctest::Approx;
using std::numbers::pi;

namespace
{
const auto one = [](double, double, double) { return 1.0; };
}

TEST_CASE("antidifferentiation constant P_z")
{
  CHECK(solid_constant_Pz(testmodels::unit_cube()) == 0.0);
  CHECK(solid_constant_Pz(testmodels::unit_cube().translated(Vec3(0, 0, -2))) == -2.0);
  CHECK(solid_constant_Pz(testmodels::capped_cylinder()) == 0.0);
  CHECK_THROWS_AS(solid_constant_Pz(SolidModel{}), ValidationError);
}

TEST_CASE("cube volumes")
{
  const auto cube = testmodels::unit_cube();
  CHECK(volume_integrate(cube, one, 3, 3, 3) == Approx(1.0).epsilon(1e-12));
  CHECK(volume_integrate(cube, [](double x, double, double) { return x * x; }, 3, 3, 3) == Approx(1.0 / 3).epsilon(1e-12));
  CHECK(volume_integrate(cube, [](double x, double y, double z) { return x * y * z * z; }, 3, 3, 3) ==
        Approx(1.0 / 12).epsilon(1e-12));
  CHECK(volume_integrate(cube.flipped(), one, 3, 3, 3) == Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("rule layout")
{
  const auto cube = testmodels::unit_cube();
  const auto rule = volume_rule(cube, 2, 2, 5);
  CHECK(rule.size() == 6 * 4 * 5);
  REQUIRE(rule.sources.size() == rule.size());
  const auto box = control_bbox(cube);
  for(const auto& p : rule.points)
  {
    CHECK(box.contains(p, 1e-12));
  }
  CHECK(volume_rule(cube, 3, 3).size() == 6 * 9 * 3);
  SolidModel open = cube;
  open.closed = false;
  CHECK_THROWS_AS(volume_rule(open, 3, 3, 3), ValidationError);
  CHECK_THROWS_AS(volume_rule(cube, 3, 3, 0), ValidationError);
}

TEST_CASE("capped cylinder")
{
  const auto cyl = testmodels::capped_cylinder();
  CHECK(volume_integrate(cyl, one, 12, 12, 12) == Approx(pi).epsilon(1e-10));
  CHECK(volume_integrate(cyl, [](double, double, double z) { return z; }, 12, 12, 12) == Approx(pi / 2).epsilon(1e-10));
  // polar oracle: integral of x^2 + y^2 over the unit disk times height 1
  CHECK(volume_integrate(cyl, [](double x, double y, double) { return x * x + y * y; }, 12, 12, 12) ==
        Approx(pi / 2).epsilon(1e-10));
}

TEST_CASE("capped cylinder with a smooth non-polynomial integrand")
{
  // e^z cosh-like radial part: integral of e^z (x^2 + y^2 + 1) is (e - 1) * 3 pi / 2
  const auto cyl = testmodels::capped_cylinder();
  const auto f = [](double x, double y, double z) { return std::exp(z) * (x * x + y * y + 1); };
  CHECK(volume_integrate(cyl, f, 16, 16, 16) == Approx((std::numbers::e - 1) * 1.5 * pi).epsilon(1e-10));
}

TEST_CASE("coincident opposite patches cancel")
{
  SolidModel sheet;
  sheet.closed = true;
  const auto p = testmodels::bilinear({0, 0, 0.5}, {1, 0, 0.7}, {0, 1, 0.2}, {1, 1, 0.9});
  sheet.patches.emplace_back(p);
  sheet.patches.emplace_back(p.swapped_uv());
  CHECK(std::abs(volume_integrate(sheet, one, 4, 4, 4)) <= 1e-12);
}

TEST_CASE("P_z shift invariance")
{
  const auto cyl = testmodels::capped_cylinder();
  const auto f = [](double x, double y, double z) { return std::cos(x + z) + y * y; };
  const double base = volume_integrate(cyl, f, 12, 12, 12);
  for(double pz : {-1.0, -3.5, 2.0})
  {
    CHECK(volume_integrate(cyl, f, 12, 12, 12, pz) == Approx(base).epsilon(1e-10));
  }
}

TEST_CASE("divergence consistency")
{
  const auto cyl = testmodels::capped_cylinder();
  const double surface = surface_integrate(cyl.patches, [](double, double, double z) { return z; }, 12, 12, WeightMode::z_normal);
  CHECK(surface == Approx(volume_integrate(cyl, one, 12, 12, 12)).epsilon(1e-10));
}

TEST_CASE("translation in z shifts points only")
{
  const auto cyl = testmodels::capped_cylinder();
  const auto a = volume_rule(cyl, 6, 6, 4);
  const auto b = volume_rule(cyl.translated(Vec3(0, 0, 3)), 6, 6, 4);
  REQUIRE(a.size() == b.size());
  for(std::size_t l = 0; l < a.size(); ++l)
  {
    CHECK((b.points[l] - a.points[l] - Vec3(0, 0, 3)).norm() <= 1e-13);
    CHECK(std::abs(b.weights[l] - a.weights[l]) <= 1e-13);
  }
}
