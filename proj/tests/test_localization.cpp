#include <stdexcept>
#include <array>
#include <cmath>

#include "doctest.h"
#include "kg/geometry.hpp"
#include "kg/grid_field.hpp"
#include "kg/localization.hpp"
#include "kg/rng.hpp"

using namespace kg;

TEST_CASE("cutoff value at frozen points") {
  const Point o = make_point(0, 0, 0);
  CHECK(zeta(o, 2.0) == doctest::Approx(0.2).epsilon(1e-14));
  // First term vanishes on the velocity wall.
  CHECK(zeta(make_point(-1.0, 0.0, 2.0), 2.0) == 0.0);
  CHECK(zeta(make_point(-1.0, 0.0, -2.0), 2.0) == 0.0);
  // Outside the time slab.
  CHECK(zeta(make_point(-4.5, 0.0, 0.0), 2.0) == 0.0);
  // gamma/5 is a global upper bound.
  RngStream rng(43, 10);
  for (int k = 0; k < 20000; ++k) {
    Point z;
    z.d = 1;
    z.t = rng.next(-5, 1);
    z.x[0] = rng.next(-9, 9);
    z.v[0] = rng.next(-3, 3);
    CHECK(zeta(z, 2.0) <= 2.0 / 5.0 + 1e-15);
  }
}

TEST_CASE("cutoff lower bound on the unit cylinder") {
  CHECK(c_gamma(2.0) == doctest::Approx(0.1).epsilon(1e-14));
  CHECK_THROWS_AS((void)c_gamma(1.0), std::invalid_argument);
  RngStream rng(47, 11);
  const Cylinder q1 = make_cylinder(make_point(0, 0, 0), 1.0);
  double zmin = 1e300;
  for (int k = 0; k < 100000; ++k) zmin = std::min(zmin, zeta(sample_point(q1, rng), 2.0));
  CHECK(zmin >= c_gamma(2.0) - 1e-14);
}

TEST_CASE("localized value at the origin for the constant field") {
  LocalizationContext ctx;
  ctx.d = 1;
  ctx.q = 2.0;
  ctx.gamma = 2.0;
  ctx.c0 = std::pow(2.0, 6.0 / 2.0);
  ctx.gnorm = 16.0;  // exact L^2 norm of 1 over the radius-2 cylinder, |Q_2| = 256
  const double got = localize_value(1.0, make_point(0, 0, 0), ctx);
  CHECK(got == doctest::Approx(1.25e-4).epsilon(1e-12));
}

TEST_CASE("localization context from a grid matches the analytic norm") {
  const Cylinder q2 = make_cylinder(make_point(0, 0, 0), 2.0);
  GridField g(bounding_box(q2), std::array<int, 3>{48, 48, 48});
  g.fill([](const Point&) { return 1.0; });
  const LocalizationContext ctx = make_localization(g, 2.0, 2.0);
  CHECK(ctx.c0 == doctest::Approx(8.0).epsilon(1e-14));
  // Aligned box: the quadrature volume of Q_2 is exact, so gnorm = 16.
  CHECK(ctx.gnorm == doctest::Approx(16.0).epsilon(1e-12));
  const GridField gb = localize(g, ctx);
  // Nearest cell to the origin sits half a cell inside; compare against the
  // exact formula evaluated at that cell center.
  const std::array<int, 3> idx{47, 24, 24};
  const Point zc = g.cell_point(idx);
  const double want = localize_value(1.0, zc, ctx);
  CHECK(gb[gb.flatten(idx)] == doctest::Approx(want).epsilon(1e-13));
}

TEST_CASE("zero field localizes to zero and zero norm throws") {
  const Cylinder q2 = make_cylinder(make_point(0, 0, 0), 2.0);
  GridField g(bounding_box(q2), std::array<int, 3>{12, 12, 12});
  g.fill([](const Point&) { return 0.0; });
  CHECK_THROWS((void)make_localization(g, 2.0, 2.0));
}

TEST_CASE("normalization saturation bound: zeta stays below twice the radius") {
  // Core of the localized normalization: for admissible radii
  // r > (2/3) zeta(z0) and z in Q_r(z0) inside Q_gamma, zeta(z) <= 2r,
  // which makes |Q_zeta|^{1/q}/C0 <= |Q_r|^{1/q} and the cylinder average
  // of gbold^q collapse to a mass ratio bounded by one.
  RngStream rng(53, 12);
  const double gamma = 2.0;
  const Cylinder qg = make_cylinder(make_point(0, 0, 0), gamma);
  int used = 0;
  while (used < 10000) {
    const Point z0 = sample_point(qg, rng);
    const double z0c = zeta(z0, gamma);
    if (z0c <= 1e-6) continue;
    const double r = rng.next((2.0 / 3.0) * z0c * 1.0000001, 2.0 * z0c);
    if (!contained_in(make_cylinder(z0, r), qg)) continue;
    ++used;
    const Point z = sample_point(make_cylinder(z0, r), rng);
    CHECK(zeta(z, gamma) <= 2.0 * r + 1e-12);
  }
}

TEST_CASE("lipschitz bound in the kinetic gauge") {
  RngStream rng(59, 13);
  const double gamma = 2.0;
  const Cylinder qg = make_cylinder(make_point(0, 0, 0), gamma);
  int used = 0;
  while (used < 20000) {
    const Point z0 = sample_point(qg, rng);
    const double z0c = zeta(z0, gamma);
    if (z0c <= 1e-6) continue;
    const double r = rng.next(1e-4, 2.0 * z0c);
    const Cylinder q = make_cylinder(z0, r);
    if (!contained_in(q, qg)) continue;
    ++used;
    const Point z = sample_point(q, rng);
    CHECK(std::abs(zeta(z, gamma) - z0c) <= r / 2.0 + 1e-12);
  }
}
