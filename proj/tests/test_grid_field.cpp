#include <stdexcept>
#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>

#include "doctest.h"
#include "kg/geometry.hpp"
#include "kg/grid_field.hpp"
#include "kg/rng.hpp"

using namespace kg;

namespace {
GridField unit_grid(int n) {
  const Cylinder q1 = make_cylinder(make_point(0, 0, 0), 1.0);
  return GridField(bounding_box(q1), std::array<int, 3>{n, n, n});
}
}  // namespace

TEST_CASE("fill and cell geometry round-trip") {
  GridField g = unit_grid(8);
  CHECK(g.size() == 512);
  CHECK(g.cell_width(0) == doctest::Approx(1.0 / 8.0));
  CHECK(g.cell_width(1) == doctest::Approx(2.0 / 8.0));
  CHECK(g.cell_volume() == doctest::Approx((1.0 / 8) * (2.0 / 8) * (2.0 / 8)));
  g.fill([](const Point& z) { return z.t + 10.0 * z.x[0] + 100.0 * z.v[0]; });
  const std::array<int, 3> idx{3, 4, 5};
  const Point z = g.cell_point(idx);
  CHECK(g[g.flatten(idx)] == doctest::Approx(z.t + 10.0 * z.x[0] + 100.0 * z.v[0]));
  CHECK(g.value_at(z) == doctest::Approx(g[g.flatten(idx)]));
}

TEST_CASE("aligned cylinder integrates exactly") {
  GridField g = unit_grid(16);
  g.fill([](const Point&) { return 1.0; });
  const Cylinder q1 = make_cylinder(make_point(0, 0, 0), 1.0);
  CHECK(integrate(g, q1) == doctest::Approx(4.0).epsilon(1e-13));
  CHECK(average(g, q1) == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("second moment of velocity over the unit cylinder") {
  GridField g = unit_grid(64);
  g.fill([](const Point& z) { return z.v[0]; });
  const Cylinder q1 = make_cylinder(make_point(0, 0, 0), 1.0);
  // Average of v^2 over (-1,1) is 1/3; the quadrature error is O(n^-2).
  CHECK(average_pow(g, 2.0, q1) == doctest::Approx(1.0 / 3.0).epsilon(1e-3));
  CHECK(lp_norm(g, 2.0, q1) ==
        doctest::Approx(std::sqrt(4.0 / 3.0)).epsilon(1e-3));
}

TEST_CASE("visit_cells matches the membership predicate cell by cell") {
  GridField g = unit_grid(24);
  g.fill([](const Point&) { return 1.0; });
  RngStream rng(31, 7);
  const Cylinder q1 = make_cylinder(make_point(0, 0, 0), 1.0);
  for (int k = 0; k < 25; ++k) {
    const Point z0 = sample_point(q1, rng);
    const Cylinder q = make_cylinder(z0, rng.next(0.1, 0.5));
    if (!contained_in(q, q1)) continue;
    std::size_t visited = 0;
    visit_cells(g, q, [&](std::size_t) { ++visited; });
    std::size_t brute = 0;
    std::array<int, 3> idx{0, 0, 0};
    for (idx[0] = 0; idx[0] < 24; ++idx[0]) {
      for (idx[1] = 0; idx[1] < 24; ++idx[1]) {
        for (idx[2] = 0; idx[2] < 24; ++idx[2]) {
          if (contains(q, g.cell_point(idx))) ++brute;
        }
      }
    }
    CHECK(visited == brute);
  }
}

TEST_CASE("interpolation reproduces multilinear fields between centers") {
  GridField g = unit_grid(10);
  g.fill([](const Point& z) { return 2.0 * z.t - 3.0 * z.x[0] + 0.5 * z.v[0] + 7.0; });
  RngStream rng(37, 8);
  const Cylinder q1 = make_cylinder(make_point(0, 0, 0), 1.0);
  for (int k = 0; k < 200; ++k) {
    // Stay away from the clamped edge band where extrapolation is frozen.
    Point z = sample_point(make_cylinder(make_point(0, 0, 0), 0.8), rng);
    z.t -= 0.05;
    if (z.t <= -0.95) continue;
    CHECK(g.value_interp(z) ==
          doctest::Approx(2.0 * z.t - 3.0 * z.x[0] + 0.5 * z.v[0] + 7.0).epsilon(1e-12));
  }
  (void)q1;
}

TEST_CASE("binary round-trip is bit exact") {
  GridField g = unit_grid(6);
  RngStream rng(41, 9);
  for (auto& x : g.values()) x = rng.next(-5.0, 5.0);
  const std::string path = "/tmp/kg_roundtrip_test.kgf";
  g.write_binary(path);
  const GridField h = GridField::read_binary(path);
  REQUIRE(h.size() == g.size());
  CHECK(h.box().lo[0] == g.box().lo[0]);
  CHECK(h.box().hi[2] == g.box().hi[2]);
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(h[i] == g[i]);
  std::filesystem::remove(path);
}

TEST_CASE("cell sums reject cylinders that poke outside the grid") {
  GridField g = unit_grid(8);
  g.fill([](const Point&) { return 1.0; });
  const Cylinder stick_out = make_cylinder(make_point(0.0, 0.5, 0.0), 1.0);
  CHECK_THROWS_AS((void)integrate(g, stick_out), std::domain_error);
}
