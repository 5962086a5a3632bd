#include <stdexcept>
#include <array>
#include <cmath>

#include "doctest.h"
#include "kg/constants.hpp"
#include "kg/geometry.hpp"
#include "kg/grid_field.hpp"
#include "kg/reverse_holder.hpp"

using namespace kg;

namespace {

GridField constant_field(double c) {
  const Box box = bounding_box(make_cylinder(make_point(0, 0, 0), 2.0));
  const std::array<int, 3> shape{40, 160, 40};
  GridField g(box, shape);
  g.fill([&](const Point&) { return c; });
  return g;
}

}  // namespace

TEST_CASE("constant field saturates the inequality with b = 1 - theta") {
  const GridField g = constant_field(3.0);
  const GridField h = constant_field(0.0);

  const ScanReport r0 = reverse_holder_scan(g, h, 2.0, 2.0, 60, 7, 0.0);
  CHECK(r0.degenerate == 0);
  CHECK(r0.samples.size() == 60);
  CHECK(r0.b_fit == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(r0.worst < r0.samples.size());
  const ScanSample& w = r0.samples[r0.worst];
  CHECK((w.A - r0.theta * w.G) / (w.M + w.H) == doctest::Approx(r0.b_fit));

  const ScanReport r1 = reverse_holder_scan(g, h, 2.0, 2.0, 60, 7, 0.25);
  CHECK(r1.b_fit == doctest::Approx(0.75).epsilon(1e-12));

  // Supplied-b audit: comfortably above the fit -> clean; half of it -> every
  // sample violates.
  const ScanReport ok = reverse_holder_scan(g, h, 2.0, 2.0, 60, 7, 0.0, 1.0000001);
  CHECK(ok.checked);
  CHECK(ok.b_supplied == doctest::Approx(1.0000001));
  CHECK(ok.violations == 0);
  const ScanReport bad = reverse_holder_scan(g, h, 2.0, 2.0, 60, 7, 0.0, 0.5);
  CHECK(bad.violations == bad.samples.size());
}

TEST_CASE("scan is deterministic and self-consistent on a structured field") {
  const Box box = bounding_box(make_cylinder(make_point(0, 0, 0), 2.0));
  const std::array<int, 3> shape{40, 160, 40};
  GridField g(box, shape);
  g.fill([](const Point& z) {
    return 0.4 + 5.0 * std::exp(-3.0 * ((z.t + 1.5) * (z.t + 1.5) + z.x[0] * z.x[0] +
                                        z.v[0] * z.v[0]));
  });
  GridField h = g;
  for (auto& x : h.values()) x = 0.0;

  const ScanReport a = reverse_holder_scan(g, h, 2.0, 2.0, 80, 42, 0.0);
  const ScanReport b = reverse_holder_scan(g, h, 2.0, 2.0, 80, 42, 0.0);
  CHECK(a.b_fit == b.b_fit);
  CHECK(a.worst == b.worst);
  CHECK(a.degenerate == 0);
  CHECK(a.b_fit > 0.0);
  CHECK(a.r_min < a.r_max);
  CHECK(a.r_max <= 1.0);

  // Auditing with the fitted b itself (nudged for rounding) reports no
  // violations on the same sample set.
  const ScanReport c =
      reverse_holder_scan(g, h, 2.0, 2.0, 80, 42, 0.0, a.b_fit * (1.0 + 1e-12));
  CHECK(c.violations == 0);
}

TEST_CASE("scan rejects bad parameters and degenerate inputs") {
  const GridField g = constant_field(1.0);
  const GridField z = constant_field(0.0);
  CHECK_THROWS_AS((void)reverse_holder_scan(g, g, 0.5, 2.0, 10, 1), std::domain_error);
  CHECK_THROWS_AS((void)reverse_holder_scan(g, g, 2.0, 1.0, 10, 1), std::domain_error);
  CHECK_THROWS_AS((void)reverse_holder_scan(g, g, 2.0, 2.0, 10, 1, 1.0), std::domain_error);
  CHECK_THROWS_AS((void)reverse_holder_scan(g, g, 2.0, 2.0, 0, 1), std::invalid_argument);
  CHECK_THROWS_AS((void)reverse_holder_scan(z, z, 2.0, 2.0, 10, 1), std::runtime_error);

  // A grid too coarse to resolve any admissible cylinder is refused.
  const Box box = bounding_box(make_cylinder(make_point(0, 0, 0), 2.0));
  const std::array<int, 3> tiny{8, 8, 8};
  GridField coarse(box, tiny);
  coarse.fill([](const Point&) { return 1.0; });
  CHECK_THROWS_AS((void)reverse_holder_scan(coarse, coarse, 2.0, 2.0, 10, 1), std::domain_error);
}

TEST_CASE("conclusion check on a constant field gives ratio 1/CG") {
  const GridField g = constant_field(3.0);
  const GridField h = constant_field(0.0);
  GehringParams prm;
  const ConstantsReport cr = compute_constants_midpoint(prm);
  const GehringCheckReport rep = gehring_check(g, h, prm, cr.p, cr.C_G.value);
  CHECK(rep.pass);
  CHECK(rep.lhs == doctest::Approx(3.0).epsilon(1e-10));
  CHECK(rep.ratio == doctest::Approx(1.0 / cr.C_G.value).epsilon(1e-9));

  CHECK_THROWS_AS((void)gehring_check(g, h, prm, prm.q - 0.1, cr.C_G.value), std::domain_error);
  CHECK_THROWS_AS(
      (void)gehring_check(g, h, prm, prm.q + p_star_lemma_minus_q(prm), cr.C_G.value),
      std::domain_error);
  CHECK_THROWS_AS((void)gehring_check(g, h, prm, cr.p, 0.0), std::invalid_argument);
}
