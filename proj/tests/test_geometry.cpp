#include <cmath>
#include <numbers>

#include "doctest.h"
#include "kg/geometry.hpp"
#include "kg/rng.hpp"

using namespace kg;

TEST_CASE("group law on frozen triples") {
  const Point a = make_point(1.0, 2.0, 3.0);
  const Point b = make_point(4.0, 5.0, 6.0);
  const Point c = compose(a, b);
  CHECK(c.t == doctest::Approx(5.0).epsilon(1e-15));
  CHECK(c.x[0] == doctest::Approx(19.0).epsilon(1e-15));  // 2 + 5 + 4*3
  CHECK(c.v[0] == doctest::Approx(9.0).epsilon(1e-15));

  const Point ia = inverse(a);
  CHECK(ia.t == doctest::Approx(-1.0));
  CHECK(ia.x[0] == doctest::Approx(1.0));  // -2 + 1*3
  CHECK(ia.v[0] == doctest::Approx(-3.0));

  const Point e = compose(a, ia);
  CHECK(std::abs(e.t) < 1e-15);
  CHECK(std::abs(e.x[0]) < 1e-15);
  CHECK(std::abs(e.v[0]) < 1e-15);

  const Point dz = dilate(2.0, make_point(1.0, 1.0, 1.0));
  CHECK(dz.t == doctest::Approx(4.0));
  CHECK(dz.x[0] == doctest::Approx(8.0));
  CHECK(dz.v[0] == doctest::Approx(2.0));
}

TEST_CASE("group axioms hold on random triples") {
  RngStream rng(7, 1);
  for (int k = 0; k < 2000; ++k) {
    const int d = 1 + static_cast<int>(rng.next_bits() % 3);
    Point z1, z2, z3;
    z1.d = z2.d = z3.d = d;
    z1.t = rng.next(-2, 2);
    z2.t = rng.next(-2, 2);
    z3.t = rng.next(-2, 2);
    for (int i = 0; i < d; ++i) {
      z1.x[i] = rng.next(-3, 3);
      z1.v[i] = rng.next(-3, 3);
      z2.x[i] = rng.next(-3, 3);
      z2.v[i] = rng.next(-3, 3);
      z3.x[i] = rng.next(-3, 3);
      z3.v[i] = rng.next(-3, 3);
    }
    const Point lhs = compose(compose(z1, z2), z3);
    const Point rhs = compose(z1, compose(z2, z3));
    CHECK(std::abs(lhs.t - rhs.t) < 1e-12);
    for (int i = 0; i < d; ++i) {
      CHECK(std::abs(lhs.x[i] - rhs.x[i]) < 1e-11);
      CHECK(std::abs(lhs.v[i] - rhs.v[i]) < 1e-12);
    }
  }
}

TEST_CASE("cylinder volume closed forms") {
  CHECK(unit_cylinder_volume(1) == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(unit_cylinder_volume(2) == doctest::Approx(std::numbers::pi * std::numbers::pi));
  const Point o1 = make_point(0.0, 0.0, 0.0);
  CHECK(volume(make_cylinder(o1, 1.0)) == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(volume(make_cylinder(o1, 2.0)) == doctest::Approx(256.0).epsilon(1e-14));

  // r^{4d+2} law against independently assembled powers, d = 1..3.
  RngStream rng(11, 2);
  for (int k = 0; k < 200; ++k) {
    const int d = 1 + static_cast<int>(rng.next_bits() % 3);
    Point z;
    z.d = d;
    z.t = -rng.next(0.0, 2.0);
    const double r = rng.next(0.2, 2.0);
    const double want = std::pow(r, 4 * d + 2) * unit_cylinder_volume(d);
    CHECK(volume(make_cylinder(z, r)) == doctest::Approx(want).epsilon(1e-13));
  }
  // d = 3 coefficient: (4 pi / 3)^2 = 16 pi^2 / 9.
  CHECK(unit_cylinder_volume(3) ==
        doctest::Approx(16.0 * std::numbers::pi * std::numbers::pi / 9.0));
}

TEST_CASE("membership respects the kinetic dilation correspondence") {
  RngStream rng(13, 3);
  const Point o = make_point(0.0, 0.0, 0.0);
  const Cylinder q1 = make_cylinder(o, 1.0);
  for (int k = 0; k < 2000; ++k) {
    Point z0;
    z0.d = 1;
    z0.t = -rng.next(0.0, 1.5);
    z0.x[0] = rng.next(-2, 2);
    z0.v[0] = rng.next(-2, 2);
    const double r = rng.next(0.3, 1.7);
    const Point w = sample_point(q1, rng);
    // z0 o delta_r(w) must land in Q_r(z0) whenever w is in Q_1(0).
    CHECK(contains(make_cylinder(z0, r), compose(z0, dilate(r, w))));
  }
}

TEST_CASE("containment and intersection agree with sampling") {
  RngStream rng(17, 4);
  int contained_cases = 0;
  while (contained_cases < 300) {
    Point c1, c2;
    c1.d = c2.d = 1;
    c1.t = -rng.next(0.0, 1.0);
    c1.x[0] = rng.next(-1, 1);
    c1.v[0] = rng.next(-1, 1);
    c2.t = -rng.next(0.0, 1.0);
    c2.x[0] = rng.next(-1, 1);
    c2.v[0] = rng.next(-1, 1);
    const Cylinder a = make_cylinder(c1, rng.next(0.1, 0.6));
    const Cylinder b = make_cylinder(c2, rng.next(0.4, 1.5));
    if (!contained_in(a, b)) continue;
    ++contained_cases;
    CHECK(intersects(a, b));
    for (int s = 0; s < 50; ++s) {
      CHECK(contains(b, sample_point(a, rng)));
    }
  }
}

TEST_CASE("five_q covers its base cylinder in both time regimes") {
  RngStream rng(19, 5);
  for (int k = 0; k < 400; ++k) {
    Point c;
    c.d = 1;
    // Alternate between shallow centers (the top cap limits the shift) and
    // deep ones (the full kinetic shift applies).
    c.t = (k % 2 == 0) ? -rng.next(0.0, 0.05) : -rng.next(5.0, 9.0);
    c.x[0] = rng.next(-2, 2);
    c.v[0] = rng.next(-2, 2);
    const Cylinder q = make_cylinder(c, rng.next(0.2, 0.8));
    const Cylinder big = five_q(q);
    CHECK(big.r == doctest::Approx(5.0 * q.r));
    CHECK(big.center.t <= 0.0);
    for (int s = 0; s < 25; ++s) {
      CHECK(contains(big, sample_point(q, rng)));
    }
  }
}

TEST_CASE("sampled points satisfy the membership predicate") {
  RngStream rng(23, 6);
  for (int k = 0; k < 200; ++k) {
    Point c;
    c.d = 1 + static_cast<int>(rng.next_bits() % 3);
    c.t = -rng.next(0.0, 2.0);
    for (int i = 0; i < c.d; ++i) {
      c.x[i] = rng.next(-2, 2);
      c.v[i] = rng.next(-2, 2);
    }
    const Cylinder q = make_cylinder(c, rng.next(0.1, 1.5));
    for (int s = 0; s < 20; ++s) CHECK(contains(q, sample_point(q, rng)));
  }
}
