#pragma once

#include <array>
#include <span>

#include "kg/rng.hpp"

namespace kg {

// Spatial dimension is a runtime parameter; 1 <= d <= kMaxDim.
constexpr int kMaxDim = 3;

// A point z = (t, x, v) of the kinetic phase space R x R^d x R^d.
struct Point {
  double t = 0.0;
  std::array<double, kMaxDim> x{};
  std::array<double, kMaxDim> v{};
  int d = 1;
};

Point make_point(double t, double x, double v);  // d = 1
Point make_point(double t, std::span<const double> x, std::span<const double> v);

// Group law z0 o z = (t0 + t, x0 + x + t v0, v0 + v).
Point compose(const Point& a, const Point& b);

// Group inverse: z^{-1} = (-t, -x + t v, -v), so compose(z, inverse(z)) = 0.
Point inverse(const Point& a);

// Anisotropic dilation (r^2 t, r^3 x, r v); a group automorphism.
Point dilate(double r, const Point& z);

// Backward cylinder of radius r centered at z0:
//   Q_r(z0) = { -r^2 < t - t0 <= 0,  |x - x0 - (t - t0) v0| < r^3,  |v - v0| < r }.
// The time slab is half-open at its top; the center must satisfy t0 <= 0.
struct Cylinder {
  Point center;
  double r = 1.0;
};

Cylinder make_cylinder(const Point& center, double r);

double ball_volume(int d);                // Lebesgue volume of the unit ball of R^d
double unit_cylinder_volume(int d);       // |Q_1| = ball_volume(d)^2
double volume(const Cylinder& q);         // r^{4d+2} |Q_1|

bool contains(const Cylinder& q, const Point& z);

// Expanded shifted cylinder 5Q_r(z0) = Q_{5r}(z0 o (tau, 0, 0)),
// tau = min(-t0, 12 r^2). Always a superset of Q_r(z0) and still in t <= 0.
Cylinder five_q(const Cylinder& q);

// Exact set intersection / containment tests. Both exploit that for each
// time t the section of a cylinder is a ball in x around the straight
// characteristic c(t) = x0 + (t - t0) v0 times a ball in v, so the tests
// reduce to interval arithmetic plus minimizing |c1(t) - c2(t)| (affine in t)
// over the closed time overlap.
bool intersects(const Cylinder& a, const Cylinder& b);
bool contained_in(const Cylinder& inner, const Cylinder& outer);

// Axis-aligned bounding box in coordinates (t, x_1..x_d, v_1..v_d).
// Axis 0 is t, axes 1..d are x, axes d+1..2d are v.
struct Box {
  std::array<double, 1 + 2 * kMaxDim> lo{};
  std::array<double, 1 + 2 * kMaxDim> hi{};
  int d = 1;
  int axes() const { return 1 + 2 * d; }
};

Box bounding_box(const Cylinder& q);

// Uniform sample from the interior of q (time coordinate lands in the
// half-open slab by construction).
Point sample_point(const Cylinder& q, RngStream& rng);

// Uniform sample from the interior of an axis-aligned box.
Point sample_point(const Box& box, RngStream& rng);

double distance_v(const Point& a, const Point& b);  // |v_a - v_b|

}  // namespace kg
