#include "kg/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace kg {

namespace {

void check_dim(int d) {
  if (d < 1 || d > kMaxDim)
    throw std::invalid_argument("dimension must be in [1," + std::to_string(kMaxDim) + "]");
}

void check_same_dim(const Point& a, const Point& b) {
  if (a.d != b.d) throw std::invalid_argument("dimension mismatch");
}



}  // namespace

Point make_point(double t, double x, double v) {
  Point z;
  z.t = t;
  z.x[0] = x;
  z.v[0] = v;
  z.d = 1;
  return z;
}

Point make_point(double t, std::span<const double> x, std::span<const double> v) {
  if (x.size() != v.size() || x.empty()) throw std::invalid_argument("x and v must have equal size >= 1");
  check_dim(static_cast<int>(x.size()));
  Point z;
  z.t = t;
  z.d = static_cast<int>(x.size());
  for (int i = 0; i < z.d; ++i) {
    z.x[i] = x[i];
    z.v[i] = v[i];
  }
  return z;
}

Point compose(const Point& a, const Point& b) {
  check_same_dim(a, b);
  Point z;
  z.d = a.d;
  z.t = a.t + b.t;
  for (int i = 0; i < a.d; ++i) {
    z.x[i] = a.x[i] + b.x[i] + b.t * a.v[i];
    z.v[i] = a.v[i] + b.v[i];
  }
  return z;
}

Point inverse(const Point& a) {
  Point z;
  z.d = a.d;
  z.t = -a.t;
  for (int i = 0; i < a.d; ++i) {
    z.x[i] = -a.x[i] + a.t * a.v[i];
    z.v[i] = -a.v[i];
  }
  return z;
}

Point dilate(double r, const Point& z) {
  if (r <= 0.0) throw std::invalid_argument("dilation factor must be positive");
  Point w;
  w.d = z.d;
  w.t = r * r * z.t;
  for (int i = 0; i < z.d; ++i) {
    w.x[i] = r * r * r * z.x[i];
    w.v[i] = r * z.v[i];
  }
  return w;
}

Cylinder make_cylinder(const Point& center, double r) {
  check_dim(center.d);
  if (!(r > 0.0)) throw std::invalid_argument("cylinder radius must be positive");
  if (center.t > 0.0) throw std::invalid_argument("cylinder center must satisfy t <= 0");
  return Cylinder{center, r};
}

double ball_volume(int d) {
  check_dim(d);
  // vol(B_1) recursion: vol(d) = vol(d-2) * 2 pi / d, vol(0) = 1, vol(1) = 2.
  switch (d) {
    case 1: return 2.0;
    case 2: return 3.14159265358979323846;
    case 3: return 4.0 / 3.0 * 3.14159265358979323846;
    default: return 0.0;
  }
}

double unit_cylinder_volume(int d) {
  double b = ball_volume(d);
  return b * b;
}

double volume(const Cylinder& q) {
  return std::pow(q.r, 4 * q.center.d + 2) * unit_cylinder_volume(q.center.d);
}

bool contains(const Cylinder& q, const Point& z) {
  check_same_dim(q.center, z);
  const int d = z.d;
  const double dt = z.t - q.center.t;
  const double r2 = q.r * q.r;
  if (!(dt > -r2 && dt <= 0.0)) return false;
  double dv2 = 0.0, dx2 = 0.0;
  for (int i = 0; i < d; ++i) {
    const double dvi = z.v[i] - q.center.v[i];
    dv2 += dvi * dvi;
    const double dxi = z.x[i] - q.center.x[i] - dt * q.center.v[i];
    dx2 += dxi * dxi;
  }
  const double r3 = r2 * q.r;
  return dv2 < r2 && dx2 < r3 * r3;
}

Cylinder five_q(const Cylinder& q) {
  if (q.center.t > 0.0) throw std::invalid_argument("five_q requires center t <= 0");
  const double tau = std::min(-q.center.t, 12.0 * q.r * q.r);
  Point shift;
  shift.d = q.center.d;
  shift.t = tau;
  return Cylinder{compose(q.center, shift), 5.0 * q.r};
}

bool intersects(const Cylinder& a, const Cylinder& b) {
  check_same_dim(a.center, b.center);
  const int d = a.center.d;
  const double alo = a.center.t - a.r * a.r, blo = b.center.t - b.r * b.r;
  const double tlo = std::max(alo, blo);
  const double thi = std::min(a.center.t, b.center.t);
  if (!(tlo < thi)) return false;

  std::array<double, kMaxDim> u{}, w{};
  double uu = 0.0, wu = 0.0;
  for (int i = 0; i < d; ++i) {
    u[i] = a.center.v[i] - b.center.v[i];
    w[i] = (a.center.x[i] - a.center.t * a.center.v[i]) -
           (b.center.x[i] - b.center.t * b.center.v[i]);
    uu += u[i] * u[i];
    wu += w[i] * u[i];
  }
  if (!(std::sqrt(uu) < a.r + b.r)) return false;

  double tstar = (uu > 0.0) ? std::clamp(-wu / uu, tlo, thi) : tlo;
  double dist2 = 0.0;
  for (int i = 0; i < d; ++i) {
    const double c = w[i] + tstar * u[i];
    dist2 += c * c;
  }
  const double rsum = a.r * a.r * a.r + b.r * b.r * b.r;
  return dist2 < rsum * rsum;
}

bool contained_in(const Cylinder& inner, const Cylinder& outer) {
  check_same_dim(inner.center, outer.center);
  const int d = inner.center.d;
  const double ilo = inner.center.t - inner.r * inner.r;
  const double olo = outer.center.t - outer.r * outer.r;
  if (!(ilo >= olo && inner.center.t <= outer.center.t)) return false;

  double dv2 = 0.0;
  for (int i = 0; i < d; ++i) {
    const double dvi = inner.center.v[i] - outer.center.v[i];
    dv2 += dvi * dvi;
  }
  const double vr = outer.r - inner.r;
  if (vr < 0.0 || dv2 > vr * vr) return false;

  // |c_in(t) - c_out(t)| is the norm of an affine function of t; its max over
  // the inner time slab is attained at a slab endpoint.
  const double xr = outer.r * outer.r * outer.r - inner.r * inner.r * inner.r;
  if (xr < 0.0) return false;
  for (double t : {ilo, inner.center.t}) {
    double dist2 = 0.0;
    for (int i = 0; i < d; ++i) {
      const double ci = inner.center.x[i] + (t - inner.center.t) * inner.center.v[i];
      const double co = outer.center.x[i] + (t - outer.center.t) * outer.center.v[i];
      dist2 += (ci - co) * (ci - co);
    }
    if (dist2 > xr * xr) return false;
  }
  return true;
}

Box bounding_box(const Cylinder& q) {
  Box b;
  const int d = q.center.d;
  b.d = d;
  const double r2 = q.r * q.r, r3 = r2 * q.r;
  b.lo[0] = q.center.t - r2;
  b.hi[0] = q.center.t;
  // The x-section center sweeps the segment from x0 - r^2 v0 to x0.
  for (int i = 0; i < d; ++i) {
    const double c0 = q.center.x[i] - r2 * q.center.v[i];
    const double c1 = q.center.x[i];
    b.lo[1 + i] = std::min(c0, c1) - r3;
    b.hi[1 + i] = std::max(c0, c1) + r3;
    b.lo[1 + d + i] = q.center.v[i] - q.r;
    b.hi[1 + d + i] = q.center.v[i] + q.r;
  }
  return b;
}

namespace {

// Uniform draw from the open unit ball of R^d (rejection from the cube).
void ball_sample(int d, RngStream& rng, std::array<double, kMaxDim>& out) {
  for (;;) {
    double s2 = 0.0;
    for (int i = 0; i < d; ++i) {
      out[i] = 2.0 * rng.next() - 1.0;
      s2 += out[i] * out[i];
    }
    if (s2 < 1.0) return;
  }
}

}  // namespace

Point sample_point(const Cylinder& q, RngStream& rng) {
  const int d = q.center.d;
  Point z;
  z.d = d;
  const double r2 = q.r * q.r, r3 = r2 * q.r;
  const double dt = -r2 * rng.next();  // in (-r^2, 0]
  z.t = q.center.t + dt;
  std::array<double, kMaxDim> bx{}, bv{};
  ball_sample(d, rng, bx);
  ball_sample(d, rng, bv);
  for (int i = 0; i < d; ++i) {
    z.x[i] = q.center.x[i] + dt * q.center.v[i] + r3 * bx[i];
    z.v[i] = q.center.v[i] + q.r * bv[i];
  }
  return z;
}

Point sample_point(const Box& box, RngStream& rng) {
  Point z;
  z.d = box.d;
  z.t = rng.next(box.lo[0], box.hi[0]);
  for (int i = 0; i < box.d; ++i) {
    z.x[i] = rng.next(box.lo[1 + i], box.hi[1 + i]);
    z.v[i] = rng.next(box.lo[1 + box.d + i], box.hi[1 + box.d + i]);
  }
  return z;
}

double distance_v(const Point& a, const Point& b) {
  check_same_dim(a, b);
  double s = 0.0;
  for (int i = 0; i < a.d; ++i) s += (a.v[i] - b.v[i]) * (a.v[i] - b.v[i]);
  return std::sqrt(s);
}

}  // namespace kg
