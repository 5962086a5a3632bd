#include <cmath>
#include <numbers>
#include <numeric>
#include <vector>

#include "doctest.h"
#include "kg/bogovskii.hpp"

using namespace kg;

namespace {

std::vector<double> sine_source(const BogovskiiProblem& p) {
  std::vector<double> g(static_cast<std::size_t>(p.nt) * p.nx);
  const double dt = (p.t_hi - p.t_lo) / p.nt, dx = (p.x_hi - p.x_lo) / p.nx;
  for (int it = 0; it < p.nt; ++it) {
    for (int ix = 0; ix < p.nx; ++ix) {
      const double t = p.t_lo + (it + 0.5) * dt, x = p.x_lo + (ix + 0.5) * dx;
      const double lt = (t - p.t_lo) / (p.t_hi - p.t_lo);
      const double lx = (x - p.x_lo) / (p.x_hi - p.x_lo);
      g[static_cast<std::size_t>(it) * p.nx + ix] =
          std::sin(2.0 * std::numbers::pi * lt) * std::cos(2.0 * std::numbers::pi * lx);
    }
  }
  return g;
}

double divergence_residual(const BogovskiiProblem& p, const BogovskiiResult& r,
                           const std::vector<double>& g) {
  double num = 0.0, den = 0.0;
  for (int it = 0; it < p.nt; ++it) {
    for (int ix = 0; ix < p.nx; ++ix) {
      const std::size_t c = static_cast<std::size_t>(it) * p.nx + ix;
      const double div =
          (r.ht[static_cast<std::size_t>(it + 1) * p.nx + ix] -
           r.ht[static_cast<std::size_t>(it) * p.nx + ix]) /
              r.dt +
          (r.hx[static_cast<std::size_t>(it) * (p.nx + 1) + ix + 1] -
           r.hx[static_cast<std::size_t>(it) * (p.nx + 1) + ix]) /
              r.dx;
      num += (div - g[c]) * (div - g[c]);
      den += g[c] * g[c];
    }
  }
  return std::sqrt(num / den);
}

}  // namespace

TEST_CASE("zero source yields the zero field") {
  BogovskiiProblem p;
  p.nt = p.nx = 24;
  const std::vector<double> g(static_cast<std::size_t>(p.nt) * p.nx, 0.0);
  const BogovskiiResult r = bogovskii_solve(p, g);
  for (double v : r.ht) CHECK(v == 0.0);
  for (double v : r.hx) CHECK(v == 0.0);
  CHECK(r.h_norm == 0.0);
}

TEST_CASE("separable sine source: residual, boundary, independent audit") {
  BogovskiiProblem p;
  p.t_lo = -1.0;
  p.t_hi = 0.0;
  p.x_lo = -2.0;
  p.x_hi = 2.0;
  p.nt = p.nx = 48;
  const std::vector<double> g = sine_source(p);
  const double mean = std::accumulate(g.begin(), g.end(), 0.0) / static_cast<double>(g.size());
  REQUIRE(std::abs(mean) < 1e-12);

  const BogovskiiResult r = bogovskii_solve(p, g);
  CHECK(r.residual < 1e-9);
  CHECK(divergence_residual(p, r, g) < 1e-8);

  // Every outer face is exactly zero, not merely small.
  for (int ix = 0; ix < p.nx; ++ix) {
    CHECK(r.ht[ix] == 0.0);
    CHECK(r.ht[static_cast<std::size_t>(p.nt) * p.nx + ix] == 0.0);
  }
  for (int it = 0; it < p.nt; ++it) {
    CHECK(r.hx[static_cast<std::size_t>(it) * (p.nx + 1)] == 0.0);
    CHECK(r.hx[static_cast<std::size_t>(it) * (p.nx + 1) + p.nx] == 0.0);
  }

  CHECK(r.stability > 0.0);
  CHECK(std::isfinite(r.stability));
  CHECK(r.g_norm > 0.0);
  CHECK(r.grad_norm > 0.0);
}

TEST_CASE("nonzero-mean sources are rejected") {
  BogovskiiProblem p;
  p.nt = p.nx = 16;
  std::vector<double> g(static_cast<std::size_t>(p.nt) * p.nx, 1.0);
  CHECK_THROWS((void)bogovskii_solve(p, g));
  g.resize(10);
  CHECK_THROWS((void)bogovskii_solve(p, g));
}

TEST_CASE("hashed noise source is reproducible and mean-free") {
  BogovskiiProblem p;
  p.nt = 20;
  p.nx = 28;
  const std::vector<double> a = random_mean_zero_source(p, 123);
  const std::vector<double> b = random_mean_zero_source(p, 123);
  const std::vector<double> c = random_mean_zero_source(p, 124);
  CHECK(a == b);
  CHECK(a != c);
  const double mean = std::accumulate(a.begin(), a.end(), 0.0) / static_cast<double>(a.size());
  CHECK(std::abs(mean) < 1e-13);

  const BogovskiiResult r = bogovskii_solve(p, a);
  CHECK(r.residual < 1e-9);
  CHECK(divergence_residual(p, r, a) < 1e-8);
}

TEST_CASE("solve is linear in the source") {
  BogovskiiProblem p;
  p.nt = p.nx = 32;
  const std::vector<double> g = sine_source(p);
  std::vector<double> g5 = g;
  for (double& v : g5) v *= 5.0;
  const BogovskiiResult r1 = bogovskii_solve(p, g);
  const BogovskiiResult r5 = bogovskii_solve(p, g5);
  double scale = 0.0;
  for (const std::vector<double>& f : {r1.ht, r1.hx})
    for (double v : f) scale = std::max(scale, std::abs(v));
  REQUIRE(scale > 0.0);
  for (std::size_t i = 0; i < r1.ht.size(); ++i)
    CHECK(std::abs(r5.ht[i] - 5.0 * r1.ht[i]) < 1e-7 * scale);
  for (std::size_t i = 0; i < r1.hx.size(); ++i)
    CHECK(std::abs(r5.hx[i] - 5.0 * r1.hx[i]) < 1e-7 * scale);
  // The stability ratio is scale invariant.
  CHECK(r5.stability == doctest::Approx(r1.stability).epsilon(1e-9));
}

TEST_CASE("minimal-norm stability grows slowly under refinement") {
  // The least-norm potential of a rough source is not uniformly bounded in
  // W^{1,2} as the grid refines, so the discrete stability ratio drifts
  // upward. The suite therefore pins it at one resolution; here we only
  // document the monotone, modest growth.
  BogovskiiProblem p24, p48;
  p24.nt = p24.nx = 24;
  p48.nt = p48.nx = 48;
  const double s24 = bogovskii_solve(p24, sine_source(p24)).stability;
  const double s48 = bogovskii_solve(p48, sine_source(p48)).stability;
  CHECK(s24 > 1.0);
  CHECK(s48 > s24);
  CHECK(s48 < 1.5 * s24);
}
