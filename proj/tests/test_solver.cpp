#include <stdexcept>
#include <array>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "kg/geometry.hpp"
#include "kg/grid_field.hpp"
#include "kg/solver.hpp"

using namespace kg;

TEST_CASE("kernel frozen values and moment laws") {
  const double t = 0.5;
  // Peak value sqrt(3) / (2 pi t^2).
  CHECK(kolmogorov_kernel(t, 0.0, 0.0) ==
        doctest::Approx(std::numbers::sqrt3 / (2.0 * std::numbers::pi * t * t)).epsilon(1e-14));
  // Central symmetry.
  CHECK(kolmogorov_kernel(t, 0.4, -0.9) == doctest::Approx(kolmogorov_kernel(t, -0.4, 0.9)));
  CHECK_THROWS_AS((void)kolmogorov_kernel(0.0, 0.0, 0.0), std::domain_error);

  // Quadrature moments reproduce Var(v) = 2t, Var(x) = 2t^3/3, Cov = t^2.
  // The v window spans 7 standard deviations, so the truncated tail mass
  // (~3e-12) sits well inside the tolerances below.
  const int nq = 500;
  const double lx = 4.0, lv = 7.0;
  const double hx = 2.0 * lx / nq, hv = 2.0 * lv / nq;
  double m = 0, mx2 = 0, mv2 = 0, mxv = 0;
  for (int i = 0; i < nq; ++i) {
    for (int j = 0; j < nq; ++j) {
      const double x = -lx + (i + 0.5) * hx, v = -lv + (j + 0.5) * hv;
      const double w = kolmogorov_kernel(t, x, v) * hx * hv;
      m += w;
      mx2 += w * x * x;
      mv2 += w * v * v;
      mxv += w * x * v;
    }
  }
  CHECK(m == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(mv2 == doctest::Approx(2.0 * t).epsilon(1e-9));
  CHECK(mx2 == doctest::Approx(2.0 * t * t * t / 3.0).epsilon(1e-9));
  CHECK(mxv == doctest::Approx(t * t).epsilon(1e-9));
}

TEST_CASE("constant initial data is a fixed point without drift or source") {
  SolverProblem p;
  p.nt = 16;
  p.nx = 24;
  p.nv = 12;
  p.substeps = 2;
  p.initial = [](double, double) { return 1.0; };
  SolveStats st;
  const GridField f = solve_kfp(p, make_constant_coefficients(1.7), &st);
  for (std::size_t i = 0; i < f.size(); ++i) CHECK(f[i] == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(st.max_step_mass_drift < 1e-13);
}

TEST_CASE("spike benchmark reproduces the fundamental solution") {
  const int n = 64;
  const double T = 0.5;
  const SolverProblem p = kolmogorov_spike_problem(n, T);
  SolveStats st;
  const GridField f = solve_kfp(p, make_constant_coefficients(1.0), &st);
  const SliceMoments m = slice_moments(f, n - 1);
  CHECK(std::abs(m.var_v / (2.0 * T) - 1.0) < 0.03);
  CHECK(std::abs(m.var_x / (2.0 * T * T * T / 3.0) - 1.0) < 0.03);
  CHECK(std::abs(m.cov_xv / (T * T) - 1.0) < 0.03);
  CHECK(st.max_step_mass_drift <= 1e-12);
  CHECK(m.mass == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("semigroup property against the exact kernel") {
  // Start from the kernel at s = 1/2; the exact solution after elapsed time e
  // is the kernel at s = 1/2 + e. The initial slice then spans several cells
  // in every direction, so the discrete transport error stays small.
  const double s0 = 0.5;
  const int n = 96;
  SolverProblem p;
  p.t0 = -0.25;
  p.X = 2.0;
  p.V = 6.0;
  p.nt = p.nx = p.nv = n;
  p.substeps = 1;
  p.initial = [&](double x, double v) { return kolmogorov_kernel(s0, x, v); };
  const GridField f = solve_kfp(p, make_constant_coefficients(1.0), nullptr);
  const double dtau = -p.t0 / n;
  const double elapsed = (n - 0.5) * dtau;
  double num = 0.0, den = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double x = f.cell_center(1, i), v = f.cell_center(2, j);
      const double want = kolmogorov_kernel(s0 + elapsed, x, v);
      const double got = f[static_cast<std::size_t>(n - 1) * f.stride(0) +
                           static_cast<std::size_t>(i) * f.stride(1) + j];
      num += (got - want) * (got - want);
      den += want * want;
    }
  }
  CHECK(std::sqrt(num / den) < 0.02);
}

TEST_CASE("configuration errors are rejected") {
  SolverProblem p;
  p.nt = 8;
  p.nx = 8;
  p.nv = 8;
  p.initial = [](double, double) { return 0.0; };
  p.V = 100.0;  // transport CFL impossible at one substep
  p.substeps = 1;
  CHECK_THROWS((void)solve_kfp(p, make_constant_coefficients(1.0), nullptr));
  p.V = 1.0;
  p.nv = 2;  // too few velocity cells
  CHECK_THROWS((void)solve_kfp(p, make_constant_coefficients(1.0), nullptr));
  p.nv = 8;
  SolverProblem q = p;
  q.initial = nullptr;
  CHECK_THROWS((void)solve_kfp(q, make_constant_coefficients(1.0), nullptr));
  // Drift bound: |B| dt must stay below dv.
  CHECK_THROWS((void)solve_kfp(p, make_constant_coefficients(1.0, 50.0), nullptr));
}

TEST_CASE("velocity gradient is exact on linear profiles") {
  SolverProblem p;
  p.nt = 4;
  p.nx = 4;
  p.nv = 32;
  p.initial = [](double, double) { return 0.0; };
  const GridField f = sample_coefficient(p, [](const Point& z) { return 3.0 * z.v[0] + 1.0; });
  const GridField g = velocity_gradient(f);
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(g[i] == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("discrete kinetic scaling covariance") {
  // f solves the equation on D; fbar(z) = f(delta_r z) solves it on the
  // preimage with A(delta_r z) and source r^2 S(delta_r z). With matching
  // cell counts the two discretizations map cell-by-cell: same Courant
  // numbers, same diffusion numbers, so the fields agree to rounding.
  const double r = 0.5, r2 = r * r, r3 = r * r * r;
  const int n = 24;
  auto acoef = [](double t, double x, double v) {
    return 1.5 + 0.4 * std::sin(2.0 * t + 1.0) * std::cos(1.5 * x) * std::cos(0.7 * v);
  };
  auto scoef = [](double t, double x, double v) {
    return 0.3 * std::cos(t) * std::sin(2.0 * x) * std::cos(0.5 * v);
  };
  auto f0 = [](double x, double v) {
    return 1.0 + 0.5 * std::cos(0.8 * x) * std::cos(0.6 * v);
  };

  SolverProblem small;  // D = delta_r([-1,0] x [-1,1] x [-1,1])
  small.t0 = -r2;
  small.X = r3;
  small.V = r;
  small.nt = small.nx = small.nv = n;
  small.substeps = 2;
  small.initial = [&](double x, double v) { return f0(x / r3, v / r); };
  CoefficientField cs;
  cs.A = [&](const Point& z) { return acoef(z.t, z.x[0], z.v[0]); };
  cs.B = [](const Point&) { return 0.0; };
  cs.S = [&](const Point& z) { return scoef(z.t, z.x[0], z.v[0]); };

  SolverProblem big;  // the unit-scale preimage
  big.t0 = -1.0;
  big.X = 1.0;
  big.V = 1.0;
  big.nt = big.nx = big.nv = n;
  big.substeps = 2;
  big.initial = [&](double x, double v) { return f0(x, v); };
  CoefficientField cb;
  cb.A = [&](const Point& z) { return acoef(r2 * z.t, r3 * z.x[0], r * z.v[0]); };
  cb.B = [](const Point&) { return 0.0; };
  cb.S = [&](const Point& z) { return r2 * scoef(r2 * z.t, r3 * z.x[0], r * z.v[0]); };

  const GridField fs = solve_kfp(small, cs, nullptr);
  const GridField fb = solve_kfp(big, cb, nullptr);
  REQUIRE(fs.size() == fb.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < fs.size(); ++i) worst = std::max(worst, std::abs(fs[i] - fb[i]));
  CHECK(worst < 1e-11);

  // Averaged-gradient identity on matched cylinders:
  // avg over Q_rho(0) of |grad_v f|^2 = r^{-2} avg over Q_{rho/r}(0) of |grad_v fbar|^2.
  const GridField gs = velocity_gradient(fs);
  const GridField gb = velocity_gradient(fb);
  const Cylinder qs = make_cylinder(make_point(0, 0, 0), 0.4 * r);
  const Cylinder qb = make_cylinder(make_point(0, 0, 0), 0.4);
  const double lhs = average_pow(gs, 2.0, qs);
  const double rhs = average_pow(gb, 2.0, qb) / r2;
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
}

TEST_CASE("ensemble coefficient generators respect the ellipticity band") {
  const CoefficientField cb = make_checkerboard_coefficients(1.0, 2.0, 0.4);
  const CoefficientField cr = make_random_coefficients(1.0, 2.0, 0.3, 99, true);
  for (int k = 0; k < 4000; ++k) {
    Point z;
    z.d = 1;
    z.t = -2.0 * (k % 63) / 63.0;
    z.x[0] = -3.0 + 6.0 * ((k * 37) % 101) / 101.0;
    z.v[0] = -1.5 + 3.0 * ((k * 53) % 97) / 97.0;
    const double a1 = cb.A(z), a2 = cr.A(z);
    CHECK(a1 >= 1.0);
    CHECK(a1 <= 2.0);
    CHECK(a2 >= 1.0);
    CHECK(a2 <= 2.0);
    CHECK(std::abs(cr.B(z)) <= 2.0);
    CHECK(cb.B(z) == 0.0);
  }
  // Determinism: same seed, same field.
  const CoefficientField cr2 = make_random_coefficients(1.0, 2.0, 0.3, 99, true);
  const Point probe = make_point(-0.7, 0.3, 0.2);
  CHECK(cr.A(probe) == cr2.A(probe));
  CHECK(cr.B(probe) == cr2.B(probe));
}

TEST_CASE("energy and gain ratios are finite and scale sensibly") {
  const SolverProblem p = [] {
    SolverProblem q;
    q.t0 = -2.25;
    q.X = 3.375;
    q.V = 1.5;
    q.nt = 32;
    q.nx = 128;
    q.nv = 32;
    q.substeps = 3;
    q.initial = [](double x, double v) {
      return std::exp(-(x * x + v * v) / (2.0 * 0.25 * 0.25));
    };
    return q;
  }();
  const GridField f = solve_kfp(p, make_checkerboard_coefficients(1.0, 2.0, 0.35), nullptr);
  GridField zero = f;
  for (auto& x : zero.values()) x = 0.0;
  const Point o = make_point(0, 0, 0);
  const EnergyRatioReport er = energy_ratio(f, zero, 0.5, 1.0, o);
  CHECK(!er.degenerate);
  CHECK(std::isfinite(er.ratio));
  CHECK(er.ratio >= 0.0);
  const GainReport gr = gain_ratios(f, zero, o, 0.5, 1.5, 0.01);
  CHECK(std::isfinite(gr.grad_gain));
  CHECK(std::isfinite(gr.sol_gain));
  CHECK(std::isfinite(gr.osc_gain));
  CHECK(gr.p_sol == doctest::Approx(3.0));
  CHECK(gr.p_osc == doctest::Approx(18.0 / 7.0));
}
