#include "kg/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "kg/parallel.hpp"
#include "kg/rng.hpp"

namespace kg {

CoefficientField make_constant_coefficients(double A, double B, double S) {
  if (!(A > 0.0)) throw std::invalid_argument("diffusivity must be positive");
  CoefficientField c;
  c.lambda = A;
  c.Lambda = std::max({A, std::abs(B), 1e-300});
  c.A = [A](const Point&) { return A; };
  c.B = [B](const Point&) { return B; };
  c.S = [S](const Point&) { return S; };
  return c;
}

namespace {

long long block_index(double coord, double width) {
  return static_cast<long long>(std::floor(coord / width));
}

double hash_unit(std::uint64_t seed, long long i, long long j, long long k, std::uint64_t salt) {
  std::uint64_t h = mix64(seed ^ (salt * 0x9e3779b97f4a7c15ull));
  h = mix64(h ^ static_cast<std::uint64_t>(i));
  h = mix64(h ^ static_cast<std::uint64_t>(j));
  h = mix64(h ^ static_cast<std::uint64_t>(k));
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

}  // namespace

CoefficientField make_checkerboard_coefficients(double lambda, double Lambda, double block) {
  if (!(0.0 < lambda && lambda < Lambda)) throw std::invalid_argument("need 0 < lambda < Lambda");
  if (!(block > 0.0)) throw std::invalid_argument("block size must be positive");
  CoefficientField c;
  c.lambda = lambda;
  c.Lambda = Lambda;
  const double bt = block * block, bx = block * block * block, bv = block;
  c.A = [=](const Point& z) {
    const long long k = block_index(z.t, bt) + block_index(z.x[0], bx) + block_index(z.v[0], bv);
    return ((k % 2 + 2) % 2 == 0) ? lambda : Lambda;
  };
  c.B = [](const Point&) { return 0.0; };
  c.S = [](const Point&) { return 0.0; };
  return c;
}

CoefficientField make_random_coefficients(double lambda, double Lambda, double block,
                                          std::uint64_t seed, bool with_drift) {
  if (!(0.0 < lambda && lambda < Lambda)) throw std::invalid_argument("need 0 < lambda < Lambda");
  if (!(block > 0.0)) throw std::invalid_argument("block size must be positive");
  CoefficientField c;
  c.lambda = lambda;
  c.Lambda = Lambda;
  const double bt = block * block, bx = block * block * block, bv = block;
  c.A = [=](const Point& z) {
    const double u = hash_unit(seed, block_index(z.t, bt), block_index(z.x[0], bx),
                               block_index(z.v[0], bv), 1);
    return lambda + (Lambda - lambda) * u;
  };
  if (with_drift) {
    c.B = [=](const Point& z) {
      const double u = hash_unit(seed, block_index(z.t, bt), block_index(z.x[0], bx),
                                 block_index(z.v[0], bv), 2);
      return Lambda * (2.0 * u - 1.0);
    };
  } else {
    c.B = [](const Point&) { return 0.0; };
  }
  c.S = [](const Point&) { return 0.0; };
  return c;
}

namespace {

struct Workspace {
  int nx, nv;
  double dx, dv;
  std::vector<double> xc, vc;  // cell centers
};

void validate_problem(const SolverProblem& p) {
  if (!(p.t0 < 0.0)) throw std::invalid_argument("t0 must be negative");
  if (!(p.X > 0.0 && p.V > 0.0)) throw std::invalid_argument("domain half-widths must be positive");
  if (p.nt < 1 || p.nx < 4 || p.nv < 3) throw std::invalid_argument("grid too small");
  if (p.substeps < 1) throw std::invalid_argument("substeps must be >= 1");
  if (!p.initial) throw std::invalid_argument("initial datum not set");
}

// Conservative second-order upwind-biased transport, periodic in x.
void transport_step(const Workspace& w, double dt, std::vector<double>& f,
                    std::vector<double>& xrow, std::vector<double>& flux) {
  const int nx = w.nx, nv = w.nv;
  for (int j = 0; j < nv; ++j) {
    const double vel = w.vc[j];
    if (vel == 0.0) continue;
    const double nu = vel * dt / w.dx;
    for (int i = 0; i < nx; ++i) xrow[i] = f[static_cast<std::size_t>(i) * nv + j];
    if (vel > 0.0) {
      for (int i = 0; i < nx; ++i) {
        const int im1 = (i + nx - 1) % nx;
        flux[i] = vel * (xrow[i] + 0.5 * (1.0 - nu) * (xrow[i] - xrow[im1]));
      }
    } else {
      for (int i = 0; i < nx; ++i) {
        const int ip1 = (i + 1) % nx, ip2 = (i + 2) % nx;
        flux[i] = vel * (xrow[ip1] - 0.5 * (1.0 + nu) * (xrow[ip2] - xrow[ip1]));
      }
    }
    const double lam = dt / w.dx;
    for (int i = 0; i < nx; ++i) {
      const int im1 = (i + nx - 1) % nx;
      f[static_cast<std::size_t>(i) * nv + j] = xrow[i] - lam * (flux[i] - flux[im1]);
    }
  }
}

}  // namespace

GridField solve_kfp(const SolverProblem& prob, const CoefficientField& coef, SolveStats* stats) {
  validate_problem(prob);
  if (!coef.A || !coef.B || !coef.S) throw std::invalid_argument("coefficients not set");

  Workspace w;
  w.nx = prob.nx;
  w.nv = prob.nv;
  w.dx = 2.0 * prob.X / prob.nx;
  w.dv = 2.0 * prob.V / prob.nv;
  const double dtau = -prob.t0 / prob.nt;
  const double dt_full = dtau / prob.substeps;
  if (prob.V * dt_full > w.dx * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "transport CFL violated: V*dt = " << prob.V * dt_full << " > dx = " << w.dx
        << "; increase substeps to at least "
        << static_cast<int>(std::ceil(prob.V * dtau / w.dx));
    throw std::invalid_argument(msg.str());
  }

  w.xc.resize(prob.nx);
  for (int i = 0; i < prob.nx; ++i) w.xc[i] = -prob.X + (i + 0.5) * w.dx;
  w.vc.resize(prob.nv);
  for (int j = 0; j < prob.nv; ++j) w.vc[j] = -prob.V + (j + 0.5) * w.dv;

  Box box;
  box.d = 1;
  box.lo = {prob.t0, -prob.X, -prob.V, 0, 0, 0, 0};
  box.hi = {0.0, prob.X, prob.V, 0, 0, 0, 0};
  const std::array<int, 3> shape{prob.nt, prob.nx, prob.nv};
  GridField out(box, std::span<const int>(shape));

  const std::size_t cells = static_cast<std::size_t>(prob.nx) * prob.nv;
  std::vector<double> f(cells);
  for (int i = 0; i < prob.nx; ++i) {
    for (int j = 0; j < prob.nv; ++j) {
      f[static_cast<std::size_t>(i) * prob.nv + j] = prob.initial(w.xc[i], w.vc[j]);
    }
  }

  SolveStats st;
  const double cellarea = w.dx * w.dv;
  auto mass = [&] {
    double m = 0.0;
    for (double v : f) m += v;
    return m * cellarea;
  };
  st.mass_initial = mass();
  double prev_mass = st.mass_initial;
  const double mass_scale = std::max(std::abs(st.mass_initial), 1e-300);
  double vmax = 0.0;
  for (double v : w.vc) vmax = std::max(vmax, std::abs(v));
  st.cfl = vmax * dt_full / w.dx;

  std::vector<double> drift_old(cells), linemax(prob.nx);
  std::vector<double> xrow(prob.nx), flux(prob.nx);

  auto substep = [&](double t, double dt) {
    transport_step(w, dt, f, xrow, flux);

    // Explicit centered drift plus source.
    drift_old = f;
    std::fill(linemax.begin(), linemax.end(), 0.0);
    parallel_for_blocks(static_cast<std::size_t>(prob.nx), [&](std::size_t ib, std::size_t ie) {
      Point z;
      z.d = 1;
      z.t = t;
      for (std::size_t i = ib; i < ie; ++i) {
        z.x[0] = w.xc[i];
        double bmax = 0.0;
        double* line = f.data() + i * prob.nv;
        const double* old = drift_old.data() + i * prob.nv;
        for (int j = 0; j < prob.nv; ++j) {
          z.v[0] = w.vc[j];
          const double B = coef.B(z);
          const double S = coef.S(z);
          bmax = std::max(bmax, std::abs(B));
          double dfdv;
          if (j == 0) {
            dfdv = (old[1] - old[0]) / w.dv;
          } else if (j == prob.nv - 1) {
            dfdv = (old[j] - old[j - 1]) / w.dv;
          } else {
            dfdv = (old[j + 1] - old[j - 1]) / (2.0 * w.dv);
          }
          line[j] += dt * (B * dfdv + S);
        }
        linemax[i] = bmax;
      }
    });
    const double bmax = *std::max_element(linemax.begin(), linemax.end());
    if (bmax * dt > w.dv * (1.0 + 1e-12)) {
      throw std::invalid_argument("drift CFL violated: max|B|*dt exceeds dv");
    }

    // Implicit flux-form diffusion in v, one tridiagonal solve per x line.
    const double r = dt / (w.dv * w.dv);
    parallel_for_blocks(static_cast<std::size_t>(prob.nx), [&](std::size_t ib, std::size_t ie) {
      std::vector<double> aface(prob.nv - 1), cp(prob.nv), dp(prob.nv);
      Point z;
      z.d = 1;
      z.t = t;
      for (std::size_t i = ib; i < ie; ++i) {
        z.x[0] = w.xc[i];
        std::vector<double> acell(prob.nv);
        for (int j = 0; j < prob.nv; ++j) {
          z.v[0] = w.vc[j];
          acell[j] = coef.A(z);
          if (!(acell[j] > 0.0)) throw std::invalid_argument("diffusivity must stay positive");
        }
        for (int j = 0; j + 1 < prob.nv; ++j) aface[j] = 0.5 * (acell[j] + acell[j + 1]);
        double wall_lo = 0.0, wall_hi = 0.0;
        if (prob.vbc == VelocityBC::dirichlet) {
          z.v[0] = -prob.V;
          wall_lo = 2.0 * coef.A(z);
          z.v[0] = prob.V;
          wall_hi = 2.0 * coef.A(z);
        }
        double* line = f.data() + i * prob.nv;
        // Thomas algorithm on (I - dt L).
        for (int j = 0; j < prob.nv; ++j) {
          const double am = (j > 0) ? aface[j - 1] : wall_lo;
          const double ap = (j + 1 < prob.nv) ? aface[j] : wall_hi;
          const double lower = (j > 0) ? -r * aface[j - 1] : 0.0;
          const double diag = 1.0 + r * (am + ap);
          const double upper = (j + 1 < prob.nv) ? -r * aface[j] : 0.0;
          if (j == 0) {
            cp[j] = upper / diag;
            dp[j] = line[j] / diag;
          } else {
            const double m = diag - lower * cp[j - 1];
            cp[j] = upper / m;
            dp[j] = (line[j] - lower * dp[j - 1]) / m;
          }
        }
        line[prob.nv - 1] = dp[prob.nv - 1];
        for (int j = prob.nv - 2; j >= 0; --j) line[j] = dp[j] - cp[j] * line[j + 1];
      }
    });

    ++st.steps;
    const double m = mass();
    st.max_step_mass_drift = std::max(st.max_step_mass_drift, std::abs(m - prev_mass) / mass_scale);
    prev_mass = m;
  };

  double t = prob.t0;
  for (int k = 0; k < prob.nt; ++k) {
    const double target = prob.t0 + (k + 0.5) * dtau;
    const double span = target - t;
    const double dt = span / prob.substeps;
    for (int s = 0; s < prob.substeps; ++s) {
      substep(t, dt);
      t += dt;
    }
    double* slice = &out[static_cast<std::size_t>(k) * out.stride(0)];
    std::copy(f.begin(), f.end(), slice);
    for (std::size_t idx = 0; idx < cells; ++idx) {
      if (!std::isfinite(f[idx])) {
        std::ostringstream msg;
        msg << "solver instability: non-finite value at stored step " << k << " (t = " << t << ")";
        throw std::runtime_error(msg.str());
      }
    }
  }

  st.mass_final = prev_mass;
  if (stats != nullptr) *stats = st;
  return out;
}

double kolmogorov_kernel(double t, double x, double v) {
  if (!(t > 0.0)) throw std::domain_error("kernel requires t > 0");
  const double q = -3.0 * x * x / (t * t * t) + 3.0 * x * v / (t * t) - v * v / t;
  return std::numbers::sqrt3 / (2.0 * std::numbers::pi * t * t) * std::exp(q);
}

SolverProblem kolmogorov_spike_problem(int n, double T) {
  if (n < 8 || !(T > 0.0)) throw std::invalid_argument("spike benchmark needs n >= 8, T > 0");
  SolverProblem p;
  p.nt = p.nx = p.nv = n;
  p.X = 2.9 * T;
  p.V = 8.0 * T;
  p.t0 = -T * 2.0 * n / (2.0 * n - 1.0);
  const double dx0 = 2.0 * p.X / n;
  p.substeps = std::max(2, static_cast<int>(std::ceil(p.V * (-p.t0 / n) / dx0 * (1.0 + 1e-12))));
  const double dx = dx0, dv = 2.0 * p.V / n;
  const double x0 = 0.5 * dx, v0 = 0.5 * dv;
  p.initial = [=](double x, double v) {
    return (std::abs(x - x0) < 0.25 * dx && std::abs(v - v0) < 0.25 * dv) ? 1.0 / (dx * dv) : 0.0;
  };
  return p;
}

GridField sample_coefficient(const SolverProblem& prob,
                             const std::function<double(const Point&)>& fn) {
  validate_problem(prob);
  Box box;
  box.d = 1;
  box.lo = {prob.t0, -prob.X, -prob.V, 0, 0, 0, 0};
  box.hi = {0.0, prob.X, prob.V, 0, 0, 0, 0};
  const std::array<int, 3> shape{prob.nt, prob.nx, prob.nv};
  GridField out(box, std::span<const int>(shape));
  out.fill(fn);
  return out;
}

GridField velocity_gradient(const GridField& f) {
  GridField out = f;
  const int d = f.d();
  const int na = f.axes();
  std::vector<int> idx(na, 0);
  const std::size_t n = out.size();
  std::vector<int> vshape(d);
  for (int i = 0; i < d; ++i) vshape[i] = f.shape()[1 + d + i];

  for (std::size_t k = 0; k < n; ++k) {
    double sq = 0.0, signed1 = 0.0;
    for (int i = 0; i < d; ++i) {
      const int axis = 1 + d + i;
      const int j = idx[axis];
      const std::size_t s = f.stride(axis);
      const double dv = f.cell_width(axis);
      double g;
      if (j == 0) {
        g = (f[k + s] - f[k]) / dv;
      } else if (j == vshape[i] - 1) {
        g = (f[k] - f[k - s]) / dv;
      } else {
        g = (f[k + s] - f[k - s]) / (2.0 * dv);
      }
      sq += g * g;
      signed1 = g;
    }
    out[k] = (d == 1) ? signed1 : std::sqrt(sq);
    for (int a = na - 1; a >= 0; --a) {
      if (++idx[a] < f.shape()[a]) break;
      idx[a] = 0;
    }
  }
  return out;
}

SliceMoments slice_moments(const GridField& f, int time_index) {
  if (f.d() != 1) throw std::invalid_argument("moments implemented for d = 1");
  if (time_index < 0 || time_index >= f.shape()[0]) throw std::out_of_range("time index");
  const int nx = f.shape()[1], nv = f.shape()[2];
  const std::size_t base = static_cast<std::size_t>(time_index) * f.stride(0);
  SliceMoments m;
  double sum = 0.0, sx = 0.0, sv = 0.0;
  for (int i = 0; i < nx; ++i) {
    const double x = f.cell_center(1, i);
    for (int j = 0; j < nv; ++j) {
      const double w = f[base + static_cast<std::size_t>(i) * f.stride(1) + j];
      sum += w;
      sx += w * x;
      sv += w * f.cell_center(2, j);
    }
  }
  const double area = f.cell_width(1) * f.cell_width(2);
  m.mass = sum * area;
  if (sum == 0.0) return m;
  m.mean_x = sx / sum;
  m.mean_v = sv / sum;
  double vxx = 0.0, vvv = 0.0, vxv = 0.0;
  for (int i = 0; i < nx; ++i) {
    const double dx = f.cell_center(1, i) - m.mean_x;
    for (int j = 0; j < nv; ++j) {
      const double dv = f.cell_center(2, j) - m.mean_v;
      const double w = f[base + static_cast<std::size_t>(i) * f.stride(1) + j];
      vxx += w * dx * dx;
      vvv += w * dv * dv;
      vxv += w * dx * dv;
    }
  }
  m.var_x = vxx / sum;
  m.var_v = vvv / sum;
  m.cov_xv = vxv / sum;
  return m;
}

EnergyRatioReport energy_ratio(const GridField& grad, const GridField& f, const GridField& S,
                               double r, double R, const Point& z0) {
  if (!(0.0 < r && r < R)) throw std::invalid_argument("need 0 < r < R");
  const Cylinder inner = make_cylinder(z0, r);
  const Cylinder outer = make_cylinder(z0, R);
  EnergyRatioReport rep;
  rep.numerator = cell_sum_pow(grad, 2.0, inner).sum * grad.cell_volume();
  rep.denominator = (cell_sum_pow(f, 2.0, outer).sum + cell_sum_pow(S, 2.0, outer).sum) *
                    f.cell_volume();
  if (rep.denominator > 0.0) {
    rep.ratio = rep.numerator / rep.denominator;
  } else {
    rep.degenerate = true;
    rep.ratio = std::numeric_limits<double>::quiet_NaN();
  }
  return rep;
}

EnergyRatioReport energy_ratio(const GridField& f, const GridField& S, double r, double R,
                               const Point& z0) {
  return energy_ratio(velocity_gradient(f), f, S, r, R, z0);
}

GainReport gain_ratios(const GridField& f, const GridField& S, const Point& z, double R,
                       double gamma, double eps) {
  if (!(R > 0.0) || !(gamma > 1.0) || !(eps > 0.0)) {
    throw std::invalid_argument("need R > 0, gamma > 1, eps > 0");
  }
  const int d = f.d();
  GainReport rep;
  rep.eps = eps;
  rep.p_sol = 2.0 + 1.0 / d;
  rep.p_osc = 6.0 * (2 * d + 1) / (6.0 * d + 1);

  const GridField grad = velocity_gradient(f);
  const Cylinder inner = make_cylinder(z, R);
  const Cylinder big_g = make_cylinder(z, gamma * R);
  const Cylinder big_2 = make_cylinder(z, 2.0 * R);

  const double num_grad = lp_norm(grad, 2.0 + eps, inner);
  const double den_grad = lp_norm(grad, 2.0, big_g) + lp_norm(S, 2.0 + eps, big_g);
  if (den_grad > 0.0) {
    rep.grad_gain = num_grad / den_grad;
  } else {
    rep.grad_degenerate = true;
    rep.grad_gain = std::numeric_limits<double>::quiet_NaN();
  }

  const double num_sol = lp_norm(f, rep.p_sol, inner);
  const double den_sol = lp_norm(f, 2.0, big_g) + lp_norm(S, 2.0, big_g);
  if (den_sol > 0.0) {
    rep.sol_gain = num_sol / den_sol;
  } else {
    rep.sol_degenerate = true;
    rep.sol_gain = std::numeric_limits<double>::quiet_NaN();
  }

  const double mean_inner = average(f, inner);
  double osc_sum = 0.0;
  visit_cells(f, inner, [&](std::size_t k) {
    osc_sum += std::pow(std::abs(f[k] - mean_inner), rep.p_osc);
  });
  const double num_osc = std::pow(osc_sum * f.cell_volume(), 1.0 / rep.p_osc);
  const double den_osc = lp_norm(grad, 2.0, big_2) + lp_norm(S, 2.0, big_2);
  if (den_osc > 0.0) {
    rep.osc_gain = num_osc / den_osc;
  } else {
    rep.osc_degenerate = true;
    rep.osc_gain = std::numeric_limits<double>::quiet_NaN();
  }
  return rep;
}

}  // namespace kg
