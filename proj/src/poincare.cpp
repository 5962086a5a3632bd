#include "kg/poincare.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace kg {

namespace {

struct Section {
  std::vector<int> it, ix, iv;  // member cell indices per axis
};

// Axis membership replicating the cylinder predicate bit for bit (center
// velocity is zero, so the x slab does not drift).
Section section_of(const GridField& f, const Cylinder& q) {
  Section s;
  const double r2 = q.r * q.r, r3 = r2 * q.r;
  for (int i = 0; i < f.shape()[0]; ++i) {
    const double dt = f.cell_center(0, i) - q.center.t;
    if (dt > -r2 && dt <= 0.0) s.it.push_back(i);
  }
  for (int i = 0; i < f.shape()[1]; ++i) {
    const double dx = f.cell_center(1, i) - q.center.x[0];
    if (dx * dx < r3 * r3) s.ix.push_back(i);
  }
  for (int i = 0; i < f.shape()[2]; ++i) {
    const double dv = f.cell_center(2, i) - q.center.v[0];
    if (dv * dv < r2) s.iv.push_back(i);
  }
  return s;
}

struct RectPoisson {
  int m = 0, n = 0;
  double it2 = 0.0, ix2 = 0.0;

  void apply(const std::vector<double>& u, std::vector<double>& out) const {
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < n; ++j) {
        const std::size_t k = static_cast<std::size_t>(i) * n + j;
        const double c = u[k];
        double acc = 2.0 * c * (it2 + ix2);
        if (i > 0) acc -= u[k - n] * it2;
        if (i + 1 < m) acc -= u[k + n] * it2;
        if (j > 0) acc -= u[k - 1] * ix2;
        if (j + 1 < n) acc -= u[k + 1] * ix2;
        out[k] = acc;
      }
    }
  }

  // Dirichlet CG; returns the solution of  -Lap u = b.
  std::vector<double> solve(const std::vector<double>& b) const {
    const std::size_t cells = b.size();
    std::vector<double> u(cells, 0.0), r(b), p(b), ap(cells);
    double rr = std::inner_product(r.begin(), r.end(), r.begin(), 0.0);
    const double target = std::max(1e-24, 1e-20 * rr);
    const int budget = 60 * (m + n) + 200;
    int it = 0;
    while (rr > target) {
      if (++it > budget) throw std::runtime_error("dual-norm Poisson solve did not converge");
      apply(p, ap);
      const double pap = std::inner_product(p.begin(), p.end(), ap.begin(), 0.0);
      if (!(pap > 0.0)) break;
      const double alpha = rr / pap;
      for (std::size_t k = 0; k < cells; ++k) {
        u[k] += alpha * p[k];
        r[k] -= alpha * ap[k];
      }
      const double rr_new = std::inner_product(r.begin(), r.end(), r.begin(), 0.0);
      const double beta = rr_new / rr;
      rr = rr_new;
      for (std::size_t k = 0; k < cells; ++k) p[k] = r[k] + beta * p[k];
    }
    return u;
  }
};

// || grad phi ||_{L^{q'}} with zero extension outside the rectangle.
double grad_qnorm(const std::vector<double>& phi, int m, int n, double dt, double dx, double qp,
                  double area) {
  double s = 0.0;
  for (int i = 0; i <= m; ++i) {
    for (int j = 0; j < n; ++j) {
      const double hi = (i < m) ? phi[static_cast<std::size_t>(i) * n + j] : 0.0;
      const double lo = (i > 0) ? phi[static_cast<std::size_t>(i - 1) * n + j] : 0.0;
      s += std::pow(std::abs(hi - lo) / dt, qp);
    }
  }
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j <= n; ++j) {
      const double hi = (j < n) ? phi[static_cast<std::size_t>(i) * n + j] : 0.0;
      const double lo = (j > 0) ? phi[static_cast<std::size_t>(i) * n + j - 1] : 0.0;
      s += std::pow(std::abs(hi - lo) / dx, qp);
    }
  }
  return std::pow(s * area, 1.0 / qp);
}

// Gradient of || grad phi ||_{L^{q'}} with respect to phi (the discrete
// q'-Laplacian scaled by the norm), written into out.
void qnorm_gradient(const std::vector<double>& phi, int m, int n, double dt, double dx, double qp,
                    double area, double norm_value, std::vector<double>& out) {
  std::fill(out.begin(), out.end(), 0.0);
  const double scale = area * std::pow(norm_value, 1.0 - qp);
  for (int i = 0; i <= m; ++i) {
    for (int j = 0; j < n; ++j) {
      const double hi = (i < m) ? phi[static_cast<std::size_t>(i) * n + j] : 0.0;
      const double lo = (i > 0) ? phi[static_cast<std::size_t>(i - 1) * n + j] : 0.0;
      const double g = (hi - lo) / dt;
      const double flux = std::pow(std::abs(g), qp - 1.0) * (g >= 0.0 ? 1.0 : -1.0) / dt * scale;
      if (i < m) out[static_cast<std::size_t>(i) * n + j] += flux;
      if (i > 0) out[static_cast<std::size_t>(i - 1) * n + j] -= flux;
    }
  }
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j <= n; ++j) {
      const double hi = (j < n) ? phi[static_cast<std::size_t>(i) * n + j] : 0.0;
      const double lo = (j > 0) ? phi[static_cast<std::size_t>(i) * n + j - 1] : 0.0;
      const double g = (hi - lo) / dx;
      const double flux = std::pow(std::abs(g), qp - 1.0) * (g >= 0.0 ? 1.0 : -1.0) / dx * scale;
      if (j < n) out[static_cast<std::size_t>(i) * n + j] += flux;
      if (j > 0) out[static_cast<std::size_t>(i) * n + j - 1] -= flux;
    }
  }
}

// Fixed-budget ascent of <T,phi> / ||grad phi||_{q'} starting from the
// Laplacian solution; any iterate is a valid lower bound of the dual norm.
double ascend_dual(const std::vector<double>& T, std::vector<double> phi, int m, int n, double dt,
                   double dx, double qp, double area) {
  const std::size_t cells = T.size();
  auto pairing = [&](const std::vector<double>& a) {
    return std::inner_product(T.begin(), T.end(), a.begin(), 0.0) * area;
  };
  double dq = grad_qnorm(phi, m, n, dt, dx, qp, area);
  if (!(dq > 0.0)) return 0.0;
  double best = pairing(phi) / dq;
  std::vector<double> dnorm(cells), step(cells);
  double eta = 0.25;
  for (int iter = 0; iter < 80; ++iter) {
    qnorm_gradient(phi, m, n, dt, dx, qp, area, dq, dnorm);
    const double num = pairing(phi);
    double smax = 0.0, pmax = 0.0;
    for (std::size_t k = 0; k < cells; ++k) {
      step[k] = T[k] * area / dq - num / (dq * dq) * dnorm[k];
      smax = std::max(smax, std::abs(step[k]));
      pmax = std::max(pmax, std::abs(phi[k]));
    }
    if (smax == 0.0) break;
    const double h = eta * std::max(pmax, 1e-300) / smax;
    std::vector<double> cand(phi);
    for (std::size_t k = 0; k < cells; ++k) cand[k] += h * step[k];
    const double cdq = grad_qnorm(cand, m, n, dt, dx, qp, area);
    if (cdq > 0.0) {
      const double cj = pairing(cand) / cdq;
      if (cj > best) {
        best = cj;
        phi.swap(cand);
        dq = cdq;
        continue;
      }
    }
    eta *= 0.5;
    if (eta < 1e-6) break;
  }
  return best;
}

}  // namespace

PoincareReport poincare_check(const GridField& f, const Cylinder& Q, double q_exp) {
  if (f.d() != 1) throw std::invalid_argument("dual-norm check implemented for d = 1");
  if (!(q_exp > 1.0 && q_exp <= 2.0)) throw std::domain_error("exponent must lie in (1,2]");
  if (Q.center.v[0] != 0.0) {
    throw std::invalid_argument("cylinder must have zero center velocity");
  }
  const Box bb = bounding_box(Q);
  for (int a = 0; a < f.axes(); ++a) {
    if (bb.lo[a] < f.box().lo[a] - 1e-12 || bb.hi[a] > f.box().hi[a] + 1e-12) {
      throw std::domain_error("cylinder leaves the grid");
    }
  }

  const Section sec = section_of(f, Q);
  const int m = static_cast<int>(sec.it.size());
  const int n = static_cast<int>(sec.ix.size());
  const int nvs = static_cast<int>(sec.iv.size());
  if (m == 0 || n == 0 || nvs == 0) throw std::domain_error("cylinder contains no grid cells");

  const double dtg = f.cell_width(0), dxg = f.cell_width(1), dvg = f.cell_width(2);
  const double cellvol = f.cell_volume();
  const int nt = f.shape()[0], nx = f.shape()[1], nv = f.shape()[2];
  const std::size_t st = f.stride(0), sx = f.stride(1);

  PoincareReport rep;
  rep.q = q_exp;

  // Mean and oscillation norm over the member cells.
  double sum = 0.0;
  for (int a : sec.it)
    for (int b : sec.ix)
      for (int c : sec.iv) sum += f[a * st + b * sx + c];
  const double count = static_cast<double>(m) * n * nvs;
  const double mean = sum / count;
  double osc = 0.0, gq = 0.0;
  for (int a : sec.it) {
    for (int b : sec.ix) {
      for (int c : sec.iv) {
        const std::size_t k = a * st + b * sx + c;
        osc += std::pow(std::abs(f[k] - mean), q_exp);
        double dfv;
        if (c == 0) {
          dfv = (f[k + 1] - f[k]) / dvg;
        } else if (c == nv - 1) {
          dfv = (f[k] - f[k - 1]) / dvg;
        } else {
          dfv = (f[k + 1] - f[k - 1]) / (2.0 * dvg);
        }
        gq += std::pow(std::abs(dfv), q_exp);
      }
    }
  }
  rep.lhs = std::pow(osc * cellvol, 1.0 / q_exp);
  rep.grad = std::pow(gq * cellvol, 1.0 / q_exp);

  // Transport term per velocity slice on the common time-space rectangle.
  RectPoisson poisson;
  poisson.m = m;
  poisson.n = n;
  poisson.it2 = 1.0 / (dtg * dtg);
  poisson.ix2 = 1.0 / (dxg * dxg);
  const double area = dtg * dxg;
  const double qp = q_exp / (q_exp - 1.0);

  double dual_acc = 0.0;
  std::vector<double> T(static_cast<std::size_t>(m) * n);
  for (int c : sec.iv) {
    const double vel = f.cell_center(2, c);
    double tnorm = 0.0;
    for (int ia = 0; ia < m; ++ia) {
      const int a = sec.it[ia];
      for (int ib = 0; ib < n; ++ib) {
        const int b = sec.ix[ib];
        const std::size_t k = a * st + b * sx + c;
        double dft;
        if (a == 0) {
          dft = (f[k + st] - f[k]) / dtg;
        } else if (a == nt - 1) {
          dft = (f[k] - f[k - st]) / dtg;
        } else {
          dft = (f[k + st] - f[k - st]) / (2.0 * dtg);
        }
        double dfx;
        if (b == 0) {
          dfx = (f[k + sx] - f[k]) / dxg;
        } else if (b == nx - 1) {
          dfx = (f[k] - f[k - sx]) / dxg;
        } else {
          dfx = (f[k + sx] - f[k - sx]) / (2.0 * dxg);
        }
        const double val = dft + vel * dfx;
        T[static_cast<std::size_t>(ia) * n + ib] = val;
        tnorm += val * val;
      }
    }
    if (tnorm == 0.0) continue;
    const std::vector<double> u = poisson.solve(T);
    if (q_exp == 2.0) {
      const double h1 = std::inner_product(T.begin(), T.end(), u.begin(), 0.0) * area;
      dual_acc += std::pow(std::max(h1, 0.0), q_exp / 2.0) * dvg;
    } else {
      rep.approximate = true;
      const double dn = ascend_dual(T, u, m, n, dtg, dxg, qp, area);
      dual_acc += std::pow(std::max(dn, 0.0), q_exp) * dvg;
    }
  }
  rep.dual = std::pow(dual_acc, 1.0 / q_exp);
  if (q_exp != 2.0) rep.approximate = true;

  rep.rhs = rep.dual + rep.grad;
  if (rep.rhs > 0.0) {
    rep.constant = rep.lhs / rep.rhs;
  } else if (rep.lhs == 0.0) {
    rep.constant = 0.0;
    rep.degenerate = true;
  } else {
    rep.constant = std::numeric_limits<double>::infinity();
    rep.degenerate = true;
  }
  return rep;
}

}  // namespace kg
