#include "kg/bogovskii.hpp"

#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "kg/rng.hpp"

namespace kg {

namespace {

void validate(const BogovskiiProblem& p) {
  if (p.nt < 2 || p.nx < 2) throw std::invalid_argument("grid too small");
  if (!(p.t_hi > p.t_lo && p.x_hi > p.x_lo)) throw std::invalid_argument("empty rectangle");
}

// Neumann Laplacian DD^T acting on a cell field (natural scaling 1/dt^2, 1/dx^2).
void apply_ddt(const std::vector<double>& w, std::vector<double>& out, int nt, int nx, double it2,
               double ix2) {
  for (int i = 0; i < nt; ++i) {
    for (int j = 0; j < nx; ++j) {
      const std::size_t k = static_cast<std::size_t>(i) * nx + j;
      double acc = 0.0;
      if (i > 0) acc += (w[k] - w[k - nx]) * it2;
      if (i + 1 < nt) acc += (w[k] - w[k + nx]) * it2;
      if (j > 0) acc += (w[k] - w[k - 1]) * ix2;
      if (j + 1 < nx) acc += (w[k] - w[k + 1]) * ix2;
      out[k] = acc;
    }
  }
}

double lp_sum(const std::vector<double>& a, double p) {
  double s = 0.0;
  for (double v : a) s += std::pow(std::abs(v), p);
  return s;
}

}  // namespace

BogovskiiResult bogovskii_solve(const BogovskiiProblem& prob, const std::vector<double>& G,
                                double p_exp) {
  validate(prob);
  if (!(p_exp >= 1.0)) throw std::domain_error("exponent must be >= 1");
  const int nt = prob.nt, nx = prob.nx;
  const std::size_t cells = static_cast<std::size_t>(nt) * nx;
  if (G.size() != cells) throw std::invalid_argument("source size does not match the grid");

  BogovskiiResult res;
  res.nt = nt;
  res.nx = nx;
  res.dt = (prob.t_hi - prob.t_lo) / nt;
  res.dx = (prob.x_hi - prob.x_lo) / nx;
  res.ht.assign(static_cast<std::size_t>(nt + 1) * nx, 0.0);
  res.hx.assign(static_cast<std::size_t>(nt) * (nx + 1), 0.0);

  double linf = 0.0, mean = 0.0;
  for (double v : G) {
    linf = std::max(linf, std::abs(v));
    mean += v;
  }
  mean /= static_cast<double>(cells);
  if (linf == 0.0) return res;
  if (std::abs(mean) > 1e-12 * linf) {
    std::ostringstream msg;
    msg << "source mean " << mean << " is not zero relative to max " << linf;
    throw std::invalid_argument(msg.str());
  }
  std::vector<double> rhs(G);
  for (double& v : rhs) v -= mean;

  const double area = res.dt * res.dx;
  const double g2 = std::sqrt(lp_sum(rhs, 2.0) * area);
  res.g_norm = std::pow(lp_sum(rhs, p_exp) * area, 1.0 / p_exp);

  // CG for DD^T w = rhs on the mean-zero subspace.
  const double it2 = 1.0 / (res.dt * res.dt), ix2 = 1.0 / (res.dx * res.dx);
  std::vector<double> w(cells, 0.0), r(rhs), p(rhs), ap(cells);
  auto demean = [&](std::vector<double>& a) {
    const double m = std::accumulate(a.begin(), a.end(), 0.0) / static_cast<double>(cells);
    for (double& v : a) v -= m;
  };
  demean(r);
  p = r;
  double rr = std::inner_product(r.begin(), r.end(), r.begin(), 0.0);
  const double target = 1e-9 * g2;
  const int budget = 40 * (nt + nx) + 200;
  int it = 0;
  while (std::sqrt(rr * area) > target) {
    if (++it > budget) throw std::runtime_error("divergence solve did not converge in budget");
    apply_ddt(p, ap, nt, nx, it2, ix2);
    const double pap = std::inner_product(p.begin(), p.end(), ap.begin(), 0.0);
    if (!(pap > 0.0)) throw std::runtime_error("divergence solve lost positive definiteness");
    const double alpha = rr / pap;
    for (std::size_t k = 0; k < cells; ++k) {
      w[k] += alpha * p[k];
      r[k] -= alpha * ap[k];
    }
    demean(r);
    const double rr_new = std::inner_product(r.begin(), r.end(), r.begin(), 0.0);
    const double beta = rr_new / rr;
    rr = rr_new;
    for (std::size_t k = 0; k < cells; ++k) p[k] = r[k] + beta * p[k];
  }
  res.iterations = it;

  // h = D^T w on interior faces; boundary faces stay exactly zero.
  for (int i = 1; i < nt; ++i) {
    for (int j = 0; j < nx; ++j) {
      res.ht[static_cast<std::size_t>(i) * nx + j] =
          (w[static_cast<std::size_t>(i - 1) * nx + j] - w[static_cast<std::size_t>(i) * nx + j]) /
          res.dt;
    }
  }
  for (int i = 0; i < nt; ++i) {
    for (int j = 1; j < nx; ++j) {
      res.hx[static_cast<std::size_t>(i) * (nx + 1) + j] =
          (w[static_cast<std::size_t>(i) * nx + (j - 1)] -
           w[static_cast<std::size_t>(i) * nx + j]) /
          res.dx;
    }
  }

  // Divergence residual against the de-meaned source.
  double rsq = 0.0;
  for (int i = 0; i < nt; ++i) {
    for (int j = 0; j < nx; ++j) {
      const std::size_t k = static_cast<std::size_t>(i) * nx + j;
      const double div = (res.ht[k + nx] - res.ht[k]) / res.dt +
                         (res.hx[static_cast<std::size_t>(i) * (nx + 1) + j + 1] -
                          res.hx[static_cast<std::size_t>(i) * (nx + 1) + j]) /
                             res.dx;
      const double e = div - rhs[k];
      rsq += e * e;
    }
  }
  res.residual = std::sqrt(rsq * area) / g2;

  // L^p norms of h and of its zero-extended face-difference gradient.
  double hp = lp_sum(res.ht, p_exp) + lp_sum(res.hx, p_exp);
  res.h_norm = std::pow(hp * area, 1.0 / p_exp);
  double gp = 0.0;
  auto add_diffs = [&](const std::vector<double>& a, int rows, int cols, double ddt, double ddx) {
    for (int i = 0; i <= rows; ++i) {
      for (int j = 0; j < cols; ++j) {
        const double hi_v = (i < rows) ? a[static_cast<std::size_t>(i) * cols + j] : 0.0;
        const double lo_v = (i > 0) ? a[static_cast<std::size_t>(i - 1) * cols + j] : 0.0;
        gp += std::pow(std::abs(hi_v - lo_v) / ddt, p_exp);
      }
    }
    for (int i = 0; i < rows; ++i) {
      for (int j = 0; j <= cols; ++j) {
        const double hi_v = (j < cols) ? a[static_cast<std::size_t>(i) * cols + j] : 0.0;
        const double lo_v = (j > 0) ? a[static_cast<std::size_t>(i) * cols + j - 1] : 0.0;
        gp += std::pow(std::abs(hi_v - lo_v) / ddx, p_exp);
      }
    }
  };
  add_diffs(res.ht, nt + 1, nx, res.dt, res.dx);
  add_diffs(res.hx, nt, nx + 1, res.dt, res.dx);
  res.grad_norm = std::pow(gp * area, 1.0 / p_exp);
  res.stability = std::pow(std::pow(res.h_norm, p_exp) + std::pow(res.grad_norm, p_exp),
                           1.0 / p_exp) /
                  res.g_norm;
  return res;
}

std::vector<double> random_mean_zero_source(const BogovskiiProblem& prob, std::uint64_t seed) {
  validate(prob);
  const std::size_t cells = static_cast<std::size_t>(prob.nt) * prob.nx;
  RngStream rng(seed, 0x626f676f76ull);
  std::vector<double> g(cells);
  for (double& v : g) v = rng.next(-1.0, 1.0);
  const double mean = std::accumulate(g.begin(), g.end(), 0.0) / static_cast<double>(cells);
  for (double& v : g) v -= mean;
  return g;
}

}  // namespace kg
