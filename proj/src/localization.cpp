#include "kg/localization.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace kg {

namespace {

double norm2(const std::array<double, kMaxDim>& a, int d) {
  double s = 0.0;
  for (int i = 0; i < d; ++i) s += a[i] * a[i];
  return std::sqrt(s);
}

void check_gamma(double gamma) {
  if (!(gamma > 1.0)) throw std::invalid_argument("gamma must exceed 1");
}

}  // namespace

double zeta(const Point& z, double gamma) {
  check_gamma(gamma);
  const double av = norm2(z.v, z.d);
  const double ax = norm2(z.x, z.d);
  const double mv = std::max(gamma - av, 0.0) / 5.0;
  const double mt = std::sqrt(std::max(gamma * gamma + z.t, 0.0) / 13.0);
  const double mx = std::sqrt(std::max(gamma * gamma * gamma - ax, 0.0) / (25.0 * gamma));
  return 0.5 * std::min({mv, mt, mx});
}

double c_gamma(double gamma) {
  check_gamma(gamma);
  const double mv = (gamma - 1.0) / 5.0;
  const double mt = std::sqrt((gamma * gamma - 1.0) / 13.0);
  const double mx = std::sqrt((gamma * gamma * gamma - 1.0) / (25.0 * gamma));
  return 0.5 * std::min({mv, mt, mx});
}

LocalizationContext make_localization(const GridField& g, double q, double gamma) {
  check_gamma(gamma);
  if (!(q > 1.0)) throw std::invalid_argument("q must exceed 1");
  LocalizationContext ctx;
  ctx.d = g.d();
  ctx.q = q;
  ctx.gamma = gamma;
  ctx.c0 = std::pow(2.0, (4.0 * ctx.d + 2.0) / q);
  Point origin;
  origin.d = ctx.d;
  ctx.gnorm = lp_norm(g, q, make_cylinder(origin, gamma));
  if (!(ctx.gnorm > 0.0)) throw std::invalid_argument("reference field has zero norm");
  return ctx;
}

double localize_value(double fval, const Point& z, const LocalizationContext& ctx) {
  const double zr = zeta(z, ctx.gamma);
  if (zr <= 0.0) return 0.0;
  Point origin;
  origin.d = ctx.d;
  const double vol = volume(make_cylinder(origin, zr));
  return std::pow(vol, 1.0 / ctx.q) / ctx.c0 * fval / ctx.gnorm;
}

GridField localize(const GridField& f, const LocalizationContext& ctx) {
  if (f.d() != ctx.d) throw std::invalid_argument("field dimension does not match context");
  GridField out = f;
  const int na = f.axes();
  std::vector<int> idx(na, 0);
  for (std::size_t k = 0; k < out.size(); ++k) {
    out[k] = localize_value(f[k], f.cell_point(idx), ctx);
    for (int a = na - 1; a >= 0; --a) {
      if (++idx[a] < f.shape()[a]) break;
      idx[a] = 0;
    }
  }
  return out;
}

}  // namespace kg
