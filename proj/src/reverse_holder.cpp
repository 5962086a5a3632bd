#include "kg/reverse_holder.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "kg/parallel.hpp"
#include "kg/rng.hpp"

namespace kg {

namespace {

Point origin_point(int d) {
  Point z;
  z.d = d;
  z.t = 0.0;
  for (int i = 0; i < d; ++i) {
    z.x[i] = 0.0;
    z.v[i] = 0.0;
  }
  return z;
}

double four_cell_radius(const GridField& g) {
  const int d = g.d();
  double rt = 2.0 * std::sqrt(g.cell_width(0));
  double rx = 0.0, rv = 0.0;
  for (int i = 0; i < d; ++i) {
    rx = std::max(rx, std::cbrt(2.0 * g.cell_width(1 + i)));
    rv = std::max(rv, 2.0 * g.cell_width(1 + d + i));
  }
  return std::max({rt, rx, rv});
}

}  // namespace

ScanReport reverse_holder_scan(const GridField& g, const GridField& h, double q, double gamma,
                               int n_cylinders, std::uint64_t seed, double theta,
                               std::optional<double> b_check) {
  if (!(q >= 1.0)) throw std::domain_error("exponent q must be >= 1");
  if (!(gamma > 1.0)) throw std::domain_error("gamma must exceed 1");
  if (!(theta >= 0.0 && theta < 1.0)) throw std::domain_error("theta must lie in [0,1)");
  if (n_cylinders < 1) throw std::invalid_argument("need at least one cylinder");
  if (g.d() != h.d() || g.size() != h.size()) {
    throw std::invalid_argument("g and h must share a grid");
  }

  ScanReport rep;
  rep.q = q;
  rep.gamma = gamma;
  rep.theta = theta;

  const Cylinder ref = make_cylinder(origin_point(g.d()), gamma);
  rep.r_min = four_cell_radius(g);
  rep.r_max = 0.999 * ref.r / gamma;
  if (!(rep.r_min < rep.r_max)) {
    std::ostringstream msg;
    msg << "no admissible cylinders: four-cell radius " << rep.r_min
        << " reaches the containment bound " << rep.r_max << "; refine the grid";
    throw std::domain_error(msg.str());
  }

  RngStream rng(seed, 0x7265766873636eull);
  const double lmin = std::log(rep.r_min), lmax = std::log(rep.r_max);
  rep.samples.reserve(static_cast<std::size_t>(n_cylinders));
  const long attempts_cap = 100L * n_cylinders;
  long attempts = 0;
  while (rep.samples.size() < static_cast<std::size_t>(n_cylinders)) {
    if (++attempts > attempts_cap) {
      throw std::runtime_error("cylinder rejection sampling exhausted its attempt budget");
    }
    const Point z0 = sample_point(ref, rng);
    const double R = std::exp(rng.next(lmin, lmax));
    if (!contained_in(make_cylinder(z0, gamma * R), ref)) continue;
    ScanSample s;
    s.inner = make_cylinder(z0, R);
    rep.samples.push_back(s);
  }

  parallel_for_blocks(rep.samples.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      ScanSample& s = rep.samples[i];
      const Cylinder outer = make_cylinder(s.inner.center, gamma * s.inner.r);
      s.A = average_pow(g, q, s.inner);
      s.M = std::pow(average(g, outer), q);
      s.H = average_pow(h, q, outer);
      s.G = average_pow(g, q, outer);
    }
  });

  bool have_fit = false;
  for (std::size_t i = 0; i < rep.samples.size(); ++i) {
    const ScanSample& s = rep.samples[i];
    const double den = s.M + s.H;
    if (den <= 0.0) {
      ++rep.degenerate;
      continue;
    }
    const double need = (s.A - theta * s.G) / den;
    if (!have_fit || need > rep.b_fit) {
      rep.b_fit = need;
      rep.worst = i;
      have_fit = true;
    }
  }
  if (!have_fit) throw std::runtime_error("every sampled cylinder was degenerate (g and h vanish)");

  if (b_check) {
    rep.checked = true;
    rep.b_supplied = *b_check;
    for (const ScanSample& s : rep.samples) {
      if (s.A > *b_check * (s.M + s.H) + theta * s.G) ++rep.violations;
    }
  }
  return rep;
}

GehringCheckReport gehring_check(const GridField& g, const GridField& h,
                                 const GehringParams& params, double p, double CG) {
  if (!(CG > 0.0)) throw std::invalid_argument("CG must be positive");
  if (!(p >= params.q)) throw std::domain_error("p must be at least q");
  const double margin = p_star_lemma_minus_q(params);
  if (!(p - params.q < margin)) throw std::domain_error("p must stay below p_star");

  const Point o = origin_point(g.d());
  const Cylinder q1 = make_cylinder(o, 1.0);
  const Cylinder qg = make_cylinder(o, params.gamma);

  GehringCheckReport rep;
  rep.p = p;
  rep.CG = CG;
  rep.lhs = std::pow(average_pow(g, p, q1), 1.0 / p);
  rep.rhs = CG * (std::pow(average_pow(g, params.q, qg), 1.0 / params.q) +
                  std::pow(average_pow(h, p, qg), 1.0 / p));
  rep.ratio = (rep.rhs > 0.0) ? rep.lhs / rep.rhs : std::numeric_limits<double>::infinity();
  rep.pass = rep.lhs <= rep.rhs;
  return rep;
}

}  // namespace kg
