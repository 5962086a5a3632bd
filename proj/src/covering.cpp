#include "kg/covering.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "kg/localization.hpp"
#include "kg/parallel.hpp"

namespace kg {

Point shifted_center(const Point& z, double r) {
  Point shift;
  shift.d = z.d;
  shift.t = std::min(-z.t, 0.5 * r * r);
  return compose(z, shift);
}

CoveringResult vitali_select(std::span<const Cylinder> family) {
  CoveringResult out;
  if (family.empty()) return out;
  for (const Cylinder& c : family) {
    if (c.center.t > 0.0) throw std::domain_error("cylinder center must have t <= 0");
    if (!(c.r > 0.0)) throw std::domain_error("cylinder radius must be positive");
  }
  std::vector<std::size_t> order(family.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (family[a].r != family[b].r) return family[a].r > family[b].r;
    return a < b;
  });

  out.assignment.assign(family.size(), family.size());
  for (std::size_t j : order) {
    bool disjoint = true;
    for (std::size_t pos = 0; pos < out.selected.size(); ++pos) {
      if (intersects(family[j], family[out.selected[pos]])) {
        disjoint = false;
        if (out.assignment[j] == family.size()) out.assignment[j] = pos;
        break;
      }
    }
    if (disjoint) {
      out.assignment[j] = out.selected.size();
      out.selected.push_back(j);
    }
  }
  return out;
}

CoverReport verify_covering(std::span<const Cylinder> family, const CoveringResult& result,
                            std::size_t samples_per_cylinder, RngStream& rng) {
  CoverReport rep;
  for (std::size_t a = 0; a < result.selected.size(); ++a) {
    for (std::size_t b = a + 1; b < result.selected.size(); ++b) {
      if (intersects(family[result.selected[a]], family[result.selected[b]])) ++rep.overlaps;
    }
  }
  std::vector<Cylinder> dilated;
  dilated.reserve(result.selected.size());
  for (std::size_t idx : result.selected) dilated.push_back(five_q(family[idx]));

  for (std::size_t j = 0; j < family.size(); ++j) {
    const std::size_t pos = result.assignment[j];
    if (pos >= result.selected.size() ||
        !contained_in(family[j], dilated[pos])) {
      ++rep.assignment_violations;
      continue;
    }
    for (std::size_t k = 0; k < samples_per_cylinder; ++k) {
      const Point z = sample_point(family[j], rng);
      ++rep.samples;
      if (contains(dilated[pos], z)) continue;
      bool covered = false;
      for (const Cylinder& big : dilated) {
        if (contains(big, z)) {
          covered = true;
          break;
        }
      }
      if (!covered) ++rep.escapes;
    }
  }
  return rep;
}

namespace {

// Mean of gbold^q over Q_r(z_r); false when the cylinder leaves the grid box
// or captures no cell center.
bool mean_pow_at(const GridField& g, double q, const Point& z, double r, double* out) {
  const Cylinder cyl = make_cylinder(shifted_center(z, r), r);
  CellStats s;
  try {
    s = cell_sum_pow(g, q, cyl);
  } catch (const std::domain_error&) {
    return false;
  }
  if (s.cells == 0) return false;
  *out = s.sum / static_cast<double>(s.cells);
  return true;
}

SuperlevelPick search_one(const GridField& g, double q, double gamma, double s, const Point& z) {
  SuperlevelPick pick;
  pick.seed = z;
  pick.zeta_seed = zeta(z, gamma);
  const double sq = std::pow(s, q);

  if (!(g.value_at(z) > s)) {
    pick.status = SeedStatus::below_level;
    return pick;
  }
  if (!(pick.zeta_seed > 0.0)) {
    pick.status = SeedStatus::unresolved;
    return pick;
  }

  constexpr int kCoarse = 64;
  double r_lo = 0.0, r_hi = 0.0;
  bool have_lo = false, bracketed = false;
  for (int k = kCoarse; k >= 1; --k) {
    const double r = pick.zeta_seed * k / kCoarse;
    double avg = 0.0;
    if (!mean_pow_at(g, q, z, r, &avg)) continue;
    if (avg >= sq) {
      // Largest radius at or above the level: bracket against the nearest
      // larger radius that was below it.
      r_lo = r;
      have_lo = true;
      break;
    }
    r_hi = r;
    bracketed = true;
  }
  if (!have_lo || !bracketed) {
    pick.status = SeedStatus::unresolved;
    return pick;
  }

  for (int it = 0; it < 80 && (r_hi - r_lo) > 1e-6 * r_hi; ++it) {
    const double mid = 0.5 * (r_lo + r_hi);
    double avg = 0.0;
    if (mean_pow_at(g, q, z, mid, &avg) && avg >= sq) {
      r_lo = mid;
    } else {
      r_hi = mid;
    }
  }

  pick.r_bar = r_lo;
  pick.picked = make_cylinder(shifted_center(z, r_lo), r_lo);
  pick.zeta_center = zeta(pick.picked.center, gamma);
  double avg = 0.0;
  if (!mean_pow_at(g, q, z, r_lo, &avg)) {
    pick.status = SeedStatus::unresolved;
    return pick;
  }
  pick.avg_q = avg;
  pick.avg_q_5q = average_pow(g, q, five_q(pick.picked));
  pick.status = SeedStatus::found;
  return pick;
}

}  // namespace

std::vector<SuperlevelPick> superlevel_search(const GridField& gbold, double q, double gamma,
                                              double s, std::span<const Point> seeds) {
  if (!(s > 1.0)) throw std::invalid_argument("level s must exceed 1");
  std::vector<SuperlevelPick> out(seeds.size());
  parallel_for_blocks(seeds.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) out[i] = search_one(gbold, q, gamma, s, seeds[i]);
  });
  return out;
}

std::vector<Cylinder> superlevel_cover(const GridField& gbold, double q, double gamma, double s,
                                       std::span<const Point> seeds) {
  std::vector<Cylinder> out;
  for (const SuperlevelPick& p : superlevel_search(gbold, q, gamma, s, seeds)) {
    if (p.status == SeedStatus::found) out.push_back(p.picked);
  }
  return out;
}

std::vector<LebesguePointReport> lebesgue_check(const GridField& f, std::size_t points,
                                                std::span<const double> radii, RngStream& rng) {
  if (radii.empty()) throw std::invalid_argument("radii list must be non-empty");
  for (std::size_t i = 1; i < radii.size(); ++i) {
    if (!(radii[i] < radii[i - 1])) throw std::invalid_argument("radii must be decreasing");
  }
  std::vector<LebesguePointReport> out;
  out.reserve(points);
  const Box& gb = f.box();
  std::size_t attempts = 0;
  while (out.size() < points && attempts < 50 * points + 50) {
    ++attempts;
    Point z;
    z.d = gb.d;
    z.t = -rng.next(-gb.hi[0], -gb.lo[0]);
    for (int i = 0; i < gb.d; ++i) {
      z.x[i] = rng.next(gb.lo[1 + i], gb.hi[1 + i]);
      z.v[i] = rng.next(gb.lo[1 + gb.d + i], gb.hi[1 + gb.d + i]);
    }
    if (z.t > 0.0) z.t = 0.0;

    bool ok = true;
    std::vector<Cylinder> cyls;
    cyls.reserve(radii.size());
    for (double r : radii) {
      const Cylinder c = make_cylinder(shifted_center(z, r), r);
      const Box bb = bounding_box(c);
      for (int a = 0; a < gb.axes() && ok; ++a) {
        if (bb.lo[a] < gb.lo[a] || bb.hi[a] > gb.hi[a]) ok = false;
      }
      if (!ok) break;
      cyls.push_back(c);
    }
    if (!ok) continue;

    LebesguePointReport rep;
    rep.z = z;
    const double fz = f.value_at(z);
    for (std::size_t i = 0; i < cyls.size(); ++i) {
      LebesgueRow row;
      row.radius = radii[i];
      CellStats s;
      visit_cells(f, cyls[i], [&](std::size_t k) {
        s.sum += std::abs(f[k] - fz);
        ++s.cells;
      });
      if (s.cells == 0) {
        ok = false;
        break;
      }
      row.avg_dev = s.sum / static_cast<double>(s.cells);
      row.cells = s.cells;
      rep.rows.push_back(row);
    }
    if (ok) out.push_back(std::move(rep));
  }
  return out;
}

}  // namespace kg
