#include <array>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "kg/covering.hpp"
#include "kg/geometry.hpp"
#include "kg/grid_field.hpp"
#include "kg/rng.hpp"

using namespace kg;

namespace {
Cylinder random_cyl(RngStream& rng) {
  Point c;
  c.d = 1;
  c.t = -rng.next(0.0, 3.0);
  c.x[0] = rng.next(-2.5, 2.5);
  c.v[0] = rng.next(-2.5, 2.5);
  return make_cylinder(c, rng.next(0.1, 1.0));
}
}  // namespace

TEST_CASE("greedy selection is disjoint and covers through the dilates") {
  RngStream rng(61, 14);
  for (int fam = 0; fam < 40; ++fam) {
    std::vector<Cylinder> family;
    const int count = 5 + static_cast<int>(rng.next_bits() % 40);
    for (int i = 0; i < count; ++i) family.push_back(random_cyl(rng));
    const CoveringResult res = vitali_select(family);
    REQUIRE(!res.selected.empty());
    REQUIRE(res.assignment.size() == family.size());
    // Selected radii are non-increasing in selection order.
    for (std::size_t i = 1; i < res.selected.size(); ++i) {
      CHECK(family[res.selected[i - 1]].r >= family[res.selected[i]].r);
    }
    // A selected cylinder is assigned to itself.
    for (std::size_t pos = 0; pos < res.selected.size(); ++pos) {
      CHECK(res.assignment[res.selected[pos]] == pos);
    }
    const CoverReport rep = verify_covering(family, res, 400, rng);
    CHECK(rep.overlaps == 0);
    CHECK(rep.escapes == 0);
    CHECK(rep.assignment_violations == 0);
  }
}

TEST_CASE("kernel inclusion on constructed intersecting pairs") {
  RngStream rng(67, 15);
  int made = 0;
  while (made < 1500) {
    const Cylinder q2 = random_cyl(rng);
    const double r1 = rng.next(0.02, 2.0 * q2.r);
    Point c1;
    c1.d = 1;
    c1.t = std::min(0.0, q2.center.t + rng.next(-q2.r * q2.r - r1 * r1, r1 * r1));
    const double spanx = r1 * r1 * r1 + std::pow(q2.r, 3) + 3.0 * (r1 * r1 + q2.r * q2.r);
    c1.x[0] = q2.center.x[0] + rng.next(-spanx, spanx);
    c1.v[0] = q2.center.v[0] + rng.next(-(r1 + q2.r), r1 + q2.r);
    const Cylinder q1 = make_cylinder(c1, r1);
    if (!intersects(q1, q2)) continue;
    ++made;
    CHECK(contained_in(q1, five_q(q2)));
  }
}

TEST_CASE("superlevel search finds level-matching radii on a bump field") {
  // The grid must cover the whole localization cylinder: the dilated average
  // is taken over 5Q, which stays inside Q_gamma only through the cutoff
  // bound r <= zeta. The bump is wide in t and x and narrow in v, so the
  // cylinder averages vary smoothly in the radius at this resolution.
  const double gamma = 2.0;
  const Cylinder qg = make_cylinder(make_point(0, 0, 0), gamma);
  GridField g(bounding_box(qg), std::array<int, 3>{96, 384, 384});
  g.fill([](const Point& z) {
    const double s = (z.t + 0.3) * (z.t + 0.3) / 0.25 + z.x[0] * z.x[0] / 0.16 +
                     z.v[0] * z.v[0] / 0.01;
    return 0.3 + 5.0 * std::exp(-s);
  });

  double peak = 0.0;
  std::size_t peak_idx = 0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (g[i] > peak) {
      peak = g[i];
      peak_idx = i;
    }
  }
  REQUIRE(peak > 4.0);
  std::array<int, 3> idx{};
  std::size_t rem = peak_idx;
  for (int a = 0; a < 3; ++a) {
    idx[a] = static_cast<int>(rem / g.stride(a));
    rem %= g.stride(a);
  }
  const Point seed = g.cell_point(idx);
  const double s = 0.62 * peak;

  const std::vector<Point> seeds{seed};
  const auto picks = superlevel_search(g, 2.0, gamma, s, seeds);
  REQUIRE(picks.size() == 1);
  REQUIRE(picks[0].status == SeedStatus::found);
  CHECK(picks[0].r_bar > 0.0);
  CHECK(picks[0].r_bar <= picks[0].zeta_seed + 1e-12);
  // The bisection keeps the average at or above the level, and the cell
  // granularity overshoot stays small on this field.
  CHECK(picks[0].avg_q >= s * s);
  CHECK(picks[0].avg_q < 1.15 * s * s);
  // The dilated average has already dropped below the level.
  CHECK(picks[0].avg_q_5q < s * s);

  // A level above the peak leaves nothing to find.
  const auto none = superlevel_search(g, 2.0, gamma, peak * 1.5, seeds);
  CHECK(none[0].status == SeedStatus::below_level);

  // A flat field above the level never crosses it, so no radius matches.
  GridField flat(bounding_box(qg), std::array<int, 3>{32, 128, 128});
  flat.fill([](const Point&) { return 4.0; });
  const std::vector<Point> mid{make_point(-1.0, 0.0, 0.0)};
  const auto stuck = superlevel_search(flat, 2.0, gamma, 2.0, mid);
  CHECK(stuck[0].status == SeedStatus::unresolved);
}

TEST_CASE("shrinking averages identify Lebesgue points of a Lipschitz field") {
  const Cylinder qg = make_cylinder(make_point(0, 0, 0), 1.0);
  GridField g(bounding_box(qg), std::array<int, 3>{96, 96, 96});
  g.fill([](const Point& z) { return z.t + 0.5 * z.x[0] - 0.25 * z.v[0]; });
  RngStream rng(71, 16);
  const std::vector<double> radii{0.4, 0.3, 0.22};
  const auto reports = lebesgue_check(g, 10, radii, rng);
  REQUIRE(reports.size() == 10);
  for (const auto& rep : reports) {
    REQUIRE(rep.rows.size() == radii.size());
    for (std::size_t i = 0; i < rep.rows.size(); ++i) {
      REQUIRE(rep.rows[i].cells > 0);
      // Lipschitz: the average deviation is at most a fixed multiple of the
      // radius; the kinetic gauge contributes O(r^2) through the time shift
      // and the velocity-tilted x window on top of the O(r) velocity term.
      const double r = rep.rows[i].radius;
      CHECK(rep.rows[i].avg_dev <= 0.3 * r + 3.5 * r * r + r * r * r + 1e-9);
    }
  }
}
