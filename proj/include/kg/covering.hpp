#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "kg/geometry.hpp"
#include "kg/grid_field.hpp"
#include "kg/rng.hpp"

namespace kg {

// Center shifted forward in time so that the shifted cylinder of radius r
// contains z and dilating it by 5 lands on the shifted cylinder of radius 5r.
Point shifted_center(const Point& z, double r);

struct CoveringResult {
  std::vector<std::size_t> selected;    // input indices, in selection order, pairwise disjoint
  std::vector<std::size_t> assignment;  // input index -> position in `selected`
};

// Greedy selection by descending radius (ties by input index). Each input
// cylinder intersects its assigned selected cylinder, whose radius is at
// least half its own; consequently it is contained in that cylinder's 5Q.
CoveringResult vitali_select(std::span<const Cylinder> family);

struct CoverReport {
  std::size_t samples = 0;
  std::size_t escapes = 0;                   // sampled points outside every selected 5Q
  std::size_t overlaps = 0;                  // intersecting pairs among selected
  std::size_t assignment_violations = 0;     // inputs not contained in their assigned 5Q
};

CoverReport verify_covering(std::span<const Cylinder> family, const CoveringResult& result,
                            std::size_t samples_per_cylinder, RngStream& rng);

enum class SeedStatus { found, below_level, unresolved };

struct SuperlevelPick {
  Point seed;
  SeedStatus status = SeedStatus::unresolved;
  double zeta_seed = 0.0;
  double r_bar = 0.0;
  Cylinder picked;           // meaningful when status == found
  double avg_q = 0.0;        // mean of g^q over the picked cylinder
  double avg_q_5q = 0.0;     // mean of g^q over the picked cylinder's 5Q
  double zeta_center = 0.0;  // cutoff value at the picked center
};

// For each seed z with gbold(z) > s, finds the largest r in (0, zeta(z)] with
// mean of gbold^q over Q_r(z_r) equal to s^q (coarse scan of 64 radii, then
// bisection to relative width 1e-6), following the shifted-center path.
std::vector<SuperlevelPick> superlevel_search(const GridField& gbold, double q, double gamma,
                                              double s, std::span<const Point> seeds);

// The picked cylinders of the successful seeds.
std::vector<Cylinder> superlevel_cover(const GridField& gbold, double q, double gamma, double s,
                                       std::span<const Point> seeds);

struct LebesgueRow {
  double radius = 0.0;
  double avg_dev = 0.0;  // mean of |f - f(z)| over the shifted cylinder
  std::size_t cells = 0;
};

struct LebesguePointReport {
  Point z;
  std::vector<LebesgueRow> rows;
};

// Differentiation check: averages of |f - f(z)| over shrinking shifted
// cylinders at random points; for Lipschitz f they decay like the radius.
std::vector<LebesguePointReport> lebesgue_check(const GridField& f, std::size_t points,
                                                std::span<const double> radii, RngStream& rng);

}  // namespace kg
