#pragma once

#include "kg/geometry.hpp"
#include "kg/grid_field.hpp"

namespace kg {

// Cutoff adapted to the invariant geometry: positive inside the reference
// cylinder of radius gamma at the origin, vanishing on its parabolic boundary.
double zeta(const Point& z, double gamma);

// Lower bound for zeta on the unit cylinder at the origin.
double c_gamma(double gamma);

struct LocalizationContext {
  int d = 1;
  double q = 2.0;
  double gamma = 2.0;
  double c0 = 0.0;     // 2^{(4d+2)/q}
  double gnorm = 0.0;  // L^q norm of the reference field over the radius-gamma cylinder
};

// gnorm is computed from g over the origin-centered cylinder of radius gamma,
// which must be resolved by (and contained in) the grid.
LocalizationContext make_localization(const GridField& g, double q, double gamma);

// Scaled value at z of a field whose raw value is fval.
double localize_value(double fval, const Point& z, const LocalizationContext& ctx);

// Pointwise scaling of a whole field on its own grid.
GridField localize(const GridField& f, const LocalizationContext& ctx);

}  // namespace kg
