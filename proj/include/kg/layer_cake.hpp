#pragma once

#include <span>
#include <vector>

#include "kg/geometry.hpp"
#include "kg/grid_field.hpp"

namespace kg {

// Superlevel-set calculus of a non-negative field restricted to a cylinder:
// per level t, the mass above the level and the measure of {f > t}.
struct LevelFunction {
  std::vector<double> levels;   // strictly increasing
  std::vector<double> mass;     // integral of f over {f > level}
  std::vector<double> measure;  // volume of {f > level}
};

std::vector<double> geometric_levels(double lo, double hi, std::size_t count);

LevelFunction layer_cake(const GridField& f, const Cylinder& domain, std::span<const double> levels);

// Direct quadrature of the truncated power integral and level-set measure.
double superlevel_integral_pow(const GridField& f, const Cylinder& domain, double level, double r);
double superlevel_measure(const GridField& f, const Cylinder& domain, double level);

// -Int_t^inf s^{r-1} d(mass)(s) approximated on the level grid with midpoint
// weights; for r = 1 this telescopes to mass(t) exactly.
double stieltjes_moment(const LevelFunction& L, double r, double t);

// t * measure(t) + Int_t^inf measure(s) ds on the level grid (trapezoid).
double layer_cake_rhs(const LevelFunction& L, double t);

}  // namespace kg
