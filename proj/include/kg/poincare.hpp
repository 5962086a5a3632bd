#pragma once

#include "kg/geometry.hpp"
#include "kg/grid_field.hpp"

namespace kg {

struct PoincareReport {
  double q = 2.0;
  double lhs = 0.0;   // || f - <f>_Q ||_{L^q(Q)}
  double dual = 0.0;  // negative-norm transport term, per velocity slice
  double grad = 0.0;  // || grad_v f ||_{L^q(Q)}
  double rhs = 0.0;   // dual + grad
  double constant = 0.0;
  bool approximate = false;  // q != 2 uses the fixed-budget ascent estimate
  bool degenerate = false;   // rhs vanished
};

// Oscillation-vs-derivative check on a cylinder with zero center velocity
// (so every velocity slice sees the same time-space rectangle). The
// transport term (d_t + v d_x) f is measured in the dual norm over that
// rectangle: exactly for q = 2 via one Dirichlet-Laplacian solve per
// velocity slice, approximately (fixed ascent budget, lower bound) for
// q in (1,2).
PoincareReport poincare_check(const GridField& f, const Cylinder& Q, double q_exp);

}  // namespace kg
