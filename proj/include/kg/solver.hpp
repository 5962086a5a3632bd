#pragma once

#include <cstdint>
#include <functional>

#include "kg/geometry.hpp"
#include "kg/grid_field.hpp"

namespace kg {

// Scalar rough coefficients for d = 1: diffusivity A in [lambda, Lambda],
// drift B with |B| <= Lambda, source S. All merely measurable; the scheme
// never differentiates them.
struct CoefficientField {
  std::function<double(const Point&)> A;
  std::function<double(const Point&)> B;
  std::function<double(const Point&)> S;
  double lambda = 1.0;
  double Lambda = 2.0;
};

CoefficientField make_constant_coefficients(double A, double B = 0.0, double S = 0.0);
// A alternates between lambda and Lambda on blocks scaled kinetically
// (block^2 in t, block^3 in x, block in v).
CoefficientField make_checkerboard_coefficients(double lambda, double Lambda, double block);
// A piecewise-constant random in [lambda, Lambda] per block; optional random
// drift in [-Lambda, Lambda].
CoefficientField make_random_coefficients(double lambda, double Lambda, double block,
                                          std::uint64_t seed, bool with_drift);

enum class VelocityBC { neumann, dirichlet };

struct SolverProblem {
  double t0 = -1.0;  // start time, integrates forward to 0
  double X = 1.0;    // x in [-X, X), periodic
  double V = 1.0;    // v in (-V, V)
  int nt = 64, nx = 64, nv = 64;
  int substeps = 1;  // time substeps per stored slice
  VelocityBC vbc = VelocityBC::neumann;
  std::function<double(double, double)> initial;  // (x, v) at t0
};

struct SolveStats {
  double mass_initial = 0.0;
  double mass_final = 0.0;
  double max_step_mass_drift = 0.0;  // max relative per-substep drift
  double cfl = 0.0;                  // max |v| dt / dx actually used
  int steps = 0;
};

// Operator-split marcher: second-order upwind-biased conservative transport
// in x, explicit centered drift, explicit source, implicit flux-form
// diffusion in v (tridiagonal solves). Stored slices sit at cell-center
// times of the (nt, nx, nv) grid over [t0, 0] x [-X, X] x [-V, V].
GridField solve_kfp(const SolverProblem& prob, const CoefficientField& coef,
                    SolveStats* stats = nullptr);

// Fundamental solution of f_t + v f_x = f_vv (d = 1) from a point mass at
// the origin: centered Gaussian with Var(v) = 2t, Var(x) = 2t^3/3, Cov = t^2.
double kolmogorov_kernel(double t, double x, double v);

// n^3 benchmark against the fundamental solution: a grid delta at the cell
// center nearest the origin, released at t0 = -T 2n/(2n-1) so the last
// stored slice sits at elapsed time exactly T.
SolverProblem kolmogorov_spike_problem(int n, double T);

// Samples a scalar coefficient on the problem's storage grid.
GridField sample_coefficient(const SolverProblem& prob,
                             const std::function<double(const Point&)>& fn);

// d = 1: signed centered difference in v (one-sided at the walls);
// d >= 2: Euclidean norm of the velocity gradient.
GridField velocity_gradient(const GridField& f);

struct SliceMoments {
  double mass = 0.0;
  double mean_x = 0.0, mean_v = 0.0;
  double var_x = 0.0, var_v = 0.0, cov_xv = 0.0;
};
SliceMoments slice_moments(const GridField& f, int time_index);

struct EnergyRatioReport {
  double numerator = 0.0;    // integral of |grad_v f|^2 over the inner cylinder
  double denominator = 0.0;  // integral of f^2 + S^2 over the outer cylinder
  double ratio = 0.0;
  bool degenerate = false;
};
EnergyRatioReport energy_ratio(const GridField& f, const GridField& S, double r, double R,
                               const Point& z0);
EnergyRatioReport energy_ratio(const GridField& grad, const GridField& f, const GridField& S,
                               double r, double R, const Point& z0);

struct GainReport {
  double grad_gain = 0.0;  // ||grad f||_{2+eps, Q_R} / (||grad f||_{2, Q_gR} + ||S||_{2+eps, Q_gR})
  double sol_gain = 0.0;   // ||f||_{2+1/d, Q_R} / (||f||_{2, Q_gR} + ||S||_{2, Q_gR})
  double osc_gain = 0.0;   // ||f - <f>_{Q_R}||_{p, Q_R} / (||grad f||_{2, Q_2R} + ||S||_{2, Q_2R})
  double p_sol = 0.0;      // 2 + 1/d
  double p_osc = 0.0;      // 6(2d+1)/(6d+1)
  double eps = 0.0;
  bool grad_degenerate = false, sol_degenerate = false, osc_degenerate = false;
};
GainReport gain_ratios(const GridField& f, const GridField& S, const Point& z, double R,
                       double gamma, double eps);

}  // namespace kg
