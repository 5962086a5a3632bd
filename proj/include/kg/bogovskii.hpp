#pragma once

#include <cstdint>
#include <vector>

namespace kg {

// Time-space rectangle [t_lo, t_hi] x [x_lo, x_hi] split into nt x nx cells.
// Sources live at cell centers (row-major, t index slow). The returned vector
// field lives on the staggered faces: ht has (nt+1) x nx entries on constant-t
// faces, hx has nt x (nx+1) entries on constant-x faces, and every outer face
// is exactly zero.
struct BogovskiiProblem {
  double t_lo = 0.0, t_hi = 1.0;
  double x_lo = 0.0, x_hi = 1.0;
  int nt = 64, nx = 64;
};

struct BogovskiiResult {
  int nt = 0, nx = 0;
  double dt = 0.0, dx = 0.0;
  std::vector<double> ht;  // (nt+1) * nx
  std::vector<double> hx;  // nt * (nx+1)
  double g_norm = 0.0;        // L^p norm of the (de-meaned) source
  double residual = 0.0;      // ||div h - G||_2 / ||G||_2
  double h_norm = 0.0;        // L^p norm of h
  double grad_norm = 0.0;     // L^p norm of the zero-extended gradient of h
  double stability = 0.0;     // W^{1,p} norm of h over L^p norm of G
  int iterations = 0;
};

// Least-norm discrete solution of div h = G with zero boundary faces,
// obtained by conjugate gradients on the div-div-transpose normal equations.
// G must have zero grid mean up to 1e-12 relative; the tiny remainder is
// removed exactly before solving. Residual is driven below 1e-9 relative
// (reported), well inside the 1e-8 contract.
BogovskiiResult bogovskii_solve(const BogovskiiProblem& prob, const std::vector<double>& G,
                                double p_exp = 2.0);

// Deterministic mean-zero test source built from hashed white noise.
std::vector<double> random_mean_zero_source(const BogovskiiProblem& prob, std::uint64_t seed);

}  // namespace kg
