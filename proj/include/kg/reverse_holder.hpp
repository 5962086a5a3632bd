#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "kg/constants.hpp"
#include "kg/geometry.hpp"
#include "kg/grid_field.hpp"

namespace kg {

struct ScanSample {
  Cylinder inner;   // Q_R(z0); the dilated companion is Q_{gamma R}(z0)
  double A = 0.0;   // average of g^q over Q_R
  double M = 0.0;   // (average of g over Q_{gamma R})^q
  double H = 0.0;   // average of h^q over Q_{gamma R}
  double G = 0.0;   // average of g^q over Q_{gamma R}
};

struct ScanReport {
  std::vector<ScanSample> samples;
  double q = 2.0;
  double gamma = 2.0;
  double theta = 0.0;
  double r_min = 0.0;
  double r_max = 0.0;
  // Minimal b with A <= b (M + H) + theta G across all non-degenerate samples.
  double b_fit = 0.0;
  std::size_t worst = 0;
  std::size_t degenerate = 0;  // samples with M + H = 0
  bool checked = false;
  double b_supplied = 0.0;
  std::size_t violations = 0;  // with the supplied b
};

// Samples cylinder pairs Q_R(z0) inside Q_{gamma R}(z0) inside Q_gamma(origin)
// and measures the averages entering the reverse Holder inequality
//   avg_{Q_R} g^q <= b [ (avg_{Q_{gamma R}} g)^q + avg_{Q_{gamma R}} h^q ]
//                    + theta avg_{Q_{gamma R}} g^q.
// Centers are drawn uniformly in Q_gamma, radii log-uniformly in
// [r_min, r_max], where r_min spans four grid cells per axis and r_max is
// fixed by the containment constraint. Deterministic for a given seed.
ScanReport reverse_holder_scan(const GridField& g, const GridField& h, double q, double gamma,
                               int n_cylinders, std::uint64_t seed, double theta = 0.0,
                               std::optional<double> b_check = std::nullopt);

struct GehringCheckReport {
  double p = 0.0;
  double CG = 0.0;
  double lhs = 0.0;    // (avg over Q_1 of g^p)^{1/p}
  double rhs = 0.0;    // CG [ (avg over Q_gamma of g^q)^{1/q} + (avg over Q_gamma of h^p)^{1/p} ]
  double ratio = 0.0;  // lhs / rhs
  bool pass = false;
};

// Evaluates the higher-integrability conclusion on Q_1(0) against Q_gamma(0)
// by quadrature. Requires q <= p < p_star for the supplied parameters.
GehringCheckReport gehring_check(const GridField& g, const GridField& h,
                                 const GehringParams& params, double p, double CG);

}  // namespace kg
