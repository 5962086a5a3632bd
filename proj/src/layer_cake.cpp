#include "kg/layer_cake.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace kg {

std::vector<double> geometric_levels(double lo, double hi, std::size_t count) {
  if (!(lo > 0.0) || !(hi > lo)) throw std::invalid_argument("need 0 < lo < hi");
  if (count < 2) throw std::invalid_argument("need at least two levels");
  std::vector<double> out(count);
  const double ratio = std::log(hi / lo) / static_cast<double>(count - 1);
  for (std::size_t k = 0; k < count; ++k) out[k] = lo * std::exp(ratio * static_cast<double>(k));
  out.front() = lo;
  out.back() = hi;
  return out;
}

LevelFunction layer_cake(const GridField& f, const Cylinder& domain,
                         std::span<const double> levels) {
  for (std::size_t i = 1; i < levels.size(); ++i) {
    if (!(levels[i] > levels[i - 1])) throw std::invalid_argument("levels must be increasing");
  }
  std::vector<double> vals;
  visit_cells(f, domain, [&](std::size_t k) {
    const double v = f[k];
    if (!(v >= 0.0)) throw std::invalid_argument("layer cake requires a non-negative field");
    vals.push_back(v);
  });
  std::sort(vals.begin(), vals.end());
  // suffix[i] = sum of vals[i..end)
  std::vector<double> suffix(vals.size() + 1, 0.0);
  for (std::size_t i = vals.size(); i-- > 0;) suffix[i] = suffix[i + 1] + vals[i];

  LevelFunction out;
  out.levels.assign(levels.begin(), levels.end());
  out.mass.resize(levels.size());
  out.measure.resize(levels.size());
  const double cv = f.cell_volume();
  for (std::size_t k = 0; k < levels.size(); ++k) {
    const std::size_t i =
        static_cast<std::size_t>(std::upper_bound(vals.begin(), vals.end(), levels[k]) - vals.begin());
    out.mass[k] = suffix[i] * cv;
    out.measure[k] = static_cast<double>(vals.size() - i) * cv;
  }
  return out;
}

double superlevel_integral_pow(const GridField& f, const Cylinder& domain, double level,
                               double r) {
  double s = 0.0;
  visit_cells(f, domain, [&](std::size_t k) {
    if (f[k] > level) s += std::pow(f[k], r);
  });
  return s * f.cell_volume();
}

double superlevel_measure(const GridField& f, const Cylinder& domain, double level) {
  std::size_t n = 0;
  visit_cells(f, domain, [&](std::size_t k) {
    if (f[k] > level) ++n;
  });
  return static_cast<double>(n) * f.cell_volume();
}

namespace {

std::size_t first_level_at_or_above(const LevelFunction& L, double t) {
  const auto it = std::lower_bound(L.levels.begin(), L.levels.end(), t);
  if (it == L.levels.end()) throw std::domain_error("t exceeds the level grid");
  return static_cast<std::size_t>(it - L.levels.begin());
}

}  // namespace

double stieltjes_moment(const LevelFunction& L, double r, double t) {
  if (!(r >= 1.0)) throw std::invalid_argument("exponent must be >= 1");
  const std::size_t i0 = first_level_at_or_above(L, t);
  double s = 0.0;
  for (std::size_t k = i0; k + 1 < L.levels.size(); ++k) {
    const double mid = 0.5 * (L.levels[k] + L.levels[k + 1]);
    s -= std::pow(mid, r - 1.0) * (L.mass[k + 1] - L.mass[k]);
  }
  return s;
}

double layer_cake_rhs(const LevelFunction& L, double t) {
  const std::size_t i0 = first_level_at_or_above(L, t);
  double tail = 0.0;
  for (std::size_t k = i0; k + 1 < L.levels.size(); ++k) {
    tail += 0.5 * (L.measure[k] + L.measure[k + 1]) * (L.levels[k + 1] - L.levels[k]);
  }
  return t * L.measure[i0] + tail;
}

}  // namespace kg
