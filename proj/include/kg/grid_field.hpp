#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "kg/geometry.hpp"

namespace kg {

// Uniform tensor grid over an axis-aligned box in (t, x_1..x_d, v_1..v_d)
// with one value per cell center. Flat layout: t-major, then the x axes,
// then the v axes, last axis fastest.
class GridField {
 public:
  GridField() = default;
  GridField(const Box& box, std::span<const int> shape);

  int d() const { return box_.d; }
  int axes() const { return box_.axes(); }
  const Box& box() const { return box_; }
  const std::vector<int>& shape() const { return n_; }
  std::size_t size() const { return val_.size(); }

  double operator[](std::size_t i) const { return val_[i]; }
  double& operator[](std::size_t i) { return val_[i]; }
  const std::vector<double>& values() const { return val_; }
  std::vector<double>& values() { return val_; }

  double cell_width(int axis) const { return h_[axis]; }
  double cell_volume() const { return cellvol_; }
  double cell_center(int axis, int i) const { return box_.lo[axis] + (i + 0.5) * h_[axis]; }
  std::size_t stride(int axis) const { return stride_[axis]; }

  std::size_t flatten(std::span<const int> idx) const;
  Point cell_point(std::span<const int> idx) const;

  // Nearest-cell lookup; the point must lie inside the box.
  double value_at(const Point& z) const;

  // Multilinear interpolation between cell centers, clamped at the edges.
  double value_interp(const Point& z) const;

  template <class F>
  void fill(F&& fn) {
    const int na = axes();
    std::vector<int> idx(na, 0);
    for (std::size_t k = 0; k < val_.size(); ++k) {
      val_[k] = fn(cell_point(idx));
      for (int a = na - 1; a >= 0; --a) {
        if (++idx[a] < n_[a]) break;
        idx[a] = 0;
      }
    }
  }

  // Single file: one JSON header line (box, shape, layout, dtype, byte order),
  // a newline, then the raw little-endian float64 payload.
  void write_binary(const std::string& path) const;
  static GridField read_binary(const std::string& path);
  void write_csv(const std::string& path) const;

 private:
  Box box_;
  std::vector<int> n_;
  std::vector<double> h_;
  std::vector<std::size_t> stride_;
  std::vector<double> val_;
  double cellvol_ = 0.0;
};

// Visit every cell whose center lies in q; fn(flat_index).
// Throws std::domain_error unless the bounding box of q is inside the grid box.
void visit_cells(const GridField& f, const Cylinder& q, const std::function<void(std::size_t)>& fn);

struct CellStats {
  double sum = 0.0;       // of g(value) over member cells
  std::size_t cells = 0;
};

CellStats cell_sum(const GridField& f, const Cylinder& q);                  // g = identity
CellStats cell_sum_pow(const GridField& f, double p, const Cylinder& q);    // g = |.|^p

double integrate(const GridField& f, const Cylinder& q);       // sum * cell volume
double average(const GridField& f, const Cylinder& q);         // mean over member cells
double average_pow(const GridField& f, double p, const Cylinder& q);
double lp_norm(const GridField& f, double p, const Cylinder& q);

}  // namespace kg
