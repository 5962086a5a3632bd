#include "kg/grid_field.hpp"

#include <algorithm>
#include <bit>
#include <cassert>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace kg {

namespace {

void require_little_endian() {
  if constexpr (std::endian::native != std::endian::little) {
    throw std::runtime_error("grid field i/o requires a little-endian host");
  }
}

}  // namespace

GridField::GridField(const Box& box, std::span<const int> shape) : box_(box) {
  const int na = box.axes();
  if (static_cast<int>(shape.size()) != na) {
    throw std::invalid_argument("grid shape must have one entry per axis (t, x.., v..)");
  }
  n_.assign(shape.begin(), shape.end());
  h_.resize(na);
  stride_.assign(na, 1);
  cellvol_ = 1.0;
  std::size_t total = 1;
  for (int a = 0; a < na; ++a) {
    if (n_[a] <= 0) throw std::invalid_argument("grid shape entries must be positive");
    const double w = box.hi[a] - box.lo[a];
    if (!(w > 0.0)) throw std::invalid_argument("grid box must have positive extent on every axis");
    h_[a] = w / n_[a];
    cellvol_ *= h_[a];
    total *= static_cast<std::size_t>(n_[a]);
  }
  for (int a = na - 2; a >= 0; --a) stride_[a] = stride_[a + 1] * static_cast<std::size_t>(n_[a + 1]);
  val_.assign(total, 0.0);
}

std::size_t GridField::flatten(std::span<const int> idx) const {
  assert(static_cast<int>(idx.size()) == axes());
  std::size_t k = 0;
  for (int a = 0; a < axes(); ++a) {
    assert(idx[a] >= 0 && idx[a] < n_[a]);
    k += static_cast<std::size_t>(idx[a]) * stride_[a];
  }
  return k;
}

Point GridField::cell_point(std::span<const int> idx) const {
  assert(static_cast<int>(idx.size()) == axes());
  Point z;
  z.d = box_.d;
  z.t = cell_center(0, idx[0]);
  for (int i = 0; i < box_.d; ++i) {
    z.x[i] = cell_center(1 + i, idx[1 + i]);
    z.v[i] = cell_center(1 + box_.d + i, idx[1 + box_.d + i]);
  }
  return z;
}

double GridField::value_at(const Point& z) const {
  if (z.d != box_.d) throw std::invalid_argument("point dimension does not match grid");
  std::size_t k = 0;
  for (int a = 0; a < axes(); ++a) {
    double c = (a == 0) ? z.t : (a <= box_.d ? z.x[a - 1] : z.v[a - 1 - box_.d]);
    const double slack = 1e-9 * std::max(1.0, box_.hi[a] - box_.lo[a]);
    if (c < box_.lo[a] - slack || c > box_.hi[a] + slack) {
      throw std::domain_error("point lies outside the grid box");
    }
    long i = static_cast<long>(std::floor((c - box_.lo[a]) / h_[a]));
    i = std::clamp(i, 0L, static_cast<long>(n_[a]) - 1);
    k += static_cast<std::size_t>(i) * stride_[a];
  }
  return val_[k];
}

double GridField::value_interp(const Point& z) const {
  if (z.d != box_.d) throw std::invalid_argument("point dimension does not match grid");
  const int na = axes();
  std::array<std::size_t, 7> base{};
  std::array<double, 7> frac{};
  for (int a = 0; a < na; ++a) {
    double c = (a == 0) ? z.t : (a <= box_.d ? z.x[a - 1] : z.v[a - 1 - box_.d]);
    const double slack = 1e-9 * std::max(1.0, box_.hi[a] - box_.lo[a]);
    if (c < box_.lo[a] - slack || c > box_.hi[a] + slack) {
      throw std::domain_error("point lies outside the grid box");
    }
    const double u = (c - box_.lo[a]) / h_[a] - 0.5;
    double k = std::floor(u);
    double t = u - k;
    if (k < 0) {
      k = 0;
      t = 0.0;
    }
    if (k > n_[a] - 2) {
      k = n_[a] > 1 ? n_[a] - 2 : 0;
      t = n_[a] > 1 ? 1.0 : 0.0;
    }
    base[a] = static_cast<std::size_t>(k);
    frac[a] = t;
  }
  double out = 0.0;
  for (unsigned corner = 0; corner < (1u << na); ++corner) {
    double w = 1.0;
    std::size_t k = 0;
    for (int a = 0; a < na; ++a) {
      const bool hi = (corner >> a) & 1u;
      w *= hi ? frac[a] : 1.0 - frac[a];
      std::size_t i = base[a] + (hi ? 1 : 0);
      if (i >= static_cast<std::size_t>(n_[a])) i = static_cast<std::size_t>(n_[a]) - 1;
      k += i * stride_[a];
    }
    if (w != 0.0) out += w * val_[k];
  }
  return out;
}

namespace {

struct AxisWindow {
  long lo = 0, hi = -1;
  bool empty() const { return lo > hi; }
};

// Exact index window of cell centers satisfying pred, assuming the
// satisfying set is an interval contained in [blo, bhi] on this axis.
template <class P>
AxisWindow axis_window(double blo, double bhi, double lo0, double h, long n, P&& pred) {
  AxisWindow w;
  w.lo = std::max(0L, static_cast<long>(std::floor((blo - lo0) / h - 0.5)) - 1);
  w.hi = std::min(n - 1, static_cast<long>(std::ceil((bhi - lo0) / h - 0.5)) + 1);
  auto center = [&](long k) { return lo0 + (static_cast<double>(k) + 0.5) * h; };
  while (w.lo <= w.hi && !pred(center(w.lo))) ++w.lo;
  while (w.hi >= w.lo && !pred(center(w.hi))) --w.hi;
  return w;
}

void check_inside(const GridField& f, const Cylinder& q) {
  const Box bb = bounding_box(q);
  const Box& gb = f.box();
  if (bb.d != gb.d) throw std::invalid_argument("cylinder dimension does not match grid");
  for (int a = 0; a < gb.axes(); ++a) {
    const double slack = 1e-9 * std::max(1.0, gb.hi[a] - gb.lo[a]);
    if (bb.lo[a] < gb.lo[a] - slack || bb.hi[a] > gb.hi[a] + slack) {
      std::ostringstream msg;
      msg << "cylinder (r=" << q.r << ") extends outside the grid box on axis " << a << " ["
          << bb.lo[a] << ", " << bb.hi[a] << "] vs [" << gb.lo[a] << ", " << gb.hi[a] << "]";
      throw std::domain_error(msg.str());
    }
  }
}

}  // namespace

void visit_cells(const GridField& f, const Cylinder& q,
                 const std::function<void(std::size_t)>& fn) {
  check_inside(f, q);
  const Box& gb = f.box();
  const Point& c = q.center;
  const double r = q.r;
  const double r2 = r * r;
  const double rc = r2 * r;

  const auto tw = axis_window(c.t - r2, c.t, gb.lo[0], f.cell_width(0), f.shape()[0],
                              [&](double tc) {
                                const double dt = tc - c.t;
                                return dt <= 0.0 && dt > -r2;
                              });
  if (tw.empty()) return;

  if (gb.d == 1) {
    const auto vw = axis_window(c.v[0] - r, c.v[0] + r, gb.lo[2], f.cell_width(2), f.shape()[2],
                                [&](double vc) {
                                  const double dv = vc - c.v[0];
                                  return dv * dv < r2;
                                });
    if (vw.empty()) return;
    for (long it = tw.lo; it <= tw.hi; ++it) {
      const double dt = f.cell_center(0, static_cast<int>(it)) - c.t;
      const double cx = c.x[0] + dt * c.v[0];
      const auto xw = axis_window(cx - rc, cx + rc, gb.lo[1], f.cell_width(1), f.shape()[1],
                                  [&](double xc) {
                                    const double dx = xc - c.x[0] - dt * c.v[0];
                                    return dx * dx < rc * rc;
                                  });
      const std::size_t base_t = static_cast<std::size_t>(it) * f.stride(0);
      for (long ix = xw.lo; ix <= xw.hi; ++ix) {
        const std::size_t base = base_t + static_cast<std::size_t>(ix) * f.stride(1);
        for (long iv = vw.lo; iv <= vw.hi; ++iv) {
          fn(base + static_cast<std::size_t>(iv));
        }
      }
    }
    return;
  }

  // General dimension: prune with per-axis windows, then test each center.
  const int na = gb.axes();
  const Box bb = bounding_box(q);
  std::vector<AxisWindow> win(na);
  win[0] = tw;
  for (int a = 1; a < na; ++a) {
    win[a] = axis_window(bb.lo[a], bb.hi[a], gb.lo[a], f.cell_width(a), f.shape()[a],
                         [&](double cc) { return cc >= bb.lo[a] && cc <= bb.hi[a]; });
    if (win[a].empty()) return;
  }
  std::vector<int> idx(na);
  for (int a = 0; a < na; ++a) idx[a] = static_cast<int>(win[a].lo);
  while (true) {
    const Point z = f.cell_point(idx);
    if (contains(q, z)) fn(f.flatten(idx));
    int a = na - 1;
    for (; a >= 0; --a) {
      if (++idx[a] <= static_cast<int>(win[a].hi)) break;
      idx[a] = static_cast<int>(win[a].lo);
    }
    if (a < 0) break;
  }
}

CellStats cell_sum(const GridField& f, const Cylinder& q) {
  CellStats s;
  visit_cells(f, q, [&](std::size_t k) {
    s.sum += f[k];
    ++s.cells;
  });
  return s;
}

CellStats cell_sum_pow(const GridField& f, double p, const Cylinder& q) {
  CellStats s;
  visit_cells(f, q, [&](std::size_t k) {
    s.sum += std::pow(std::abs(f[k]), p);
    ++s.cells;
  });
  return s;
}

double integrate(const GridField& f, const Cylinder& q) {
  return cell_sum(f, q).sum * f.cell_volume();
}

double average(const GridField& f, const Cylinder& q) {
  const CellStats s = cell_sum(f, q);
  if (s.cells == 0) throw std::domain_error("no cell centers inside cylinder; grid too coarse");
  return s.sum / static_cast<double>(s.cells);
}

double average_pow(const GridField& f, double p, const Cylinder& q) {
  const CellStats s = cell_sum_pow(f, p, q);
  if (s.cells == 0) throw std::domain_error("no cell centers inside cylinder; grid too coarse");
  return s.sum / static_cast<double>(s.cells);
}

double lp_norm(const GridField& f, double p, const Cylinder& q) {
  const CellStats s = cell_sum_pow(f, p, q);
  return std::pow(s.sum * f.cell_volume(), 1.0 / p);
}

void GridField::write_binary(const std::string& path) const {
  require_little_endian();
  nlohmann::json hdr;
  hdr["format"] = "kgf1";
  hdr["dtype"] = "float64";
  hdr["byte_order"] = "little";
  hdr["layout"] = "t-major,x,v;last-axis-fastest";
  hdr["d"] = box_.d;
  hdr["shape"] = n_;
  hdr["lo"] = std::vector<double>(box_.lo.begin(), box_.lo.begin() + axes());
  hdr["hi"] = std::vector<double>(box_.hi.begin(), box_.hi.begin() + axes());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << hdr.dump() << '\n';
  out.write(reinterpret_cast<const char*>(val_.data()),
            static_cast<std::streamsize>(val_.size() * sizeof(double)));
  if (!out) throw std::runtime_error("write failed: " + path);
}

GridField GridField::read_binary(const std::string& path) {
  require_little_endian();
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("missing header line: " + path);
  const nlohmann::json hdr = nlohmann::json::parse(line);
  if (hdr.at("format") != "kgf1" || hdr.at("dtype") != "float64" || hdr.at("byte_order") != "little") {
    throw std::runtime_error("unsupported grid file header: " + path);
  }
  Box box;
  box.d = hdr.at("d").get<int>();
  const auto lo = hdr.at("lo").get<std::vector<double>>();
  const auto hi = hdr.at("hi").get<std::vector<double>>();
  const auto shape = hdr.at("shape").get<std::vector<int>>();
  if (static_cast<int>(lo.size()) != box.axes() || hi.size() != lo.size() ||
      shape.size() != lo.size()) {
    throw std::runtime_error("inconsistent grid file header: " + path);
  }
  std::copy(lo.begin(), lo.end(), box.lo.begin());
  std::copy(hi.begin(), hi.end(), box.hi.begin());
  GridField f(box, shape);
  in.read(reinterpret_cast<char*>(f.val_.data()),
          static_cast<std::streamsize>(f.val_.size() * sizeof(double)));
  if (in.gcount() != static_cast<std::streamsize>(f.val_.size() * sizeof(double))) {
    throw std::runtime_error("truncated grid file payload: " + path);
  }
  return f;
}

void GridField::write_csv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "t";
  for (int i = 0; i < box_.d; ++i) out << ",x" << (i + 1);
  for (int i = 0; i < box_.d; ++i) out << ",v" << (i + 1);
  out << ",value\n";
  out.precision(17);
  const int na = axes();
  std::vector<int> idx(na, 0);
  for (std::size_t k = 0; k < val_.size(); ++k) {
    for (int a = 0; a < na; ++a) out << cell_center(a, idx[a]) << ',';
    out << val_[k] << '\n';
    for (int a = na - 1; a >= 0; --a) {
      if (++idx[a] < n_[a]) break;
      idx[a] = 0;
    }
  }
}

}  // namespace kg
