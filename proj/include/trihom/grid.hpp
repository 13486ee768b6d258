#pragma once

#include <functional>
#include <vector>

#include "trihom/types.hpp"

namespace trihom {

// Rectangular grid of sample points x_i = x_min + i*dx (endpoints included).
// For histogram and integration purposes each point is the center of a
// dx-by-dy cell.
struct GridSpec {
  double x_min = -1.0, x_max = 1.0;
  double y_min = -1.0, y_max = 1.0;
  int nx = 2, ny = 2;

  double dx() const { return (x_max - x_min) / (nx - 1); }
  double dy() const { return (y_max - y_min) / (ny - 1); }
  double x(int i) const { return x_min + i * dx(); }
  double y(int j) const { return y_min + j * dy(); }
  double cell_area() const { return dx() * dy(); }
  void validate() const;
  bool operator==(const GridSpec& o) const;
};

enum class AxisLabel { alpha_plane, y_plane };

struct RealGrid {
  GridSpec spec;
  AxisLabel label = AxisLabel::alpha_plane;
  std::vector<double> values;  // values[j*nx + i], rows are y-lines, y ascending

  double& at(int i, int j) { return values[static_cast<size_t>(j) * spec.nx + i]; }
  double at(int i, int j) const { return values[static_cast<size_t>(j) * spec.nx + i]; }
  double integral() const;  // Riemann sum * cell area
  double max_value() const;
};

RealGrid make_grid(const GridSpec& spec, AxisLabel label);

inline constexpr long kDefaultGridBudget = 16L * 1024 * 1024;

// Evaluates f(x + iy) at every grid point. Order-independent; rows are
// distributed across threads.
RealGrid eval_grid(const std::function<double(Complex)>& f, const GridSpec& spec,
                   AxisLabel label, long budget = kDefaultGridBudget, int threads = 1);

}  // namespace trihom
