#include "trihom/grid.hpp"

#include <algorithm>
#include <cmath>

#include "trihom/parallel.hpp"

namespace trihom {

void GridSpec::validate() const {
  if (nx < 2 || ny < 2) throw std::invalid_argument("grid needs nx, ny >= 2");
  if (!(x_max > x_min) || !(y_max > y_min))
    throw std::invalid_argument("grid window must have positive extent");
  if (!std::isfinite(x_min) || !std::isfinite(x_max) || !std::isfinite(y_min) ||
      !std::isfinite(y_max))
    throw std::invalid_argument("grid window must be finite");
}

bool GridSpec::operator==(const GridSpec& o) const {
  return x_min == o.x_min && x_max == o.x_max && y_min == o.y_min && y_max == o.y_max &&
         nx == o.nx && ny == o.ny;
}

double RealGrid::integral() const {
  double s = 0.0;
  for (double v : values) s += v;
  return s * spec.cell_area();
}

double RealGrid::max_value() const {
  return values.empty() ? 0.0 : *std::max_element(values.begin(), values.end());
}

RealGrid make_grid(const GridSpec& spec, AxisLabel label) {
  spec.validate();
  RealGrid g;
  g.spec = spec;
  g.label = label;
  g.values.assign(static_cast<size_t>(spec.nx) * spec.ny, 0.0);
  return g;
}

RealGrid eval_grid(const std::function<double(Complex)>& f, const GridSpec& spec,
                   AxisLabel label, long budget, int threads) {
  spec.validate();
  if (static_cast<long>(spec.nx) * spec.ny > budget)
    throw std::invalid_argument("grid point budget exceeded");
  RealGrid g = make_grid(spec, label);
  parallel_for(spec.ny, threads, [&](long jb, long je) {
    for (long j = jb; j < je; ++j)
      for (int i = 0; i < spec.nx; ++i)
        g.at(i, static_cast<int>(j)) = f(Complex(spec.x(i), spec.y(static_cast<int>(j))));
  });
  return g;
}

}  // namespace trihom
