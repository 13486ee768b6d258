#include "trihom/quadrature.hpp"

#include <cmath>

namespace trihom {

void QuadratureSpec::validate() const {
  if (!(radius > 0.0)) throw std::invalid_argument("quadrature radius must be > 0");
  if (points_per_axis < 16) throw std::invalid_argument("points_per_axis must be >= 16");
}

QuadratureRule1D gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre order must be >= 1");
  QuadratureRule1D r;
  r.nodes.assign(n, 0.0);
  r.weights.assign(n, 0.0);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1);
      }
      pp = n * (z * p1 - p2) / (z * z - 1.0);
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::abs(z - z1) < 1e-15) break;
    }
    r.nodes[i] = -z;
    r.nodes[n - 1 - i] = z;
    r.weights[i] = 2.0 / ((1.0 - z * z) * pp * pp);
    r.weights[n - 1 - i] = r.weights[i];
  }
  if (n % 2 == 1) r.nodes[n / 2] = 0.0;  // exact center node for odd orders
  return r;
}

QuadratureRule1D make_rule(const QuadratureSpec& spec) {
  spec.validate();
  const int n = spec.points_per_axis;
  const double R = spec.radius;
  QuadratureRule1D r;
  if (spec.rule == QuadratureSpec::Rule::gauss_legendre) {
    r = gauss_legendre(n);
    for (double& x : r.nodes) x *= R;
    for (double& w : r.weights) w *= R;
  } else {
    const double h = 2.0 * R / (n - 1);
    r.nodes.resize(n);
    r.weights.assign(n, h);
    for (int i = 0; i < n; ++i) r.nodes[i] = -R + i * h;
    r.weights.front() *= 0.5;
    r.weights.back() *= 0.5;
  }
  return r;
}

}  // namespace trihom
