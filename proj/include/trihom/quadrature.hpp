#pragma once

#include <vector>

#include "trihom/types.hpp"

namespace trihom {

// Discretization of integrals over the complex plane, as a tensor product of
// a 1D rule on [-radius, radius] per real axis.
struct QuadratureSpec {
  enum class Rule { gauss_legendre, trapezoid };
  double radius = 6.0;
  int points_per_axis = 121;
  Rule rule = Rule::gauss_legendre;

  void validate() const;
};

struct QuadratureRule1D {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Gauss-Legendre nodes/weights on [-1, 1], Newton iteration on the Legendre
// recurrence.
QuadratureRule1D gauss_legendre(int n);

// Rule on [-radius, radius] per the spec.
QuadratureRule1D make_rule(const QuadratureSpec& spec);

}  // namespace trihom
