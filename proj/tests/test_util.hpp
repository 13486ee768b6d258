#pragma once

#include <random>

#include "trihom/fock.hpp"
#include "trihom/tritter.hpp"
#include "trihom/types.hpp"

namespace trihom::testutil {

// Scaling-and-squaring Taylor exponential; oracle for displacement matrices.
inline CMat expm(const CMat& a) {
  const double nrm = a.cwiseAbs().rowwise().sum().maxCoeff();
  int squarings = 0;
  double scale = 1.0;
  while (nrm * scale > 0.5) {
    scale *= 0.5;
    ++squarings;
  }
  const CMat as = a * scale;
  CMat term = CMat::Identity(a.rows(), a.cols());
  CMat sum = term;
  for (int k = 1; k <= 40; ++k) {
    term = (term * as) / double(k);
    sum += term;
    if (term.cwiseAbs().maxCoeff() < 1e-18) break;
  }
  for (int i = 0; i < squarings; ++i) sum = sum * sum;
  return sum;
}

inline CMat displacement_by_expm(Complex alpha, int cutoff) {
  const CMat a = ladder_matrix(cutoff).mat;
  return expm(alpha * a.adjoint() - std::conj(alpha) * a);
}

// Random three-mode state supported on total photon number <= max_total.
inline ThreeModeState random_three_mode_state(std::mt19937_64& rng,
                                              const std::array<int, 3>& cutoffs, int max_total) {
  std::normal_distribution<double> g(0.0, 1.0);
  ThreeModeState s;
  s.cutoffs = cutoffs;
  s.amps = CVec::Zero(s.dim());
  for (int n1 = 0; n1 <= cutoffs[0]; ++n1)
    for (int n2 = 0; n2 <= cutoffs[1]; ++n2)
      for (int n3 = 0; n3 <= cutoffs[2]; ++n3)
        if (n1 + n2 + n3 <= max_total) s.amps[s.index(n1, n2, n3)] = Complex(g(rng), g(rng));
  s.amps /= s.amps.norm();
  return s;
}

inline double lstsq_loglog_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  const size_t n = xs.size();
  double mx = 0, my = 0;
  for (size_t i = 0; i < n; ++i) {
    mx += std::log(xs[i]);
    my += std::log(ys[i]);
  }
  mx /= double(n);
  my /= double(n);
  double num = 0, den = 0;
  for (size_t i = 0; i < n; ++i) {
    num += (std::log(xs[i]) - mx) * (std::log(ys[i]) - my);
    den += (std::log(xs[i]) - mx) * (std::log(xs[i]) - mx);
  }
  return num / den;
}

}  // namespace trihom::testutil
