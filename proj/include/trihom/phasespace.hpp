#pragma once

#include <vector>

#include "trihom/fock.hpp"
#include "trihom/quadrature.hpp"
#include "trihom/types.hpp"

namespace trihom {

// Accuracy diagnostics attached to phase-space evaluations. Real-valued
// outputs report the magnitude of their (analytically zero) imaginary part;
// tail_bound estimates truncation error from mass near the Fock cutoff.
struct Diag {
  double imag_residual = 0.0;
  double tail_bound = 0.0;
  bool warning = false;
};

inline constexpr double kTailWarnThreshold = 1e-8;
inline constexpr double kImagWarnThreshold = 1e-6;

// s-ordered characteristic function chi_s(lambda) = Tr{rho D(lambda)} e^{s|lambda|^2/2}.
Complex characteristic_fn(const FockOperator& rho, Complex lambda, double s,
                          Diag* diag = nullptr);

// chi_s on the tensor grid lambda = nodes[i] + I*nodes[j]; entry (i, j).
CMat characteristic_table(const FockOperator& rho, double s,
                          const std::vector<double>& nodes);

// Generalized Wigner function: real part of the quadrature approximation of
// integral d^2lambda/pi chi_s(lambda) e^{lambda_bar alpha - lambda alpha_bar}.
// Only s <= 0 is supported; the integral diverges numerically for s > 0.
double wigner_s(const FockOperator& rho, Complex alpha, double s, const QuadratureSpec& q,
                Diag* diag = nullptr);

// Same transform evaluated on the tensor grid xs x ys; entry (i, j) is
// W_s(xs[i] + I*ys[j]).
RMat wigner_grid(const FockOperator& rho, double s, const QuadratureSpec& q,
                 const std::vector<double>& xs, const std::vector<double>& ys,
                 Diag* diag = nullptr, int threads = 1);

// Husimi Q-function <alpha|rho|alpha>/pi, computed from coherent-state
// amplitudes (no quadrature). The optional diagnostic carries the coherent
// truncation deficit at this alpha (cutoff adequacy for large |alpha|).
double q_function(const FockOperator& rho, Complex alpha, Diag* diag = nullptr);
double q_function(const FockVector& psi, Complex alpha);

// Probe-convolved density via the displaced-overlap trace:
// (1/pi) Tr{rho_S D(alpha) rho_P D^dag(alpha)}. Canonical route, exact up to
// truncation.
double k_sp_trace(const FockOperator& rho_s, const FockOperator& rho_p, Complex alpha,
                  Diag* diag = nullptr);
double k_sp_trace(const FockVector& psi_s, const FockVector& psi_p, Complex alpha);

// Same density via the convolution of the two Wigner functions,
// integral d^2beta/pi^2 W_{0|S}(alpha+beta) W_{0|P}(beta) on the quadrature
// grid. Validation route only: it checks that the convolution and trace forms
// agree; use k_sp_trace for production evaluation.
double k_sp_convolution(const FockOperator& rho_s, const FockOperator& rho_p, Complex alpha,
                        const QuadratureSpec& q, Diag* diag = nullptr);
RMat k_sp_convolution_grid(const FockOperator& rho_s, const FockOperator& rho_p,
                           const std::vector<double>& xs, const std::vector<double>& ys,
                           const QuadratureSpec& q, Diag* diag = nullptr, int threads = 1);

// Eigendecomposition of a density matrix, weights clamped at tol. Mixed
// states enter pointwise densities as probability mixtures of the
// eigenvectors.
struct SpectralState {
  int cutoff = 0;
  std::vector<double> weights;
  std::vector<CVec> vectors;
};
SpectralState spectral_decompose(const FockOperator& rho, double tol = 1e-13);
double k_sp_trace_spectral(const SpectralState& s, const SpectralState& p, Complex alpha);

}  // namespace trihom
