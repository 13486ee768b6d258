#pragma once

#include <complex>

#include "trihom/types.hpp"

namespace trihom {

// Pure single-mode state on the truncated Fock basis {|0>, ..., |N>}.
// amps[n] = <n|psi>. States are stored as constructed, never renormalized;
// the probability lost to truncation is reported in norm_deficit.
struct FockVector {
  int cutoff = 0;
  CVec amps;
  double norm_deficit = 0.0;  // 1 - sum_n |amps[n]|^2
};

// Dense operator on a truncated Fock space. Also used for density matrices.
struct FockOperator {
  CMat mat;
  int cutoff() const { return static_cast<int>(mat.rows()) - 1; }
};

struct StateSpec {
  enum class Kind { coherent, number, squeezed_vacuum };
  Kind kind = Kind::coherent;
  Complex alpha{0.0, 0.0};  // coherent amplitude
  int n = 0;                // Fock index for number states
  double r = 0.0;           // squeezing parameter, r > 0 squeezes the phi = 0 quadrature

  static StateSpec coherent_state(Complex a);
  static StateSpec vacuum() { return coherent_state({0.0, 0.0}); }
  static StateSpec number_state(int n);
  static StateSpec squeezed_vacuum_state(double r);
};

FockVector make_state(const StateSpec& spec, int cutoff);

// Annihilation operator a with a|n> = sqrt(n)|n-1>; mat(n-1, n) = sqrt(n).
FockOperator ladder_matrix(int cutoff);

// D(alpha) = exp(alpha a^dag - conj(alpha) a) from the closed-form matrix
// elements <n|D|m> (associated Laguerre polynomials). Each entry is exact up
// to roundoff; truncation shows up only as loss of unitarity at the high-n
// boundary. Supported for indices up to 200 (log-space magnitudes).
FockOperator displacement_matrix(Complex alpha, int cutoff);

// Rectangular block <n|D(alpha)|m> for n < nrows, m < ncols.
CMat displacement_block(Complex alpha, int nrows, int ncols);

// Single element <n|D(alpha)|m>.
Complex displaced_number_overlap(Complex alpha, int n, int m);

Complex overlap(const FockVector& psi, const FockVector& phi);   // <psi|phi>
Complex expectation(const FockOperator& rho, const FockOperator& op);  // Tr(rho op)

FockOperator density_matrix(const FockVector& psi);  // |psi><psi|
double mean_photon_number(const FockVector& psi);

// Diagnostics for operators tagged as density matrices.
double hermiticity_defect(const FockOperator& op);   // max |M - M^dag|
double trace_defect(const FockOperator& op);         // |Tr M - 1|
double min_eigenvalue_hermitian(const FockOperator& op);

// Heuristic mass of rho at or beyond the truncation boundary; used for
// accuracy warnings in phase-space evaluations.
double boundary_tail_mass(const FockOperator& rho);

}  // namespace trihom
