#pragma once

#include <array>
#include <vector>

#include "trihom/fock.hpp"
#include "trihom/types.hpp"

namespace trihom {

using Matrix3c = Eigen::Matrix3cd;

// Lossless symmetric three-port coupler. t(j, k) is the transmission
// amplitude from input k to output j: b_j = sum_k t(j,k) a_k.
struct CouplerMatrix {
  Matrix3c t;
};

// (1/sqrt(3)) [[1,1,1],[1,w,w*],[1,w*,w]] with w = e^{i 2pi/3}; row n carries
// the phase pattern e^{i theta_n (k-1)}, theta_n = 2pi(n-1)/3.
CouplerMatrix tritter_matrix();

// One discrete optical element. Modes are 1-based. The 50:50 beam splitter
// acts on (mode_a, mode_b) as (1/sqrt(2)) [[1, i],[i, 1]].
struct DecompositionStep {
  enum class Kind { beam_splitter_50_50, phase_shift };
  Kind kind = Kind::beam_splitter_50_50;
  int mode_a = 1;
  int mode_b = 2;      // beam splitter only
  double angle = 0.0;  // phase shift only
};

Matrix3c step_matrix(const DecompositionStep& step);

// Discrete-component realization of the tritter: 50:50 beam splitters and
// phase shifters whose ordered product equals tritter_matrix() up to diagonal
// phase matrices on the input and output sides (the physically irrelevant
// freedom). The residual phases are returned explicitly:
//   diag(e^{i output_phases}) * recomposed * diag(e^{i input_phases}) = T.
// Internal phases are phi1 = arccos(1/3) and phi2 = phi1/2.
struct TritterDecomposition {
  std::vector<DecompositionStep> steps;  // applied first to last
  Matrix3c recomposed;                   // ordered product of the steps
  Eigen::Vector3d input_phases;
  Eigen::Vector3d output_phases;
};

TritterDecomposition decompose_tritter();

// Pure state of three modes with independent cutoffs; amps indexed by
// ((n1*(N2+1))+n2)*(N3+1)+n3.
struct ThreeModeState {
  std::array<int, 3> cutoffs{0, 0, 0};
  CVec amps;

  long dim() const {
    return static_cast<long>(cutoffs[0] + 1) * (cutoffs[1] + 1) * (cutoffs[2] + 1);
  }
  long index(int n1, int n2, int n3) const {
    return (static_cast<long>(n1) * (cutoffs[1] + 1) + n2) * (cutoffs[2] + 1) + n3;
  }
};

ThreeModeState tensor_product(const FockVector& a, const FockVector& b, const FockVector& c);

inline constexpr int kDefaultPhotonBudget = 64;

// Fock-space homomorphism of b_j = sum_k T_{jk} a_k: each input creation
// operator a_k^dag maps to sum_j T_{jk} a_j^dag (multinomial expansion per
// occupied input basis state). Photon number is conserved exactly; the output
// carries per-mode cutoffs equal to the largest occupied total photon number.
ThreeModeState apply_tritter(const ThreeModeState& psi, const CouplerMatrix& t,
                             int max_total_photons = kDefaultPhotonBudget);

// a_k^dag a_l on the tensored space (1-based modes); each column has at most
// one nonzero entry so the operators are built directly.
CMat hopping_operator(int k, int l, const std::array<int, 3>& cutoffs);

// Photocurrent operators I_n = b_n^dag b_n = (1/3) sum_{k,l} e^{i theta_n (l-k)} a_k^dag a_l.
std::array<CMat, 3> photocurrent_operators(const std::array<int, 3>& cutoffs);

// Fourier-transformed photocurrents built from the definition
// FT_s = (1/sqrt(3)) sum_n I_n e^{-i theta_n (s-1)}.
std::array<CMat, 3> ft_photocurrent_operators(const std::array<int, 3>& cutoffs);

// Closed forms of the same operators:
//   FT_1 = (n1 + n2 + n3)/sqrt(3),
//   FT_2 = (a1^dag a2 + a2^dag a3 + a3^dag a1)/sqrt(3),  FT_3 = FT_2^dag.
std::array<CMat, 3> ft_photocurrent_closed_form(const std::array<int, 3>& cutoffs);

struct ReducedOutcome {
  double y1 = 0.0;
  double y2 = 0.0;
};

// Classical post-processing of a photocount triple: the s=2 Fourier component
// I2 = (1/sqrt(3)) sum_n c_n e^{-i theta_n}, then y1 = sqrt(3) Re(I2)/z, and
// y2 = sqrt(3) Im(I2)/z (I3 = conj(I2) for real count data).
ReducedOutcome reduce_counts(long n1, long n2, long n3, double z_mag);

}  // namespace trihom
