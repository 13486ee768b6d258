#include "trihom/fock.hpp"

#include <cmath>

namespace trihom {

namespace {

constexpr int kMaxIndex = 200;  // log-space Laguerre evaluation validated up to here

void require_finite(Complex a, const char* what) {
  if (!std::isfinite(a.real()) || !std::isfinite(a.imag()))
    throw std::invalid_argument(std::string(what) + " must be finite");
}

}  // namespace

StateSpec StateSpec::coherent_state(Complex a) {
  StateSpec s;
  s.kind = Kind::coherent;
  s.alpha = a;
  return s;
}

StateSpec StateSpec::number_state(int n) {
  StateSpec s;
  s.kind = Kind::number;
  s.n = n;
  return s;
}

StateSpec StateSpec::squeezed_vacuum_state(double r) {
  StateSpec s;
  s.kind = Kind::squeezed_vacuum;
  s.r = r;
  return s;
}

FockVector make_state(const StateSpec& spec, int cutoff) {
  if (cutoff < 0) throw std::invalid_argument("cutoff must be >= 0");
  FockVector out;
  out.cutoff = cutoff;
  out.amps = CVec::Zero(cutoff + 1);
  switch (spec.kind) {
    case StateSpec::Kind::coherent: {
      require_finite(spec.alpha, "coherent amplitude");
      out.amps[0] = std::exp(-std::norm(spec.alpha) / 2.0);
      for (int n = 1; n <= cutoff; ++n)
        out.amps[n] = out.amps[n - 1] * spec.alpha / std::sqrt(double(n));
      break;
    }
    case StateSpec::Kind::number: {
      if (spec.n < 0 || spec.n > cutoff)
        throw std::invalid_argument("number-state index exceeds cutoff");
      out.amps[spec.n] = 1.0;
      break;
    }
    case StateSpec::Kind::squeezed_vacuum: {
      if (!std::isfinite(spec.r))
        throw std::invalid_argument("squeezing parameter must be finite");
      // amps[2m] = (cosh r)^{-1/2} (-tanh r)^m sqrt((2m)!)/(2^m m!)
      out.amps[0] = 1.0 / std::sqrt(std::cosh(spec.r));
      const double t = std::tanh(spec.r);
      for (int m = 1; 2 * m <= cutoff; ++m)
        out.amps[2 * m] = out.amps[2 * m - 2] * (-t) *
                          std::sqrt(double(2 * m) * double(2 * m - 1)) / double(2 * m);
      break;
    }
  }
  out.norm_deficit = 1.0 - out.amps.squaredNorm();
  return out;
}

FockOperator ladder_matrix(int cutoff) {
  if (cutoff < 0) throw std::invalid_argument("cutoff must be >= 0");
  FockOperator a;
  a.mat = CMat::Zero(cutoff + 1, cutoff + 1);
  for (int n = 1; n <= cutoff; ++n) a.mat(n - 1, n) = std::sqrt(double(n));
  return a;
}

CMat displacement_block(Complex alpha, int nrows, int ncols) {
  require_finite(alpha, "displacement amplitude");
  if (nrows <= 0 || ncols <= 0) throw std::invalid_argument("block dims must be positive");
  if (nrows > kMaxIndex + 1 || ncols > kMaxIndex + 1)
    throw std::invalid_argument("displacement block exceeds supported index range (200)");
  CMat D = CMat::Zero(nrows, ncols);
  if (alpha == Complex(0.0, 0.0)) {
    for (int i = 0; i < std::min(nrows, ncols); ++i) D(i, i) = 1.0;
    return D;
  }
  const double x = std::norm(alpha);
  const double la = 0.5 * std::log(x);
  const Complex u = alpha / std::abs(alpha);  // unit phase e^{i arg alpha}

  // n >= m: <m+k|D|m> = sqrt(m!/n!) |a|^k e^{ik arg a} e^{-x/2} L_m^{(k)}(x)
  Complex uk{1.0, 0.0};
  for (int k = 0; k < nrows; ++k) {
    double Lm1 = 0.0, L = 1.0;
    const int mmax = std::min(ncols - 1, nrows - 1 - k);
    for (int m = 0; m <= mmax; ++m) {
      const int n = m + k;
      if (m > 0) {
        const double Lnew = ((2.0 * (m - 1) + k + 1 - x) * L - (m - 1.0 + k) * Lm1) / m;
        Lm1 = L;
        L = Lnew;
      }
      const double mag = 0.5 * (std::lgamma(m + 1.0) - std::lgamma(n + 1.0)) + k * la - x / 2.0;
      D(n, m) = std::exp(mag) * L * uk;
    }
    uk *= u;
  }
  // n < m: <n|D|m> = (-conj(a))^{m-n} sqrt(n!/m!) e^{-x/2} L_n^{(m-n)}(x)
  const Complex vk = -std::conj(u);
  Complex vkpow = vk;
  for (int k = 1; k < ncols; ++k) {
    double Lm1 = 0.0, L = 1.0;
    const int nmax = std::min(nrows - 1, ncols - 1 - k);
    for (int n = 0; n <= nmax; ++n) {
      const int m = n + k;
      if (n > 0) {
        const double Lnew = ((2.0 * (n - 1) + k + 1 - x) * L - (n - 1.0 + k) * Lm1) / n;
        Lm1 = L;
        L = Lnew;
      }
      const double mag = 0.5 * (std::lgamma(n + 1.0) - std::lgamma(m + 1.0)) + k * la - x / 2.0;
      D(n, m) = std::exp(mag) * L * vkpow;
    }
    vkpow *= vk;
  }
  return D;
}

FockOperator displacement_matrix(Complex alpha, int cutoff) {
  if (cutoff < 0) throw std::invalid_argument("cutoff must be >= 0");
  return FockOperator{displacement_block(alpha, cutoff + 1, cutoff + 1)};
}

Complex displaced_number_overlap(Complex alpha, int n, int m) {
  if (n < 0 || m < 0) throw std::invalid_argument("indices must be >= 0");
  if (n > kMaxIndex || m > kMaxIndex)
    throw std::invalid_argument("index exceeds supported range (200)");
  require_finite(alpha, "displacement amplitude");
  if (alpha == Complex(0.0, 0.0)) return n == m ? 1.0 : 0.0;
  const double x = std::norm(alpha);
  const int lo = std::min(n, m), k = std::abs(n - m);
  double Lm1 = 0.0, L = 1.0;
  for (int j = 1; j <= lo; ++j) {
    const double Lnew = ((2.0 * (j - 1) + k + 1 - x) * L - (j - 1.0 + k) * Lm1) / j;
    Lm1 = L;
    L = Lnew;
  }
  const double mag =
      0.5 * (std::lgamma(lo + 1.0) - std::lgamma(lo + k + 1.0)) + k * (0.5 * std::log(x)) - x / 2.0;
  const Complex u = alpha / std::abs(alpha);
  Complex phase{1.0, 0.0};
  if (n >= m) {
    for (int j = 0; j < k; ++j) phase *= u;
  } else {
    for (int j = 0; j < k; ++j) phase *= -std::conj(u);
  }
  return std::exp(mag) * L * phase;
}

Complex overlap(const FockVector& psi, const FockVector& phi) {
  if (psi.cutoff != phi.cutoff) throw std::invalid_argument("cutoff mismatch in overlap");
  return psi.amps.dot(phi.amps);  // Eigen dot conjugates the left argument
}

Complex expectation(const FockOperator& rho, const FockOperator& op) {
  if (rho.cutoff() != op.cutoff()) throw std::invalid_argument("cutoff mismatch in expectation");
  return (rho.mat.transpose().cwiseProduct(op.mat)).sum();  // Tr(rho op)
}

FockOperator density_matrix(const FockVector& psi) {
  return FockOperator{psi.amps * psi.amps.adjoint()};
}

double mean_photon_number(const FockVector& psi) {
  double s = 0.0;
  for (int n = 0; n <= psi.cutoff; ++n) s += n * std::norm(psi.amps[n]);
  return s;
}

double hermiticity_defect(const FockOperator& op) {
  return (op.mat - op.mat.adjoint()).cwiseAbs().maxCoeff();
}

double trace_defect(const FockOperator& op) { return std::abs(op.mat.trace() - Complex(1.0)); }

double min_eigenvalue_hermitian(const FockOperator& op) {
  Eigen::SelfAdjointEigenSolver<CMat> es(op.mat, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

double boundary_tail_mass(const FockOperator& rho) {
  const int n = rho.cutoff();
  const double missing = 1.0 - rho.mat.trace().real();
  double edge = std::abs(rho.mat(n, n).real());
  if (n >= 1) edge = std::max(edge, std::abs(rho.mat(n - 1, n - 1).real()) / 4.0);
  return std::max(missing, (n + 1.0) * edge);
}

}  // namespace trihom
