#include "trihom/phasespace.hpp"

#include <cmath>

#include "trihom/parallel.hpp"

namespace trihom {

namespace {

using Eigen::ArrayXXcd;
using Eigen::ArrayXXd;

double chi_tail_bound(const FockOperator& rho) {
  const double tau = std::max(0.0, boundary_tail_mass(rho));
  return 2.0 * std::sqrt(tau) + tau;
}

// W on the tensor grid xs x ys from a chi table over quadrature nodes.
RMat wigner_from_table(const CMat& chi, const QuadratureRule1D& rule,
                       const std::vector<double>& xs, const std::vector<double>& ys,
                       double* imag_residual, int threads) {
  const int nq = static_cast<int>(rule.nodes.size());
  const int nxs = static_cast<int>(xs.size());
  const int nys = static_cast<int>(ys.size());
  Eigen::VectorXd w = Eigen::Map<const Eigen::VectorXd>(rule.weights.data(), nq);
  CMat wchi = chi.cwiseProduct((w * w.transpose()).cast<Complex>());

  // kernel e^{lambda_bar a - lambda a_bar} = e^{2i(lx*ay - ly*ax)}
  CMat e1(nq, nys);
  for (int j = 0; j < nq; ++j)
    for (int a = 0; a < nys; ++a)
      e1(j, a) = std::polar(1.0, 2.0 * rule.nodes[j] * ys[a]);
  CMat c1 = wchi.transpose() * e1;  // (nq lambda_y rows, nys cols)

  RMat out(nxs, nys);
  const int block = std::max(1, static_cast<int>((1L << 21) / std::max(1, nys)));
  const long nblocks = (nxs + block - 1) / block;
  std::vector<double> residual(static_cast<size_t>(nblocks), 0.0);
  parallel_for(nblocks, threads, [&](long bb, long be) {
    for (long b = bb; b < be; ++b) {
      const int r0 = static_cast<int>(b) * block;
      const int rn = std::min(block, nxs - r0);
      CMat e2(rn, nq);
      for (int a = 0; a < rn; ++a)
        for (int j = 0; j < nq; ++j)
          e2(a, j) = std::polar(1.0, -2.0 * xs[r0 + a] * rule.nodes[j]);
      CMat m = e2 * c1;
      out.block(r0, 0, rn, nys) = m.real() / kPi;
      residual[static_cast<size_t>(b)] = m.imag().cwiseAbs().maxCoeff() / kPi;
    }
  });
  if (imag_residual) {
    *imag_residual = 0.0;
    for (double r : residual) *imag_residual = std::max(*imag_residual, r);
  }
  return out;
}

void merge_warning(Diag* diag, double imag, double tail) {
  if (!diag) return;
  diag->imag_residual = std::max(diag->imag_residual, imag);
  diag->tail_bound = std::max(diag->tail_bound, tail);
  diag->warning = diag->warning || diag->tail_bound > kTailWarnThreshold ||
                  diag->imag_residual > kImagWarnThreshold;
}

}  // namespace

Complex characteristic_fn(const FockOperator& rho, Complex lambda, double s, Diag* diag) {
  if (!std::isfinite(lambda.real()) || !std::isfinite(lambda.imag()) || !std::isfinite(s))
    throw std::invalid_argument("characteristic_fn needs finite lambda, s");
  const int np = rho.cutoff() + 1;
  const CMat d = displacement_block(lambda, np, np);
  const Complex tr = (rho.mat.transpose().cwiseProduct(d)).sum();
  merge_warning(diag, 0.0, chi_tail_bound(rho));
  return tr * std::exp(s * std::norm(lambda) / 2.0);
}

CMat characteristic_table(const FockOperator& rho, double s, const std::vector<double>& nodes) {
  const int nq = static_cast<int>(nodes.size());
  const int np = rho.cutoff() + 1;
  if (np > 201) throw std::invalid_argument("cutoff exceeds supported index range (200)");

  ArrayXXd x(nq, nq), ph(nq, nq);
  for (int i = 0; i < nq; ++i)
    for (int j = 0; j < nq; ++j) {
      x(i, j) = nodes[i] * nodes[i] + nodes[j] * nodes[j];
      ph(i, j) = std::atan2(nodes[j], nodes[i]);
    }
  const ArrayXXd la = 0.5 * x.log();  // -inf at the origin node; exp() maps it to 0
  const ArrayXXcd u = (Complex(0, 1) * ph).exp();
  const ArrayXXd expmx2 = (-x / 2.0).exp();

  ArrayXXcd out = ArrayXXcd::Zero(nq, nq);
  ArrayXXcd ek = ArrayXXcd::Ones(nq, nq);
  for (int k = 0; k < np; ++k) {
    if (k > 0) ek *= u;
    // last m carrying weight on this diagonal; the Laguerre recurrence only
    // needs to march that far
    int mlast = -1;
    for (int m = 0; m + k < np; ++m)
      if (std::abs(rho.mat(m, m + k)) >= 1e-300 || std::abs(rho.mat(m + k, m)) >= 1e-300)
        mlast = m;
    if (mlast < 0) continue;
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    ArrayXXd ekmag = (k > 0) ? ((double(k) * la).exp() * expmx2).eval() : expmx2;
    ArrayXXd lm1 = ArrayXXd::Zero(nq, nq), lcur = ArrayXXd::Ones(nq, nq);
    for (int m = 0; m <= mlast; ++m) {
      const int n = m + k;
      if (m > 0) {
        ArrayXXd lnew = ((2.0 * (m - 1) + k + 1 - x) * lcur - (m - 1.0 + k) * lm1) / double(m);
        lm1 = lcur;
        lcur = lnew;
      }
      const Complex upper = rho.mat(m, n);
      const Complex lower = (k > 0) ? rho.mat(n, m) : Complex(0, 0);
      if (std::abs(upper) < 1e-300 && std::abs(lower) < 1e-300) continue;
      const double pref = std::exp(0.5 * (std::lgamma(m + 1.0) - std::lgamma(n + 1.0)));
      ArrayXXd base = pref * ekmag * lcur;
      if (std::abs(upper) >= 1e-300) out += upper * (base * ek);
      if (k > 0 && std::abs(lower) >= 1e-300) out += (lower * sign) * (base * ek.conjugate());
    }
  }
  if (s != 0.0) out *= (s * x / 2.0).exp();
  return out.matrix();
}

double wigner_s(const FockOperator& rho, Complex alpha, double s, const QuadratureSpec& q,
                Diag* diag) {
  if (s > 0.0)
    throw std::invalid_argument("wigner_s supports s <= 0 only (s > 0 diverges numerically)");
  const QuadratureRule1D rule = make_rule(q);
  const CMat chi = characteristic_table(rho, s, rule.nodes);
  double imag = 0.0;
  RMat w =
      wigner_from_table(chi, rule, {alpha.real()}, {alpha.imag()}, &imag, 1);
  merge_warning(diag, imag, chi_tail_bound(rho));
  return w(0, 0);
}

RMat wigner_grid(const FockOperator& rho, double s, const QuadratureSpec& q,
                 const std::vector<double>& xs, const std::vector<double>& ys, Diag* diag,
                 int threads) {
  if (s > 0.0)
    throw std::invalid_argument("wigner_s supports s <= 0 only (s > 0 diverges numerically)");
  const QuadratureRule1D rule = make_rule(q);
  const CMat chi = characteristic_table(rho, s, rule.nodes);
  double imag = 0.0;
  RMat w = wigner_from_table(chi, rule, xs, ys, &imag, threads);
  merge_warning(diag, imag, chi_tail_bound(rho));
  return w;
}

double q_function(const FockOperator& rho, Complex alpha, Diag* diag) {
  const FockVector coh = make_state(StateSpec::coherent_state(alpha), rho.cutoff());
  const Complex v = coh.amps.dot(rho.mat * coh.amps);
  merge_warning(diag, std::abs(v.imag()) / kPi,
                std::max(coh.norm_deficit, chi_tail_bound(rho)));
  return v.real() / kPi;
}

double q_function(const FockVector& psi, Complex alpha) {
  const FockVector coh = make_state(StateSpec::coherent_state(alpha), psi.cutoff);
  return std::norm(coh.amps.dot(psi.amps)) / kPi;
}

double k_sp_trace(const FockOperator& rho_s, const FockOperator& rho_p, Complex alpha,
                  Diag* diag) {
  if (rho_s.cutoff() != rho_p.cutoff())
    throw std::invalid_argument("cutoff mismatch in k_sp_trace");
  const int np = rho_s.cutoff() + 1;
  const CMat d = displacement_block(alpha, np, np);
  const CMat m = d * rho_p.mat * d.adjoint();
  const Complex tr = (rho_s.mat.transpose().cwiseProduct(m)).sum();
  merge_warning(diag, std::abs(tr.imag()) / kPi,
                std::max(chi_tail_bound(rho_s), chi_tail_bound(rho_p)));
  return tr.real() / kPi;
}

double k_sp_trace(const FockVector& psi_s, const FockVector& psi_p, Complex alpha) {
  if (psi_s.cutoff != psi_p.cutoff) throw std::invalid_argument("cutoff mismatch in k_sp_trace");
  const int np = psi_s.cutoff + 1;
  const CMat d = displacement_block(alpha, np, np);
  return std::norm(psi_s.amps.dot(d * psi_p.amps)) / kPi;
}

RMat k_sp_convolution_grid(const FockOperator& rho_s, const FockOperator& rho_p,
                           const std::vector<double>& xs, const std::vector<double>& ys,
                           const QuadratureSpec& q, Diag* diag, int threads) {
  if (rho_s.cutoff() != rho_p.cutoff())
    throw std::invalid_argument("cutoff mismatch in k_sp_convolution");
  const QuadratureRule1D rule = make_rule(q);
  const int nq = static_cast<int>(rule.nodes.size());
  const int nxs = static_cast<int>(xs.size());
  const int nys = static_cast<int>(ys.size());

  const CMat chi_p = characteristic_table(rho_p, 0.0, rule.nodes);
  double imag_p = 0.0;
  RMat wp = wigner_from_table(chi_p, rule, rule.nodes, rule.nodes, &imag_p, threads);
  for (int i = 0; i < nq; ++i)
    for (int j = 0; j < nq; ++j) wp(i, j) *= rule.weights[i] * rule.weights[j];

  const CMat chi_s = characteristic_table(rho_s, 0.0, rule.nodes);
  // W_S is needed on the tensor set {xs + node} x {ys + node}.
  std::vector<double> ys_big(static_cast<size_t>(nys) * nq);
  for (int a = 0; a < nys; ++a)
    for (int j = 0; j < nq; ++j) ys_big[static_cast<size_t>(a) * nq + j] = ys[a] + rule.nodes[j];

  Eigen::VectorXd w = Eigen::Map<const Eigen::VectorXd>(rule.weights.data(), nq);
  const CMat wchi_s = chi_s.cwiseProduct((w * w.transpose()).cast<Complex>());
  CMat e1(nq, ys_big.size());
  for (int j = 0; j < nq; ++j)
    for (size_t a = 0; a < ys_big.size(); ++a)
      e1(j, static_cast<int>(a)) = std::polar(1.0, 2.0 * rule.nodes[j] * ys_big[a]);
  const CMat c1 = wchi_s.transpose() * e1;

  RMat out(nxs, nys);
  std::vector<double> residual(static_cast<size_t>(std::max(1, nxs)), 0.0);
  parallel_for(nxs, threads, [&](long ab, long ae) {
    CMat e2(nq, nq);
    for (long ia = ab; ia < ae; ++ia) {
      for (int jb = 0; jb < nq; ++jb)
        for (int j = 0; j < nq; ++j)
          e2(jb, j) = std::polar(1.0, -2.0 * (xs[ia] + rule.nodes[jb]) * rule.nodes[j]);
      const CMat ws_c = e2 * c1;
      residual[static_cast<size_t>(ia)] = ws_c.imag().cwiseAbs().maxCoeff() / kPi;
      const RMat ws = ws_c.real() / kPi;
      for (int ja = 0; ja < nys; ++ja)
        out(ia, ja) =
            (ws.middleCols(static_cast<long>(ja) * nq, nq).cwiseProduct(wp)).sum() / (kPi * kPi);
    }
  });
  double imag = imag_p;
  for (double r : residual) imag = std::max(imag, r);
  merge_warning(diag, imag, std::max(chi_tail_bound(rho_s), chi_tail_bound(rho_p)));
  return out;
}

double k_sp_convolution(const FockOperator& rho_s, const FockOperator& rho_p, Complex alpha,
                        const QuadratureSpec& q, Diag* diag) {
  RMat v = k_sp_convolution_grid(rho_s, rho_p, {alpha.real()}, {alpha.imag()}, q, diag, 1);
  return v(0, 0);
}

SpectralState spectral_decompose(const FockOperator& rho, double tol) {
  if (hermiticity_defect(rho) > 1e-8)
    throw std::invalid_argument("density matrix is not Hermitian");
  Eigen::SelfAdjointEigenSolver<CMat> es(rho.mat);
  SpectralState out;
  out.cutoff = rho.cutoff();
  for (int i = 0; i < es.eigenvalues().size(); ++i) {
    const double p = es.eigenvalues()[i];
    if (p < -1e-8) throw std::invalid_argument("density matrix has negative eigenvalue");
    if (p > tol) {
      out.weights.push_back(p);
      out.vectors.push_back(es.eigenvectors().col(i));
    }
  }
  return out;
}

double k_sp_trace_spectral(const SpectralState& s, const SpectralState& p, Complex alpha) {
  if (s.cutoff != p.cutoff) throw std::invalid_argument("cutoff mismatch in k_sp_trace");
  const int np = s.cutoff + 1;
  const CMat d = displacement_block(alpha, np, np);
  double acc = 0.0;
  for (size_t k = 0; k < p.weights.size(); ++k) {
    const CVec dp = d * p.vectors[k];
    for (size_t l = 0; l < s.weights.size(); ++l)
      acc += s.weights[l] * p.weights[k] * std::norm(s.vectors[l].dot(dp));
  }
  return acc / kPi;
}

}  // namespace trihom
