#include "trihom/tritter.hpp"

#include <cmath>

namespace trihom {

namespace {

Matrix3c beam_splitter_50_50(int a, int b) {
  Matrix3c m = Matrix3c::Identity();
  const double s = 1.0 / std::sqrt(2.0);
  m(a, a) = s;
  m(b, b) = s;
  m(a, b) = Complex(0.0, s);
  m(b, a) = Complex(0.0, s);
  return m;
}

}  // namespace

CouplerMatrix tritter_matrix() {
  const Complex w = std::polar(1.0, 2.0 * kPi / 3.0);
  Matrix3c t;
  t << 1.0, 1.0, 1.0, 1.0, w, std::conj(w), 1.0, std::conj(w), w;
  return CouplerMatrix{t / std::sqrt(3.0)};
}

Matrix3c step_matrix(const DecompositionStep& step) {
  if (step.kind == DecompositionStep::Kind::beam_splitter_50_50) {
    if (step.mode_a < 1 || step.mode_a > 3 || step.mode_b < 1 || step.mode_b > 3 ||
        step.mode_a == step.mode_b)
      throw std::invalid_argument("beam splitter needs two distinct modes in {1,2,3}");
    return beam_splitter_50_50(step.mode_a - 1, step.mode_b - 1);
  }
  if (step.mode_a < 1 || step.mode_a > 3)
    throw std::invalid_argument("phase shift mode must be in {1,2,3}");
  if (!std::isfinite(step.angle)) throw std::invalid_argument("phase angle must be finite");
  Matrix3c m = Matrix3c::Identity();
  m(step.mode_a - 1, step.mode_a - 1) = std::polar(1.0, step.angle);
  return m;
}

TritterDecomposition decompose_tritter() {
  const double phi1 = std::acos(1.0 / 3.0);
  const double phi2 = phi1 / 2.0;
  TritterDecomposition d;
  using K = DecompositionStep::Kind;
  d.steps = {
      {K::beam_splitter_50_50, 1, 2, 0.0},
      {K::phase_shift, 1, 0, phi2},
      {K::beam_splitter_50_50, 2, 3, 0.0},
      {K::phase_shift, 3, 0, phi1},
      {K::beam_splitter_50_50, 2, 3, 0.0},
      {K::beam_splitter_50_50, 1, 2, 0.0},
  };
  d.recomposed = Matrix3c::Identity();
  for (const auto& s : d.steps) d.recomposed = step_matrix(s) * d.recomposed;
  d.output_phases << -(5.0 * kPi / 12.0 + phi2), -(7.0 * kPi / 12.0 + phi2),
      3.0 * kPi / 4.0 - phi2;
  d.input_phases << kPi / 4.0, kPi / 12.0, -7.0 * kPi / 12.0;

  const double moduli_err = (d.recomposed.cwiseAbs().array() - 1.0 / std::sqrt(3.0))
                                .abs()
                                .maxCoeff();
  if (moduli_err > 1e-10)
    throw std::runtime_error("tritter decomposition self-check failed: moduli off by " +
                             std::to_string(moduli_err));
  return d;
}

ThreeModeState tensor_product(const FockVector& a, const FockVector& b, const FockVector& c) {
  ThreeModeState out;
  out.cutoffs = {a.cutoff, b.cutoff, c.cutoff};
  out.amps = CVec::Zero(out.dim());
  for (int n1 = 0; n1 <= a.cutoff; ++n1)
    for (int n2 = 0; n2 <= b.cutoff; ++n2)
      for (int n3 = 0; n3 <= c.cutoff; ++n3)
        out.amps[out.index(n1, n2, n3)] = a.amps[n1] * b.amps[n2] * c.amps[n3];
  return out;
}

ThreeModeState apply_tritter(const ThreeModeState& psi, const CouplerMatrix& t,
                             int max_total_photons) {
  // Largest occupied total photon number fixes the output cutoffs.
  int mtot = 0;
  for (int n1 = 0; n1 <= psi.cutoffs[0]; ++n1)
    for (int n2 = 0; n2 <= psi.cutoffs[1]; ++n2)
      for (int n3 = 0; n3 <= psi.cutoffs[2]; ++n3)
        if (psi.amps[psi.index(n1, n2, n3)] != Complex(0.0, 0.0))
          mtot = std::max(mtot, n1 + n2 + n3);
  if (mtot > max_total_photons)
    throw std::invalid_argument("apply_tritter: total photon number exceeds budget");

  ThreeModeState out;
  out.cutoffs = {mtot, mtot, mtot};
  out.amps = CVec::Zero(out.dim());

  std::vector<double> lg(mtot + 1);
  for (int n = 0; n <= mtot; ++n) lg[n] = std::lgamma(n + 1.0);

  const int stride = mtot + 1;
  std::vector<Complex> poly(static_cast<size_t>(stride) * stride);
  std::vector<Complex> next(static_cast<size_t>(stride) * stride);
  auto at = [stride](std::vector<Complex>& v, int i, int j) -> Complex& {
    return v[static_cast<size_t>(i) * stride + j];
  };

  for (int m1 = 0; m1 <= psi.cutoffs[0]; ++m1)
    for (int m2 = 0; m2 <= psi.cutoffs[1]; ++m2)
      for (int m3 = 0; m3 <= psi.cutoffs[2]; ++m3) {
        const Complex c_in = psi.amps[psi.index(m1, m2, m3)];
        if (c_in == Complex(0.0, 0.0)) continue;
        // coefficients of prod_k (sum_j T_{jk} x_j)^{m_k}; homogeneous of
        // degree d, so (n1, n2) determines n3 = d - n1 - n2
        std::fill(poly.begin(), poly.end(), Complex(0.0, 0.0));
        poly[0] = 1.0;
        int d = 0;
        const int reps[3] = {m1, m2, m3};
        for (int k = 0; k < 3; ++k) {
          const Complex c1 = t.t(0, k), c2 = t.t(1, k), c3 = t.t(2, k);
          for (int r = 0; r < reps[k]; ++r) {
            ++d;
            for (int i = 0; i <= d; ++i)
              for (int j = 0; i + j <= d; ++j) {
                Complex v(0.0, 0.0);
                if (i > 0) v += c1 * at(poly, i - 1, j);
                if (j > 0) v += c2 * at(poly, i, j - 1);
                if (i + j < d) v += c3 * at(poly, i, j);
                at(next, i, j) = v;
              }
            std::swap(poly, next);
          }
        }
        const double lg_in = lg[m1] + lg[m2] + lg[m3];
        for (int n1 = 0; n1 <= d; ++n1)
          for (int n2 = 0; n1 + n2 <= d; ++n2) {
            const int n3 = d - n1 - n2;
            const Complex coeff = at(poly, n1, n2);
            if (coeff == Complex(0.0, 0.0)) continue;
            out.amps[out.index(n1, n2, n3)] +=
                c_in * coeff * std::exp(0.5 * (lg[n1] + lg[n2] + lg[n3] - lg_in));
          }
      }
  return out;
}

CMat hopping_operator(int k, int l, const std::array<int, 3>& cutoffs) {
  if (k < 1 || k > 3 || l < 1 || l > 3) throw std::invalid_argument("modes must be in {1,2,3}");
  ThreeModeState shape;
  shape.cutoffs = cutoffs;
  const long dim = shape.dim();
  CMat op = CMat::Zero(dim, dim);
  const int ka = k - 1, la = l - 1;
  for (int n1 = 0; n1 <= cutoffs[0]; ++n1)
    for (int n2 = 0; n2 <= cutoffs[1]; ++n2)
      for (int n3 = 0; n3 <= cutoffs[2]; ++n3) {
        int n[3] = {n1, n2, n3};
        const long col = shape.index(n1, n2, n3);
        if (ka == la) {
          op(col, col) = double(n[ka]);
          continue;
        }
        if (n[la] == 0 || n[ka] == cutoffs[ka]) continue;
        const double amp = std::sqrt(double(n[la]) * (n[ka] + 1.0));
        n[la] -= 1;
        n[ka] += 1;
        op(shape.index(n[0], n[1], n[2]), col) = amp;
      }
  return op;
}

std::array<CMat, 3> photocurrent_operators(const std::array<int, 3>& cutoffs) {
  ThreeModeState shape;
  shape.cutoffs = cutoffs;
  const long dim = shape.dim();
  std::array<CMat, 3> out{CMat::Zero(dim, dim), CMat::Zero(dim, dim), CMat::Zero(dim, dim)};
  for (int n = 1; n <= 3; ++n) {
    const double theta = 2.0 * kPi * (n - 1) / 3.0;
    for (int k = 1; k <= 3; ++k)
      for (int l = 1; l <= 3; ++l)
        out[n - 1] += std::polar(1.0 / 3.0, theta * (l - k)) * hopping_operator(k, l, cutoffs);
  }
  return out;
}

std::array<CMat, 3> ft_photocurrent_operators(const std::array<int, 3>& cutoffs) {
  const auto cur = photocurrent_operators(cutoffs);
  std::array<CMat, 3> out;
  for (int s = 1; s <= 3; ++s) {
    CMat acc = CMat::Zero(cur[0].rows(), cur[0].cols());
    for (int n = 1; n <= 3; ++n) {
      const double theta = 2.0 * kPi * (n - 1) / 3.0;
      acc += std::polar(1.0 / std::sqrt(3.0), -theta * (s - 1)) * cur[n - 1];
    }
    out[s - 1] = acc;
  }
  return out;
}

std::array<CMat, 3> ft_photocurrent_closed_form(const std::array<int, 3>& cutoffs) {
  const double is3 = 1.0 / std::sqrt(3.0);
  std::array<CMat, 3> out;
  out[0] = is3 * (hopping_operator(1, 1, cutoffs) + hopping_operator(2, 2, cutoffs) +
                  hopping_operator(3, 3, cutoffs));
  out[1] = is3 * (hopping_operator(1, 2, cutoffs) + hopping_operator(2, 3, cutoffs) +
                  hopping_operator(3, 1, cutoffs));
  out[2] = is3 * (hopping_operator(1, 3, cutoffs) + hopping_operator(2, 1, cutoffs) +
                  hopping_operator(3, 2, cutoffs));
  return out;
}

ReducedOutcome reduce_counts(long n1, long n2, long n3, double z_mag) {
  if (!(z_mag > 0.0)) throw std::invalid_argument("z_mag must be > 0");
  if (n1 < 0 || n2 < 0 || n3 < 0) throw std::invalid_argument("counts must be non-negative");
  const double theta = 2.0 * kPi / 3.0;
  const Complex i2 = (double(n1) + double(n2) * std::polar(1.0, -theta) +
                      double(n3) * std::polar(1.0, -2.0 * theta)) /
                     std::sqrt(3.0);
  return ReducedOutcome{std::sqrt(3.0) * i2.real() / z_mag, std::sqrt(3.0) * i2.imag() / z_mag};
}

}  // namespace trihom
