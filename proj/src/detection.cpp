#include "trihom/detection.hpp"

#include <algorithm>
#include <cmath>

#include "trihom/parallel.hpp"
#include "trihom/phasespace.hpp"

namespace trihom {

int SimConfig::min_count_cutoff() const {
  return static_cast<int>(
      std::ceil(z_mag * z_mag / 3.0 + 8.0 * z_mag / std::sqrt(3.0) + 10.0));
}

int SimConfig::effective_count_cutoff() const {
  return count_cutoff > 0 ? count_cutoff : min_count_cutoff();
}

void SimConfig::validate() const {
  if (!(z_mag > 0.0) || !std::isfinite(z_mag))
    throw std::invalid_argument("z_mag must be finite and > 0");
  if (cutoff_sp < 0) throw std::invalid_argument("cutoff_sp must be >= 0");
  if (count_cutoff != 0 && count_cutoff < min_count_cutoff())
    throw std::invalid_argument("count_cutoff below the minimum for this z_mag (" +
                                std::to_string(min_count_cutoff()) + ")");
  if (effective_count_cutoff() > 200)
    throw std::invalid_argument("count_cutoff exceeds supported index range (200); reduce z_mag");
  if (n_samples < 0) throw std::invalid_argument("n_samples must be >= 0");
  bins.validate();
}

double uniform01(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + (index + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return static_cast<double>(z >> 11) * 0x1.0p-53;
}

CountDistribution output_count_distribution(const SimConfig& cfg, int threads) {
  cfg.validate();
  const FockVector psi_s = make_state(cfg.signal, cfg.cutoff_sp);
  const FockVector psi_p = make_state(cfg.probe, cfg.cutoff_sp);
  const FockVector vac = make_state(StateSpec::vacuum(), 0);

  const CouplerMatrix t = tritter_matrix();
  const ThreeModeState mixed =
      apply_tritter(tensor_product(psi_s, vac, psi_p), t, 2 * cfg.cutoff_sp + 1);
  const int m = mixed.cutoffs[0];  // largest occupied total photon number

  const int cc = cfg.effective_count_cutoff();
  const long nc = cc + 1;
  // LO commuted through the coupler: displacements beta_j = z T_{j2}
  std::array<CMat, 3> d;
  for (int j = 0; j < 3; ++j)
    d[j] = displacement_block(cfg.z_mag * t.t(j, 1), nc, m + 1);

  // contract the displacement blocks mode by mode
  const long ms = m + 1;
  std::vector<Complex> b1(static_cast<size_t>(nc) * ms * ms, Complex(0, 0));
  parallel_for(nc, threads, [&](long ab, long ae) {
    for (long a = ab; a < ae; ++a)
      for (long m2 = 0; m2 < ms; ++m2)
        for (long m3 = 0; m3 < ms; ++m3) {
          Complex acc(0, 0);
          for (long m1 = 0; m1 + m2 + m3 <= m; ++m1)
            acc += d[0](a, m1) * mixed.amps[(m1 * ms + m2) * ms + m3];
          b1[(a * ms + m2) * ms + m3] = acc;
        }
  });
  std::vector<Complex> b2(static_cast<size_t>(nc) * nc * ms, Complex(0, 0));
  parallel_for(nc, threads, [&](long ab, long ae) {
    for (long a = ab; a < ae; ++a)
      for (long b = 0; b < nc; ++b)
        for (long m3 = 0; m3 < ms; ++m3) {
          Complex acc(0, 0);
          for (long m2 = 0; m2 < ms; ++m2)
            acc += d[1](b, m2) * b1[(a * ms + m2) * ms + m3];
          b2[(a * nc + b) * ms + m3] = acc;
        }
  });
  CountDistribution out;
  out.count_cutoff = cc;
  out.probs.assign(static_cast<size_t>(nc) * nc * nc, 0.0);
  parallel_for(nc, threads, [&](long ab, long ae) {
    for (long a = ab; a < ae; ++a)
      for (long b = 0; b < nc; ++b)
        for (long c = 0; c < nc; ++c) {
          Complex acc(0, 0);
          for (long m3 = 0; m3 < ms; ++m3)
            acc += d[2](c, m3) * b2[(a * nc + b) * ms + m3];
          out.probs[(a * nc + b) * nc + c] = std::norm(acc);
        }
  });

  double mass = 0.0;
  for (double p : out.probs) mass += p;
  out.mass_deficit = 1.0 - mass;
  if (out.mass_deficit > 1e-4)
    throw AccuracyError("count distribution mass deficit " + std::to_string(out.mass_deficit) +
                        " exceeds 1e-4; raise count_cutoff or cutoff_sp");
  return out;
}

std::vector<OutcomeSample> sample_outcomes(const CountDistribution& dist, const SimConfig& cfg,
                                           int threads) {
  std::vector<double> cdf(dist.probs.size());
  double acc = 0.0;
  for (size_t i = 0; i < dist.probs.size(); ++i) {
    acc += dist.probs[i];
    cdf[i] = acc;
  }
  const double total = acc;
  const long nc = dist.count_cutoff + 1;
  std::vector<OutcomeSample> samples(static_cast<size_t>(cfg.n_samples));
  parallel_for(cfg.n_samples, threads, [&](long ib, long ie) {
    for (long i = ib; i < ie; ++i) {
      const double u = uniform01(cfg.seed, static_cast<std::uint64_t>(i)) * total;
      const long flat =
          std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin();
      const long f = std::min<long>(flat, static_cast<long>(cdf.size()) - 1);
      const long n1 = f / (nc * nc), n2 = (f / nc) % nc, n3 = f % nc;
      const ReducedOutcome y = reduce_counts(n1, n2, n3, cfg.z_mag);
      samples[static_cast<size_t>(i)] = OutcomeSample{y.y1, y.y2};
    }
  });
  return samples;
}

namespace {

// Maps a point to its bin; nodes are cell centers.
bool bin_of(const GridSpec& g, double x, double y, int* ix, int* iy) {
  const double fx = (x - (g.x_min - 0.5 * g.dx())) / g.dx();
  const double fy = (y - (g.y_min - 0.5 * g.dy())) / g.dy();
  if (fx < 0.0 || fy < 0.0) return false;
  const int i = static_cast<int>(fx), j = static_cast<int>(fy);
  if (i >= g.nx || j >= g.ny) return false;
  *ix = i;
  *iy = j;
  return true;
}

}  // namespace

RealGrid empirical_density(const std::vector<OutcomeSample>& samples, const GridSpec& bins,
                           double* clipped_fraction) {
  bins.validate();
  if (!(bins.cell_area() > 0.0)) throw std::invalid_argument("degenerate bins");
  RealGrid g = make_grid(bins, AxisLabel::y_plane);
  long clipped = 0;
  for (const auto& s : samples) {
    int ix, iy;
    if (bin_of(bins, s.y1, s.y2, &ix, &iy))
      g.at(ix, iy) += 1.0;
    else
      ++clipped;
  }
  const double norm = samples.empty() ? 1.0 : 1.0 / (double(samples.size()) * bins.cell_area());
  for (double& v : g.values) v *= norm;
  if (clipped_fraction)
    *clipped_fraction = samples.empty() ? 0.0 : double(clipped) / double(samples.size());
  return g;
}

RealGrid exact_outcome_density(const CountDistribution& dist, const SimConfig& cfg,
                               double* clipped_fraction) {
  RealGrid g = make_grid(cfg.bins, AxisLabel::y_plane);
  const long nc = dist.count_cutoff + 1;
  double clipped = 0.0;
  for (long n1 = 0; n1 < nc; ++n1)
    for (long n2 = 0; n2 < nc; ++n2)
      for (long n3 = 0; n3 < nc; ++n3) {
        const double p = dist.probs[dist.index(n1, n2, n3)];
        if (p == 0.0) continue;
        const ReducedOutcome y = reduce_counts(n1, n2, n3, cfg.z_mag);
        int ix, iy;
        if (bin_of(cfg.bins, y.y1, y.y2, &ix, &iy))
          g.at(ix, iy) += p;
        else
          clipped += p;
      }
  for (double& v : g.values) v /= cfg.bins.cell_area();
  if (clipped_fraction) *clipped_fraction = clipped;
  return g;
}

RealGrid reference_density(const FockOperator& rho_s, const FockOperator& rho_p,
                           const GridSpec& bins, int threads) {
  const SpectralState s = spectral_decompose(rho_s);
  const SpectralState p = spectral_decompose(rho_p);
  // Eq-of-detection mapping: alpha = y1 - i y2
  return eval_grid(
      [&](Complex y) { return k_sp_trace_spectral(s, p, Complex(y.real(), -y.imag())); }, bins,
      AxisLabel::y_plane, kDefaultGridBudget, threads);
}

DensityDistance compare_densities(const RealGrid& a, const RealGrid& b) {
  if (!(a.spec == b.spec) || a.label != b.label)
    throw std::invalid_argument("compare_densities needs identical grid specs");
  DensityDistance d;
  for (size_t i = 0; i < a.values.size(); ++i) {
    const double diff = std::abs(a.values[i] - b.values[i]);
    d.l1 += diff;
    d.max_abs = std::max(d.max_abs, diff);
  }
  d.l1 *= a.spec.cell_area();
  return d;
}

}  // namespace trihom
