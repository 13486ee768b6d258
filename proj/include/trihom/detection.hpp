#pragma once

#include <cstdint>
#include <vector>

#include "trihom/fock.hpp"
#include "trihom/grid.hpp"
#include "trihom/tritter.hpp"
#include "trihom/types.hpp"

namespace trihom {

// Full configuration of one detection run. The local oscillator feeds input
// mode 2 with phase 0, the signal mode 1, the probe mode 3.
struct SimConfig {
  double z_mag = 8.0;  // local-oscillator amplitude |z|
  StateSpec signal = StateSpec::vacuum();
  StateSpec probe = StateSpec::vacuum();
  int cutoff_sp = 16;     // signal/probe Fock truncation
  int count_cutoff = 0;   // max photon count per output mode; 0 = minimum valid
  std::int64_t n_samples = 0;
  std::uint64_t seed = 1;
  GridSpec bins;  // (y1, y2) binning window

  // ceil(z^2/3 + 8 z/sqrt(3) + 10): captures >= 1 - 1e-8 of each output
  // mode's count mass.
  int min_count_cutoff() const;
  int effective_count_cutoff() const;
  void validate() const;  // throws std::invalid_argument
};

// Joint photocount probabilities P(n1, n2, n3), row-major up to count_cutoff
// per mode. mass_deficit is the probability lost to truncation.
struct CountDistribution {
  int count_cutoff = 0;
  std::vector<double> probs;
  double mass_deficit = 0.0;

  long index(long n1, long n2, long n3) const {
    const long c = count_cutoff + 1;
    return (n1 * c + n2) * c + n3;
  }
  long dim() const {
    const long c = count_cutoff + 1;
    return c * c * c;
  }
};

struct OutcomeSample {
  double y1 = 0.0;
  double y2 = 0.0;
};

// Exact (up to truncation) joint count distribution. The coherent LO is
// commuted through the coupler into per-output displacements beta_j = z T_{j2},
// so the Fock evolution only touches the few-photon signal x vacuum x probe
// state. Throws AccuracyError if mass_deficit > 1e-4.
CountDistribution output_count_distribution(const SimConfig& cfg, int threads = 1);

// n_samples seeded draws: inverse CDF over the row-major flattening, driven
// by a counter-based generator (value i depends only on (seed, i)), each
// triple reduced through reduce_counts. Identical (seed, cfg) give identical
// output for any thread count.
std::vector<OutcomeSample> sample_outcomes(const CountDistribution& dist, const SimConfig& cfg,
                                           int threads = 1);

// Normalized 2D histogram over the bin grid; integral = 1 - clipped fraction.
RealGrid empirical_density(const std::vector<OutcomeSample>& samples, const GridSpec& bins,
                           double* clipped_fraction = nullptr);

// Same histogram fed with the full discrete outcome distribution instead of
// samples (no Monte Carlo noise).
RealGrid exact_outcome_density(const CountDistribution& dist, const SimConfig& cfg,
                               double* clipped_fraction = nullptr);

// The asymptotic prediction: K_13 evaluated at alpha = y1 - i y2 on the bin
// centers (signal mode 1, probe mode 3).
RealGrid reference_density(const FockOperator& rho_s, const FockOperator& rho_p,
                           const GridSpec& bins, int threads = 1);

struct DensityDistance {
  double l1 = 0.0;
  double max_abs = 0.0;
};

// l1 = sum |a - b| * cell_area; max_abs = max |a - b|. Grids must share specs.
DensityDistance compare_densities(const RealGrid& a, const RealGrid& b);

// Counter-based uniform draw in [0, 1): a bijective 64-bit mix of
// (seed, index), so any partition of the index range yields the same stream.
double uniform01(std::uint64_t seed, std::uint64_t index);

}  // namespace trihom
