#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "test_util.hpp"
#include "trihom/detection.hpp"
#include "trihom/phasespace.hpp"

using namespace trihom;

namespace {

GridSpec small_bins() {
  GridSpec g;
  g.x_min = -2.0;
  g.x_max = 2.0;
  g.y_min = -2.0;
  g.y_max = 2.0;
  g.nx = g.ny = 17;
  return g;
}

double poisson_pmf(double mean, long n) {
  return std::exp(-mean + n * std::log(mean) - std::lgamma(n + 1.0));
}

}  // namespace

TEST_CASE("config validation") {
  SimConfig cfg;
  cfg.bins = small_bins();
  cfg.z_mag = 8.0;
  CHECK(cfg.min_count_cutoff() == 69);
  cfg.count_cutoff = 30;  // below the minimum for z = 8
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg.count_cutoff = 0;
  cfg.z_mag = -1.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg.z_mag = 25.0;  // count cutoff beyond the supported index range
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("vacuum/vacuum counts are a product of three Poissons") {
  SimConfig cfg;
  cfg.z_mag = 2.0;
  cfg.cutoff_sp = 0;
  cfg.bins = small_bins();
  const CountDistribution dist = output_count_distribution(cfg);
  const double mean = cfg.z_mag * cfg.z_mag / 3.0;
  double max_err = 0.0;
  const long nc = dist.count_cutoff + 1;
  for (long n1 = 0; n1 < nc; ++n1)
    for (long n2 = 0; n2 < nc; ++n2)
      for (long n3 = 0; n3 < nc; ++n3) {
        const double expect =
            poisson_pmf(mean, n1) * poisson_pmf(mean, n2) * poisson_pmf(mean, n3);
        max_err = std::max(max_err,
                           std::abs(dist.probs[dist.index(n1, n2, n3)] - expect));
      }
  CHECK(max_err < 1e-10);
  CHECK(dist.mass_deficit >= 0.0);
  CHECK(dist.mass_deficit < 1e-6);
}

TEST_CASE("displacement trick agrees with direct three-mode evolution") {
  // oracle: feed the truncated LO coherent state through the coupler directly
  SimConfig cfg;
  cfg.z_mag = 2.0;
  cfg.signal = StateSpec::coherent_state({0.7, 0.2});
  cfg.probe = StateSpec::number_state(1);
  cfg.cutoff_sp = 10;
  cfg.bins = small_bins();
  const CountDistribution dist = output_count_distribution(cfg);

  const int lo_cut = 30;
  const ThreeModeState direct = apply_tritter(
      tensor_product(make_state(cfg.signal, cfg.cutoff_sp),
                     make_state(StateSpec::coherent_state({cfg.z_mag, 0.0}), lo_cut),
                     make_state(cfg.probe, cfg.cutoff_sp)),
      tritter_matrix(), 60);
  double max_err = 0.0;
  for (int n1 = 0; n1 <= 15; ++n1)
    for (int n2 = 0; n2 <= 15; ++n2)
      for (int n3 = 0; n3 <= 15; ++n3) {
        const double p_direct = std::norm(direct.amps[direct.index(n1, n2, n3)]);
        max_err = std::max(max_err,
                           std::abs(dist.probs[dist.index(n1, n2, n3)] - p_direct));
      }
  CHECK(max_err < 1e-10);
}

TEST_CASE("count distribution bookkeeping") {
  SimConfig cfg;
  cfg.z_mag = 3.0;
  cfg.signal = StateSpec::coherent_state({1.0, 0.0});
  cfg.probe = StateSpec::number_state(1);
  cfg.cutoff_sp = 20;
  cfg.bins = small_bins();
  const CountDistribution dist = output_count_distribution(cfg, 2);

  double mass = 0.0, mean_total = 0.0;
  const long nc = dist.count_cutoff + 1;
  for (long n1 = 0; n1 < nc; ++n1)
    for (long n2 = 0; n2 < nc; ++n2)
      for (long n3 = 0; n3 < nc; ++n3) {
        const double p = dist.probs[dist.index(n1, n2, n3)];
        CHECK(p >= 0.0);
        mass += p;
        mean_total += p * double(n1 + n2 + n3);
      }
  CHECK(std::abs(mass + dist.mass_deficit - 1.0) < 1e-12);
  // passive optics: <n_total> = z^2 + <n>_S + <n>_P
  CHECK(std::abs(mean_total - (9.0 + 1.0 + 1.0)) < 1e-6);
}

TEST_CASE("count distribution is thread-count invariant") {
  SimConfig cfg;
  cfg.z_mag = 2.5;
  cfg.signal = StateSpec::coherent_state({0.5, 0.5});
  cfg.probe = StateSpec::vacuum();
  cfg.cutoff_sp = 8;
  cfg.bins = small_bins();
  const CountDistribution d1 = output_count_distribution(cfg, 1);
  const CountDistribution d4 = output_count_distribution(cfg, 4);
  CHECK(d1.probs == d4.probs);
}

TEST_CASE("accuracy error on severe signal truncation") {
  SimConfig cfg;
  cfg.z_mag = 2.0;
  cfg.signal = StateSpec::coherent_state({3.0, 0.0});
  cfg.cutoff_sp = 2;  // drops most of the coherent(3) mass
  cfg.bins = small_bins();
  CHECK_THROWS_AS(output_count_distribution(cfg), AccuracyError);
}

TEST_CASE("sampler: empty, deterministic, thread invariant") {
  SimConfig cfg;
  cfg.z_mag = 4.0;
  cfg.cutoff_sp = 0;
  cfg.seed = 99;
  cfg.bins = small_bins();
  const CountDistribution dist = output_count_distribution(cfg);

  cfg.n_samples = 0;
  CHECK(sample_outcomes(dist, cfg).empty());

  cfg.n_samples = 20000;
  const auto s1 = sample_outcomes(dist, cfg, 1);
  const auto s2 = sample_outcomes(dist, cfg, 1);
  const auto s4 = sample_outcomes(dist, cfg, 4);
  REQUIRE(s1.size() == 20000);
  for (size_t i = 0; i < s1.size(); ++i) {
    CHECK(s1[i].y1 == s2[i].y1);
    CHECK(s1[i].y2 == s2[i].y2);
    CHECK(s1[i].y1 == s4[i].y1);
    CHECK(s1[i].y2 == s4[i].y2);
  }
}

TEST_CASE("sampler statistics at z = 8 (reduced sample count)") {
  SimConfig cfg;
  cfg.z_mag = 8.0;
  cfg.cutoff_sp = 0;
  cfg.seed = 20260810;
  cfg.n_samples = 100000;
  cfg.bins = small_bins();
  const CountDistribution dist = output_count_distribution(cfg);
  const auto samples = sample_outcomes(dist, cfg, 2);
  double m1 = 0, m2 = 0, v1 = 0, v2 = 0;
  for (const auto& s : samples) {
    m1 += s.y1;
    m2 += s.y2;
  }
  m1 /= double(samples.size());
  m2 /= double(samples.size());
  for (const auto& s : samples) {
    v1 += (s.y1 - m1) * (s.y1 - m1);
    v2 += (s.y2 - m2) * (s.y2 - m2);
  }
  v1 /= double(samples.size() - 1);
  v2 /= double(samples.size() - 1);
  const double bound = 4.0 * std::sqrt(0.5) / std::sqrt(double(samples.size()));
  CHECK(std::abs(m1) < bound);
  CHECK(std::abs(m2) < bound);
  CHECK(std::abs(v1 - 0.5) < 0.03 * 0.5 * 3.16);  // 3% criterion scaled for 1e5 samples
  CHECK(std::abs(v2 - 0.5) < 0.03 * 0.5 * 3.16);
}

TEST_CASE("empirical density: single sample and uniform sanity") {
  GridSpec g = small_bins();  // nodes at 0.25 steps; (0, 0) is a node
  std::vector<OutcomeSample> one{{0.0, 0.0}};
  double clipped = -1.0;
  const RealGrid h = empirical_density(one, g, &clipped);
  CHECK(clipped == 0.0);
  CHECK(h.at(8, 8) == doctest::Approx(1.0 / g.cell_area()).epsilon(1e-14));
  CHECK(h.integral() == doctest::Approx(1.0).epsilon(1e-12));

  // uniform synthetic samples: per-cell densities within 5 sigma
  std::vector<OutcomeSample> flat;
  const long per_axis = 400;
  for (long i = 0; i < per_axis; ++i)
    for (long j = 0; j < per_axis; ++j)
      flat.push_back({-2.0 + 4.0 * (i + 0.5) / per_axis, -2.0 + 4.0 * (j + 0.5) / per_axis});
  const RealGrid u = empirical_density(flat, g, &clipped);
  const double n_cell = double(flat.size()) / (17.0 * 17.0);
  const double sigma = std::sqrt(n_cell) / (flat.size() * g.cell_area());
  const double expect = 1.0 / (4.0 * 4.0);
  int interior_bad = 0;
  for (int i = 1; i < 16; ++i)
    for (int j = 1; j < 16; ++j)
      if (std::abs(u.at(i, j) - expect) > 5.0 * sigma) ++interior_bad;
  CHECK(interior_bad == 0);

  // clipping is counted, not silently dropped
  std::vector<OutcomeSample> out{{5.0, 5.0}, {0.0, 0.0}};
  const RealGrid c = empirical_density(out, g, &clipped);
  CHECK(clipped == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(c.integral() == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("vacuum/vacuum histogram peaks at the origin") {
  SimConfig cfg;
  cfg.z_mag = 12.0;
  cfg.cutoff_sp = 0;
  cfg.seed = 7;
  cfg.n_samples = 200000;
  cfg.bins = small_bins();
  const CountDistribution dist = output_count_distribution(cfg);
  const auto samples = sample_outcomes(dist, cfg, 2);
  const RealGrid h = empirical_density(samples, cfg.bins);
  int pi = -1, pj = -1;
  double best = -1.0;
  for (int i = 0; i < 17; ++i)
    for (int j = 0; j < 17; ++j)
      if (h.at(i, j) > best) {
        best = h.at(i, j);
        pi = i;
        pj = j;
      }
  CHECK(std::abs(pi - 8) <= 1);
  CHECK(std::abs(pj - 8) <= 1);
}

TEST_CASE("reference density: vacuum probe gives the Q-function grid") {
  const FockOperator rs = density_matrix(make_state(StateSpec::coherent_state({1.0, 0.0}), 40));
  const FockOperator rp = density_matrix(make_state(StateSpec::vacuum(), 40));
  GridSpec g;
  g.x_min = -2.0;
  g.x_max = 4.0;
  g.y_min = -3.0;
  g.y_max = 3.0;
  g.nx = g.ny = 31;
  const RealGrid ref = reference_density(rs, rp, g, 2);
  double max_err = 0.0, max_q_err = 0.0;
  for (int i = 0; i < g.nx; ++i)
    for (int j = 0; j < g.ny; ++j) {
      const Complex alpha(g.x(i), -g.y(j));
      max_err = std::max(
          max_err, std::abs(ref.at(i, j) - std::exp(-std::norm(alpha - 1.0)) / kPi));
      max_q_err = std::max(max_q_err, std::abs(ref.at(i, j) - q_function(rs, alpha)));
    }
  CHECK(max_err < 1e-10);
  CHECK(max_q_err < 1e-13);
  CHECK(ref.max_value() == doctest::Approx(1.0 / kPi).epsilon(1e-10));
}

TEST_CASE("reference density: number probe vanishes at alpha = beta") {
  const FockOperator rs = density_matrix(make_state(StateSpec::coherent_state({1.0, 0.0}), 40));
  const FockOperator rp = density_matrix(make_state(StateSpec::number_state(1), 40));
  GridSpec g = small_bins();  // (1, 0) is a node
  const RealGrid ref = reference_density(rs, rp, g, 2);
  CHECK(std::abs(ref.at(12, 8)) < 1e-9);
}

TEST_CASE("reference density pins alpha = y1 - i y2 (peak of coherent(i) at (0,-1))") {
  const FockOperator rs = density_matrix(make_state(StateSpec::coherent_state({0.0, 1.0}), 40));
  const FockOperator rp = density_matrix(make_state(StateSpec::vacuum(), 40));
  GridSpec g = small_bins();
  const RealGrid ref = reference_density(rs, rp, g, 2);
  // node (8, 4) is (0,-1); node (8, 12) is (0,+1)
  CHECK(ref.at(8, 4) == doctest::Approx(1.0 / kPi).epsilon(1e-9));
  CHECK(ref.at(8, 12) < 0.01);
  int pi = -1, pj = -1;
  double best = -1.0;
  for (int i = 0; i < 17; ++i)
    for (int j = 0; j < 17; ++j)
      if (ref.at(i, j) > best) {
        best = ref.at(i, j);
        pi = i;
        pj = j;
      }
  CHECK(pi == 8);
  CHECK(pj == 4);
}

TEST_CASE("compare_densities") {
  GridSpec g = small_bins();
  RealGrid a = make_grid(g, AxisLabel::y_plane);
  RealGrid b = make_grid(g, AxisLabel::y_plane);
  DensityDistance d0 = compare_densities(a, b);
  CHECK(d0.l1 == 0.0);
  CHECK(d0.max_abs == 0.0);

  b.at(3, 5) = 0.1;
  const DensityDistance d1 = compare_densities(a, b);
  CHECK(d1.l1 == doctest::Approx(0.1 * g.cell_area()).epsilon(1e-14));
  CHECK(d1.max_abs == doctest::Approx(0.1).epsilon(1e-14));

  RealGrid other = make_grid(small_bins(), AxisLabel::alpha_plane);
  CHECK_THROWS_AS(compare_densities(a, other), std::invalid_argument);
  GridSpec g2 = small_bins();
  g2.nx = 9;
  RealGrid c = make_grid(g2, AxisLabel::y_plane);
  CHECK_THROWS_AS(compare_densities(a, c), std::invalid_argument);
}

TEST_CASE("exact outcome density converges to the reference as z grows") {
  // small-scale version of the convergence study (full study in acceptance)
  SimConfig cfg;
  cfg.signal = StateSpec::coherent_state({1.0, 0.0});
  cfg.probe = StateSpec::vacuum();
  cfg.cutoff_sp = 16;
  GridSpec bins;
  bins.x_min = -119.0 / 48.0;
  bins.x_max = bins.x_min + 20.0 / 3.0;
  bins.y_min = std::sqrt(3.0) * (-95.0 / 48.0);
  bins.y_max = bins.y_min + 23.0 * std::sqrt(3.0) / 6.0;
  bins.nx = 21;
  bins.ny = 24;
  cfg.bins = bins;

  const FockOperator rs = density_matrix(make_state(cfg.signal, 40));
  const FockOperator rp = density_matrix(make_state(cfg.probe, 40));
  const RealGrid ref = reference_density(rs, rp, bins, 2);

  std::vector<double> l1;
  for (double z : {3.0, 6.0}) {
    cfg.z_mag = z;
    const CountDistribution dist = output_count_distribution(cfg, 2);
    double clipped = 0.0;
    const RealGrid exact = exact_outcome_density(dist, cfg, &clipped);
    CHECK(clipped < 1e-3);
    l1.push_back(compare_densities(exact, ref).l1);
  }
  CHECK(l1[1] < l1[0]);
  CHECK(l1[0] == doctest::Approx(0.2561).epsilon(0.02));  // frozen pipeline baseline
  CHECK(l1[1] == doctest::Approx(0.1260).epsilon(0.02));
}
