// trihom: phase-space densities and triple-coupler homodyne simulation.
//
// Subcommands: tritter-check, grid, simulate, converge. Options may come from
// a JSON config file (--config); explicit flags override file values. Exit
// codes: 0 success, 1 validation/check failure, 2 accuracy failure.

#include <cstdlib>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"

#include "trihom/detection.hpp"
#include "trihom/io.hpp"
#include "trihom/phasespace.hpp"
#include "trihom/quadrature.hpp"
#include "trihom/tritter.hpp"

using namespace trihom;
using nlohmann::json;

namespace {

struct Options {
  std::string config_path;
  std::string out = "out";
  std::string format = "csv";
  std::string signal = "vacuum";
  std::string probe = "vacuum";
  std::string density = "ksp";
  std::string rule = "gauss-legendre";
  double s_order = 0.0;
  int cutoff = 40;
  double z = 12.0;
  int count_cutoff = 0;
  long long samples = 1000000;
  std::uint64_t seed = 1;
  std::vector<double> window;
  int nx = 0, ny = 0;
  double radius = 6.0;
  int points = 121;
  std::vector<double> z_list;
  double inject_perturbation = 0.0;
  int threads = 1;
};

// Baseline (y1, y2) binning: bins commensurate with the outcome lattice for
// z in {3, 6, 12} (y1 step 1/(2z), y2 step sqrt(3)/(2z)), edges offset so no
// outcome falls on a bin boundary.
GridSpec default_y_bins() {
  GridSpec g;
  g.x_min = -119.0 / 48.0;
  g.x_max = 201.0 / 48.0;
  g.y_min = -95.0 * std::sqrt(3.0) / 48.0;
  g.y_max = 89.0 * std::sqrt(3.0) / 48.0;
  g.nx = 21;
  g.ny = 24;
  return g;
}

GridSpec window_from(const Options& o, const GridSpec& fallback) {
  GridSpec g = fallback;
  if (!o.window.empty()) {
    if (o.window.size() != 4)
      throw std::invalid_argument("--window needs x_min,x_max,y_min,y_max");
    g.x_min = o.window[0];
    g.x_max = o.window[1];
    g.y_min = o.window[2];
    g.y_max = o.window[3];
  }
  if (o.nx > 0) g.nx = o.nx;
  if (o.ny > 0) g.ny = o.ny;
  g.validate();
  return g;
}

QuadratureSpec quad_from(const Options& o) {
  QuadratureSpec q;
  q.radius = o.radius;
  q.points_per_axis = o.points;
  if (o.rule == "gauss-legendre" || o.rule == "gl")
    q.rule = QuadratureSpec::Rule::gauss_legendre;
  else if (o.rule == "trapezoid")
    q.rule = QuadratureSpec::Rule::trapezoid;
  else
    throw std::invalid_argument("unknown quadrature rule: " + o.rule);
  q.validate();
  return q;
}

void apply_config_json(const json& root, Options& o) {
  const json& j = root.contains("config") ? root.at("config") : root;
  auto get = [&](const char* key, auto& slot) {
    if (j.contains(key)) slot = j.at(key).get<std::decay_t<decltype(slot)>>();
  };
  get("signal", o.signal);
  get("probe", o.probe);
  get("density", o.density);
  get("rule", o.rule);
  get("s", o.s_order);
  get("cutoff", o.cutoff);
  get("z", o.z);
  get("count_cutoff", o.count_cutoff);
  get("samples", o.samples);
  get("seed", o.seed);
  get("window", o.window);
  get("nx", o.nx);
  get("ny", o.ny);
  get("radius", o.radius);
  get("points", o.points);
  get("z_list", o.z_list);
  get("format", o.format);
}

json config_to_json(const Options& o, const GridSpec& bins, bool with_samples) {
  json cfg{{"signal", o.signal},
           {"probe", o.probe},
           {"z", o.z},
           {"cutoff", o.cutoff},
           {"count_cutoff", o.count_cutoff},
           {"seed", o.seed},
           {"window", {bins.x_min, bins.x_max, bins.y_min, bins.y_max}},
           {"nx", bins.nx},
           {"ny", bins.ny}};
  if (with_samples) cfg["samples"] = o.samples;
  if (!o.z_list.empty()) cfg["z_list"] = o.z_list;
  return cfg;
}

SimConfig sim_config_from(const Options& o, const GridSpec& bins) {
  SimConfig cfg;
  cfg.z_mag = o.z;
  cfg.signal = parse_state_spec(o.signal);
  cfg.probe = parse_state_spec(o.probe);
  cfg.cutoff_sp = o.cutoff;
  cfg.count_cutoff = o.count_cutoff;
  cfg.n_samples = o.samples;
  cfg.seed = o.seed;
  cfg.bins = bins;
  cfg.validate();
  return cfg;
}

int cmd_tritter_check(const Options& o) {
  Matrix3c t = tritter_matrix().t;
  if (o.inject_perturbation != 0.0) t(0, 0) += o.inject_perturbation;

  const double unitarity = (t * t.adjoint() - Matrix3c::Identity()).cwiseAbs().maxCoeff();
  const double moduli = (t.cwiseAbs2().array() - 1.0 / 3.0).abs().maxCoeff();

  const std::array<int, 3> cut{8, 8, 8};
  const auto ft = ft_photocurrent_operators(cut);
  const auto closed = ft_photocurrent_closed_form(cut);
  double ft_identity = 0.0;
  for (int s = 0; s < 3; ++s)
    ft_identity = std::max(ft_identity, (ft[s] - closed[s]).cwiseAbs().maxCoeff());

  const TritterDecomposition d = decompose_tritter();
  Matrix3c dout = Matrix3c::Zero(), din = Matrix3c::Zero();
  for (int i = 0; i < 3; ++i) {
    dout(i, i) = std::polar(1.0, d.output_phases(i));
    din(i, i) = std::polar(1.0, d.input_phases(i));
  }
  const double decomposition = (dout * d.recomposed * din - t).cwiseAbs().maxCoeff();

  const struct {
    const char* name;
    double residual, threshold;
  } checks[] = {{"unitarity", unitarity, 1e-12},
                {"moduli", moduli, 1e-12},
                {"ft_identity", ft_identity, 1e-13},
                {"decomposition", decomposition, 1e-10}};
  bool ok = true;
  json results;
  for (const auto& c : checks) {
    const bool pass = c.residual <= c.threshold;
    ok = ok && pass;
    results[c.name] = c.residual;
    std::cout << c.name << " residual: " << fmt17(c.residual) << " (threshold "
              << fmt17(c.threshold) << ") " << (pass ? "PASS" : "FAIL") << "\n";
  }
  const json report{{"command", "tritter-check"}, {"results", results}, {"pass", ok}};
  if (!o.out.empty() && o.out != "out")
    atomic_write_text(o.out, report.dump(2) + "\n");
  else
    std::cout << report.dump(2) << "\n";
  return ok ? 0 : 1;
}

int cmd_grid(const Options& o) {
  GridSpec fallback;
  fallback.x_min = -2.0;
  fallback.x_max = 4.0;
  fallback.y_min = -3.0;
  fallback.y_max = 3.0;
  fallback.nx = fallback.ny = 61;
  const GridSpec window = window_from(o, fallback);
  const QuadratureSpec q = quad_from(o);
  const FockVector sig = make_state(parse_state_spec(o.signal), o.cutoff);

  RealGrid g;
  if (o.density == "q") {
    const FockOperator rho = density_matrix(sig);
    g = eval_grid([&](Complex a) { return q_function(rho, a); }, window,
                  AxisLabel::alpha_plane, kDefaultGridBudget, o.threads);
  } else if (o.density == "wigner") {
    const FockOperator rho = density_matrix(sig);
    std::vector<double> xs(window.nx), ys(window.ny);
    for (int i = 0; i < window.nx; ++i) xs[i] = window.x(i);
    for (int j = 0; j < window.ny; ++j) ys[j] = window.y(j);
    Diag diag;
    const RMat w = wigner_grid(rho, o.s_order, q, xs, ys, &diag, o.threads);
    g = make_grid(window, AxisLabel::alpha_plane);
    for (int i = 0; i < window.nx; ++i)
      for (int j = 0; j < window.ny; ++j) g.at(i, j) = w(i, j);
    if (diag.warning)
      std::cerr << "warning: quadrature diagnostics (imag residual "
                << fmt17(diag.imag_residual) << ", tail bound " << fmt17(diag.tail_bound)
                << ")\n";
  } else if (o.density == "ksp" || o.density == "ksp-conv") {
    const FockVector prb = make_state(parse_state_spec(o.probe), o.cutoff);
    const FockOperator rs = density_matrix(sig), rp = density_matrix(prb);
    if (o.density == "ksp") {
      const SpectralState ss = spectral_decompose(rs), sp = spectral_decompose(rp);
      g = eval_grid([&](Complex a) { return k_sp_trace_spectral(ss, sp, a); }, window,
                    AxisLabel::alpha_plane, kDefaultGridBudget, o.threads);
    } else {
      std::vector<double> xs(window.nx), ys(window.ny);
      for (int i = 0; i < window.nx; ++i) xs[i] = window.x(i);
      for (int j = 0; j < window.ny; ++j) ys[j] = window.y(j);
      const RMat w = k_sp_convolution_grid(rs, rp, xs, ys, q, nullptr, o.threads);
      g = make_grid(window, AxisLabel::alpha_plane);
      for (int i = 0; i < window.nx; ++i)
        for (int j = 0; j < window.ny; ++j) g.at(i, j) = w(i, j);
    }
  } else {
    throw std::invalid_argument("unknown density: " + o.density +
                                " (want q|wigner|ksp|ksp-conv)");
  }

  const std::string path = o.out + "." + o.format;
  write_grid(g, path, o.format);
  std::cout << "wrote " << path << " max " << fmt17(g.max_value()) << " integral "
            << fmt17(g.integral()) << "\n";
  return 0;
}

int cmd_simulate(const Options& o) {
  const GridSpec bins = window_from(o, default_y_bins());
  const SimConfig cfg = sim_config_from(o, bins);

  const CountDistribution dist = output_count_distribution(cfg, o.threads);
  const auto samples = sample_outcomes(dist, cfg, o.threads);
  double clipped = 0.0;
  const RealGrid emp = empirical_density(samples, bins, &clipped);

  const FockOperator rs = density_matrix(make_state(cfg.signal, cfg.cutoff_sp));
  const FockOperator rp = density_matrix(make_state(cfg.probe, cfg.cutoff_sp));
  const RealGrid ref = reference_density(rs, rp, bins, o.threads);
  const DensityDistance dd = compare_densities(emp, ref);

  write_grid(emp, o.out + ".empirical." + o.format, o.format);
  write_grid(ref, o.out + ".reference." + o.format, o.format);
  const json report{{"command", "simulate"},
                    {"config", config_to_json(o, bins, true)},
                    {"results",
                     {{"l1", dd.l1},
                      {"max_abs", dd.max_abs},
                      {"n_samples", cfg.n_samples},
                      {"z_mag", cfg.z_mag},
                      {"seed", cfg.seed},
                      {"mass_deficit", dist.mass_deficit},
                      {"clipped_fraction", clipped}}}};
  atomic_write_text(o.out + ".report.json", report.dump(2) + "\n");
  std::cout << "l1 " << fmt17(dd.l1) << " max_abs " << fmt17(dd.max_abs) << " mass_deficit "
            << fmt17(dist.mass_deficit) << " clipped " << fmt17(clipped) << "\n";
  return 0;
}

int cmd_converge(const Options& o) {
  if (o.z_list.size() < 3)
    throw std::invalid_argument("converge needs at least 3 z values");
  const GridSpec bins = window_from(o, default_y_bins());

  const FockOperator rs = density_matrix(make_state(parse_state_spec(o.signal), o.cutoff));
  const FockOperator rp = density_matrix(make_state(parse_state_spec(o.probe), o.cutoff));
  const RealGrid ref = reference_density(rs, rp, bins, o.threads);

  std::vector<double> l1s;
  for (double z : o.z_list) {
    Options oz = o;
    oz.z = z;
    const SimConfig cfg = sim_config_from(oz, bins);
    const CountDistribution dist = output_count_distribution(cfg, o.threads);
    const RealGrid exact = exact_outcome_density(dist, cfg);
    l1s.push_back(compare_densities(exact, ref).l1);
  }
  double mx = 0, my = 0, num = 0, den = 0;
  for (size_t i = 0; i < l1s.size(); ++i) {
    mx += std::log(o.z_list[i]);
    my += std::log(l1s[i]);
  }
  mx /= double(l1s.size());
  my /= double(l1s.size());
  for (size_t i = 0; i < l1s.size(); ++i) {
    num += (std::log(o.z_list[i]) - mx) * (std::log(l1s[i]) - my);
    den += (std::log(o.z_list[i]) - mx) * (std::log(o.z_list[i]) - mx);
  }
  const double slope = num / den;

  std::string csv = "# z,l1\n";
  for (size_t i = 0; i < l1s.size(); ++i)
    csv += fmt17(o.z_list[i]) + "," + fmt17(l1s[i]) + "\n";
  atomic_write_text(o.out + ".csv", csv);
  const json report{{"command", "converge"},
                    {"config", config_to_json(o, bins, false)},
                    {"results", {{"z", o.z_list}, {"l1", l1s}, {"slope", slope}}}};
  atomic_write_text(o.out + ".report.json", report.dump(2) + "\n");
  std::cout << "slope " << fmt17(slope) << "\n";
  for (size_t i = 0; i < l1s.size(); ++i)
    std::cout << "z " << fmt17(o.z_list[i]) << " l1 " << fmt17(l1s[i]) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  if (const char* env = std::getenv("TRIHOM_THREADS")) o.threads = std::atoi(env);

  // config file first, flags override
  for (int i = 1; i + 1 < argc; ++i)
    if (std::string(argv[i]) == "--config") o.config_path = argv[i + 1];
  if (!o.config_path.empty()) {
    std::ifstream f(o.config_path);
    if (!f) {
      std::cerr << "error: cannot read config " << o.config_path << "\n";
      return 1;
    }
    try {
      json j;
      f >> j;
      apply_config_json(j, o);
    } catch (const std::exception& e) {
      std::cerr << "error: bad config: " << e.what() << "\n";
      return 1;
    }
  }

  CLI::App app{"phase-space densities from triple-coupler homodyne detection"};
  app.require_subcommand(1);
  std::string config_dummy;
  app.add_option("--config", config_dummy, "JSON config file (flags override it)");

  auto add_common = [&](CLI::App* c, bool with_quad) {
    c->add_option("--config", config_dummy, "JSON config file (flags override it)");
    c->add_option("--out", o.out, "output path prefix");
    c->add_option("--format", o.format, "csv|json|ppm")
        ->check(CLI::IsMember({"csv", "json", "ppm"}));
    c->add_option("--threads", o.threads, "worker threads (never affects results)");
    c->add_option("--signal", o.signal, "signal state spec");
    c->add_option("--probe", o.probe, "probe state spec");
    c->add_option("--cutoff", o.cutoff, "signal/probe Fock cutoff");
    c->add_option("--window", o.window, "x_min,x_max,y_min,y_max")->delimiter(',');
    c->add_option("--nx", o.nx, "grid points along x");
    c->add_option("--ny", o.ny, "grid points along y");
    if (with_quad) {
      c->add_option("--radius", o.radius, "quadrature radius");
      c->add_option("--points", o.points, "quadrature points per axis");
      c->add_option("--rule", o.rule, "gauss-legendre|trapezoid");
    }
  };

  CLI::App* check = app.add_subcommand("tritter-check", "validate the coupler algebra");
  check->add_option("--config", config_dummy, "JSON config file (flags override it)");
  check->add_option("--out", o.out, "JSON report path");
  check->add_option("--inject-perturbation", o.inject_perturbation,
                    "test mode: perturb T(0,0) before checking");

  CLI::App* grid = app.add_subcommand("grid", "evaluate a phase-space density on a grid");
  add_common(grid, true);
  grid->add_option("--density", o.density, "q|wigner|ksp|ksp-conv");
  grid->add_option("--s", o.s_order, "ordering parameter for wigner");

  CLI::App* sim = app.add_subcommand("simulate", "sampled detection run vs reference");
  add_common(sim, false);
  sim->add_option("--z", o.z, "local-oscillator amplitude");
  sim->add_option("--count-cutoff", o.count_cutoff, "per-mode count cutoff (0 = auto)");
  sim->add_option("--samples", o.samples, "number of Monte Carlo samples");
  sim->add_option("--seed", o.seed, "sampler seed");

  CLI::App* conv = app.add_subcommand("converge", "exact-distribution l1 vs z study");
  add_common(conv, false);
  conv->add_option("--z-list", o.z_list, "z values (>= 3)")->delimiter(',');
  conv->add_option("--count-cutoff", o.count_cutoff, "per-mode count cutoff (0 = auto)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (check->parsed()) return cmd_tritter_check(o);
    if (grid->parsed()) return cmd_grid(o);
    if (sim->parsed()) return cmd_simulate(o);
    if (conv->parsed()) return cmd_converge(o);
  } catch (const AccuracyError& e) {
    std::cerr << "accuracy error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
