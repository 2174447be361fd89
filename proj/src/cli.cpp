#include "triwave/cli.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "triwave/errors.hpp"
#include "triwave/io.hpp"
#include "triwave/solvers.hpp"

namespace triwave {
namespace {

std::string fmt(double x) { return format_double(x); }

void log_config(const RunConfig& cfg) {
  std::istringstream in(serialize_config(cfg));
  std::string line;
  std::cerr << "# resolved config\n";
  while (std::getline(in, line)) std::cerr << "# " << line << '\n';
}

void print_report(const char* label, const FunctionalReport& r) {
  std::cout << label << " S=" << fmt(r.S) << " Q=" << fmt(r.Q) << " V=" << fmt(r.V)
            << " N=" << fmt(r.N) << '\n';
}

std::optional<ThresholdBranch> parse_branch(const std::string& b) {
  if (b == "auto") return std::nullopt;
  return static_cast<ThresholdBranch>(b[0] - 'A');
}

double resolve_mu_unit(const RunConfig& cfg, const Grid& grid) {
  if (cfg.scan.mu_unit > 0.0) return cfg.scan.mu_unit;
  std::cerr << "# estimating mu from [params] (expected at unit velocity)\n";
  return mu_estimate(cfg.params, grid, cfg.solver, parse_case(cfg.wave_case));
}

int cmd_evolve(const RunConfig& cfg, const std::string& out, const std::string& series) {
  const Grid grid = build_grid(cfg);
  const TriField data = build_data(cfg, grid);
  const Trajectory traj = evolve(cfg.params, data, cfg.evolve);
  const std::string csv = !series.empty() ? series : (out.empty() ? "" : out);
  if (!csv.empty()) write_series(csv, traj, grid.dim());
  else write_series(std::cout, traj, grid.dim());
  const DriftStats d = drift(traj.invariant_series);
  std::cerr << "drift M=" << fmt(d.M) << " M1=" << fmt(d.M1) << " M2=" << fmt(d.M2)
            << " M3=" << fmt(d.M3) << " E=" << fmt(d.E) << " P=" << fmt(d.P) << '\n';
  std::cerr << "verdict " << verdict_name(traj.verdict) << " at t=" << fmt(traj.final_time) << '\n';
  return traj.verdict == Verdict::completed ? 0 : 2;
}

int cmd_ground(const RunConfig& cfg, const std::string& out) {
  const Grid grid = build_grid(cfg);
  const WaveResult r = ground_state(cfg.params, grid, cfg.solver);
  print_report("ground", r.report);
  const PohozaevResiduals p = pohozaev_check(cfg.params, r.profile);
  std::cout << "residual=" << fmt(r.grad_residual) << " pohozaev1=" << fmt(p.nehari)
            << " pohozaev2=" << fmt(p.dilation) << " iterations=" << r.iterations
            << (r.spread_suspicious ? " restart-spread>1%" : "") << '\n';
  if (!out.empty()) write_snapshot(out, r.profile, cfg.params);
  require_converged(r, "ground state");
  return 0;
}

int cmd_twave(const RunConfig& cfg, const std::string& out) {
  const Grid grid = build_grid(cfg);
  const WaveResult r = traveling_wave(cfg.params, parse_case(cfg.wave_case), grid, cfg.solver);
  print_report("traveling", r.report);
  std::cout << "residual=" << fmt(r.grad_residual) << " iterations=" << r.iterations
            << (r.spread_suspicious ? " restart-spread>1%" : "") << '\n';
  if (!out.empty()) write_snapshot(out, r.profile, cfg.params);
  require_converged(r, "traveling wave");
  return 0;
}

int cmd_gn(const RunConfig& cfg, const std::string& out) {
  const Grid grid = build_grid(cfg);
  const GnResult r = gn_constant(cfg.params, grid, cfg.solver);
  std::cout << "alpha=" << fmt(r.alpha) << " C_opt=" << fmt(r.C_opt)
            << " residual=" << fmt(r.residual) << " iterations=" << r.iterations << '\n';
  if (!out.empty()) write_snapshot(out, r.profile, cfg.params);
  if (!r.converged) throw NumericalError("GN minimization did not converge");
  return 0;
}

int cmd_mu(const RunConfig& cfg) {
  const Grid grid = build_grid(cfg);
  std::cout << "mu=" << fmt(mu_estimate(cfg.params, grid, cfg.solver, parse_case(cfg.wave_case)))
            << '\n';
  return 0;
}

int cmd_threshold(const RunConfig& cfg) {
  const Grid grid = build_grid(cfg);
  const double mu = resolve_mu_unit(cfg, grid);
  const ThresholdConstant t = threshold_constants(cfg.params, mu, parse_branch(cfg.scan.branch));
  std::cout << "branch=" << branch_label(t.branch) << " mu_unit=" << fmt(mu)
            << " cap=" << fmt(t.value) << " bounds " << t.capped << '\n';
  return 0;
}

int cmd_scan(const RunConfig& cfg, const std::string& out) {
  const Grid grid = build_grid(cfg);
  const TriField data = build_data(cfg, grid);
  Eigen::VectorXd dir = cfg.scan.direction.size() ? cfg.scan.direction
                                                  : Eigen::VectorXd::Unit(grid.dim(), 0);
  dir /= dir.norm();
  std::vector<Eigen::VectorXd> cs;
  for (double s : cfg.scan.speeds) cs.push_back(s * dir);
  const double mu = resolve_mu_unit(cfg, grid);
  const auto branch = parse_branch(cfg.scan.branch);
  const auto rows = oscillation_scan(data, cfg.params, cs, mu, branch);
  const ThresholdConstant cap = threshold_constants(cfg.params, mu, branch);

  std::ostringstream table;
  table << "speed,omega,mu,Q,V,S,N,region\n";
  for (const auto& r : rows)
    table << fmt(r.speed) << ',' << fmt(r.omega) << ',' << fmt(r.mu) << ',' << fmt(r.report.Q)
          << ',' << fmt(r.report.V) << ',' << fmt(r.report.S) << ',' << fmt(r.report.N) << ','
          << region_name(r.region) << '\n';
  if (out.empty()) {
    std::cout << table.str();
  } else {
    std::ofstream f(out, std::ios::trunc);
    if (!f) throw IoError("cannot open '" + out + "' for writing");
    f << table.str();
  }
  std::cerr << "cap " << branch_label(cap.branch) << "=" << fmt(cap.value) << " on " << cap.capped
            << ", data value " << fmt(capped_mass(data, cap.branch)) << '\n';
  return 0;
}

int cmd_probe(const RunConfig& cfg, const std::string& out) {
  const Grid grid = build_grid(cfg);
  const ProbeResult r = nonexistence_probe(cfg.params, grid, cfg.solver);
  std::ostringstream trace;
  trace << "iteration,Q\n";
  for (std::size_t i = 0; i < r.trace_Q.size(); ++i) trace << i << ',' << fmt(r.trace_Q[i]) << '\n';
  if (out.empty()) {
    std::cout << trace.str();
  } else {
    std::ofstream f(out, std::ios::trunc);
    if (!f) throw IoError("cannot open '" + out + "' for writing");
    f << trace.str();
  }
  std::cerr << "final Q=" << fmt(r.final_Q) << " nehari=" << fmt(r.nehari_residual)
            << " dilation=" << fmt(r.dilation_residual) << " monotone=" << r.monotone << '\n';
  std::cerr << r.verdict << '\n';
  return 0;
}

int cmd_check(const std::string& config, const std::string& series) {
  if (!series.empty()) {
    const SeriesTable t = read_series(series);
    const DriftStats d = drift(t.rows);
    std::cout << "rows=" << t.rows.size() << " drift M=" << fmt(d.M) << " M1=" << fmt(d.M1)
              << " M2=" << fmt(d.M2) << " M3=" << fmt(d.M3) << " E=" << fmt(d.E)
              << " P=" << fmt(d.P) << '\n';
    return 0;
  }
  const RunConfig cfg = config.empty() ? RunConfig{} : load_config(config);
  log_config(cfg);
  return run_self_check(cfg, std::cout) ? 0 : 2;
}

}  // namespace

int dispatch(int argc, char** argv) {
  CLI::App app{"Three-wave NLS laboratory"};
  app.require_subcommand(1, 1);
  std::string config, out, series;

  const char* names[] = {"evolve", "ground", "twave", "gn", "mu", "threshold", "scan", "probe", "check"};
  const char* help[] = {"evolve initial data and write the invariant series",
                        "compute a ground state (c = 0)",
                        "compute a traveling wave",
                        "estimate the sharp Gagliardo-Nirenberg constant (dim 4)",
                        "estimate the Nehari infimum",
                        "evaluate the global-existence mass cap",
                        "run the oscillation scan",
                        "run the zero-mass resonant probe",
                        "run the invariant self-test suite or re-check a series file"};
  for (int i = 0; i < 9; ++i) {
    CLI::App* sub = app.add_subcommand(names[i], help[i]);
    sub->add_option("--config", config, "configuration file");
    sub->add_option("--out", out, "output path");
    if (std::string(names[i]) == "evolve" || std::string(names[i]) == "check")
      sub->add_option("--series", series, "series CSV path");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    const std::string cmd = app.get_subcommands().front()->get_name();
    if (cmd == "check") return cmd_check(config, series);
    const RunConfig cfg = config.empty() ? RunConfig{} : load_config(config);
    log_config(cfg);
    if (cmd == "evolve") return cmd_evolve(cfg, out, series);
    if (cmd == "ground") return cmd_ground(cfg, out);
    if (cmd == "twave") return cmd_twave(cfg, out);
    if (cmd == "gn") return cmd_gn(cfg, out);
    if (cmd == "mu") return cmd_mu(cfg);
    if (cmd == "threshold") return cmd_threshold(cfg);
    if (cmd == "scan") return cmd_scan(cfg, out);
    if (cmd == "probe") return cmd_probe(cfg, out);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 2;
  }
  return 1;
}

}  // namespace triwave
