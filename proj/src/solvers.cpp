#include "triwave/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <optional>
#include <sstream>

#include "triwave/errors.hpp"

namespace triwave {
namespace {

std::mt19937_64 restart_rng(std::uint64_t seed, int restart) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(restart)};
  return std::mt19937_64(seq);
}

WaveResult run_restarts(const TildeContext& ctx, WaveCase wc, const SolveOptions& opts,
                        const DescentSettings& settings) {
  opts.validate();
  std::vector<std::optional<DescentOutcome>> outcomes(static_cast<std::size_t>(opts.restarts));
  parallel_for(opts.restarts, [&](int r) {
    auto rng = restart_rng(opts.seed, r);
    outcomes[r] = nehari_descent(ctx, random_initial(ctx, rng), opts, settings);
  });

  int best = -1;
  bool best_converged = false;
  WaveResult result;
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (int r = 0; r < opts.restarts; ++r) {
    const DescentOutcome& o = *outcomes[r];
    if (o.converged) {
      result.restart_values.push_back(o.report.S);
      lo = std::min(lo, o.report.S);
      hi = std::max(hi, o.report.S);
    }
    const bool better = best < 0 || (o.converged && !best_converged) ||
                        (o.converged == best_converged && o.report.S < outcomes[best]->report.S);
    if (better) {
      best = r;
      best_converged = o.converged;
    }
  }
  const DescentOutcome& b = *outcomes[best];
  result.profile = b.field;
  result.action_value = b.report.S;
  result.mu_estimate = b.report.S;
  result.grad_residual = b.residual;
  result.wave_case = wc;
  result.report = b.report;
  result.converged = b.converged;
  result.iterations = b.iterations;
  result.spread_suspicious = result.restart_values.size() > 1 && (hi - lo) > 0.01 * std::abs(lo);
  return result;
}

double sq(const CArray& a, const Grid& g) { return a.abs2().sum() * g.cell_volume(); }

double weighted_mass(const Params& p, const TriField& f) {
  const Grid& g = f.grid();
  return p.gamma1 * sq(f[0], g) + p.gamma2 * sq(f[1], g) + 2.0 * p.gamma3 * sq(f[2], g);
}

double plain_cubic(const TriField& f) {
  return (f[0] * f[1] * f[2].conjugate()).real().sum() * f.grid().cell_volume();
}

double rel(double num, double K) {
  if (num == 0.0) return 0.0;
  return std::abs(num) / std::max(std::abs(K), std::numeric_limits<double>::min());
}

}  // namespace

WaveResult ground_state(const Params& params, const Grid& grid, const SolveOptions& opts) {
  params.validate(grid.dim());
  if (params.speed() != 0.0) throw ValidationError("ground_state requires c = 0");
  if (!(params.omega > 0.0)) throw ValidationError("ground_state requires omega > 0");
  const TildeContext ctx(params, grid);
  DescentSettings settings;
  settings.positive = true;
  return run_restarts(ctx, WaveCase::A, opts, settings);
}

WaveResult traveling_wave(const Params& params, WaveCase wc, const Grid& grid,
                          const SolveOptions& opts) {
  params.validate(grid.dim());
  if (params.speed() == 0.0) {
    WaveResult r = ground_state(params, grid, opts);
    r.wave_case = wc;
    return r;
  }
  check_case(params, grid.dim(), wc);
  require_boost_commensurate(grid, params);
  const TildeContext ctx(params, grid);
  DescentSettings settings;
  settings.mean_free = zero_mass_slots(params);
  return run_restarts(ctx, wc, opts, settings);
}

void require_converged(const WaveResult& result, const std::string& what) {
  if (!result.converged) {
    std::ostringstream msg;
    msg.precision(3);
    msg << what << " did not converge: gradient residual " << result.grad_residual
        << " after " << result.iterations << " iterations";
    throw NumericalError(msg.str());
  }
}

PohozaevResiduals pohozaev_check(const Params& params, const TriField& profile) {
  params.validate(profile.grid().dim());
  if (params.speed() != 0.0) throw ValidationError("pohozaev_check requires c = 0");
  const double n = profile.grid().dim();
  const double K = kinetic(profile);
  const double M = weighted_mass(params, profile);
  const double V = plain_cubic(profile);
  const double w = params.omega;
  PohozaevResiduals r;
  r.nehari = rel(K + w * M - 3.0 * V, K);
  r.dilation = rel((n - 2.0) * K / 2.0 + n * w * M / 2.0 - n * V, K);
  r.kinetic = rel(K - n * V / 2.0, K);
  return r;
}

double gn_functional(const Params& params, const TriField& field) {
  const double V = plain_cubic(field);
  if (!(V > 0.0)) throw ValidationError("J needs a positive cubic term");
  return kinetic(field) * std::sqrt(weighted_mass(params, field)) / V;
}

namespace {

struct GnEval {
  double K = 0.0, M = 0.0, V = 0.0, J = 0.0;
  /// log J plus the width penalty.
  double F = 0.0;
  TriField h;  // (K/2) * gradient of F
};

/// Width pin (rho/2) (log(K/M) - log ratio)^2.
struct GnPin {
  double ratio = 2.0;
  double rho = 1.0;
};

GnEval gn_evaluate(const std::array<double, 3>& m, const GnPin& pin, const TriField& f) {
  const Grid& g = f.grid();
  GnEval e;
  e.h = TriField(g);
  std::array<CArray, 3> lap;
  for (int j = 0; j < 3; ++j) {
    CArray coeffs = f[j];
    spectral::forward(g, coeffs);
    e.K += spectral::gradient_norm_sq(g, coeffs);
    coeffs *= (-g.laplacian_symbol()).cast<Complex>();
    spectral::inverse(g, coeffs);
    lap[j] = std::move(coeffs);
    e.M += m[j] * sq(f[j], g) / 2.0;
  }
  e.V = plain_cubic(f);
  if (!(e.V > 0.0) || !(e.K > 0.0)) return e;
  e.J = e.K * std::sqrt(e.M) / e.V;
  const double gap = std::log(e.K / e.M) - std::log(pin.ratio);
  e.F = std::log(e.J) + 0.5 * pin.rho * gap * gap;
  const double cm = e.K / (4.0 * e.M);
  const double cv = e.K / (2.0 * e.V);
  const double pk = pin.rho * gap;
  const double pm = pin.rho * gap * e.K / (2.0 * e.M);
  e.h[0] = (1.0 + pk) * lap[0] + (cm - pm) * m[0] * f[0] - cv * f[2] * f[1].conjugate();
  e.h[1] = (1.0 + pk) * lap[1] + (cm - pm) * m[1] * f[1] - cv * f[2] * f[0].conjugate();
  e.h[2] = (1.0 + pk) * lap[2] + (cm - pm) * m[2] * f[2] - cv * f[0] * f[1];
  return e;
}

}  // namespace

GnResult gn_constant(const Params& params, const Grid& grid, const SolveOptions& opts) {
  params.validate(grid.dim());
  opts.validate();
  if (grid.dim() != 4) throw ValidationError("gn_constant requires dim = 4");
  // Weights of M written as sum_j m_j ||f_j||^2 / 2.
  const std::array<double, 3> m = {2.0 * params.gamma1, 2.0 * params.gamma2, 4.0 * params.gamma3};
  Params flat = params;
  flat.c = Eigen::VectorXd();
  const TildeContext ctx(flat, grid);
  GnPin pin;
  pin.ratio = 2.0 * params.omega;

  std::vector<std::optional<GnResult>> runs(static_cast<std::size_t>(opts.restarts));
  parallel_for(opts.restarts, [&](int r) {
    auto rng = restart_rng(opts.seed, r);
    TriField f = random_initial(ctx, rng);
    for (int j = 0; j < 3; ++j) f[j] = f[j].abs().cast<Complex>();
    GnEval e = gn_evaluate(m, pin, f);
    const double M0 = e.M;
    TriField prev_f = f, prev_h = e.h;
    bool have_prev = false;
    int streak = 0;
    double last_dJ = 1.0;
    GnResult out;
    int it = 0;
    for (; it < opts.max_iters; ++it) {
      const double res = std::sqrt(norm_sq(e.h) / norm_sq(f));
      streak = (res < opts.tol_grad && last_dJ < opts.tol_grad) ? streak + 1 : 0;
      if (streak >= 10) {
        out.converged = true;
        break;
      }
      std::array<RArray, 3> inv;
      for (int j = 0; j < 3; ++j)
        inv[j] = 1.0 / (e.K * m[j] / (4.0 * e.M) - grid.laplacian_symbol());
      auto precondition = [&](const TriField& x) {
        TriField y = x;
        for (int j = 0; j < 3; ++j) {
          spectral::forward(grid, y[j]);
          y[j] *= inv[j].cast<Complex>();
          spectral::inverse(grid, y[j]);
        }
        return y;
      };
      TriField d = precondition(e.h);
      double tau = opts.step_size;
      if (have_prev) {
        const TriField sv = f - prev_f, yv = e.h - prev_h;
        const double sy = inner(sv, yv), yPy = inner(yv, precondition(yv));
        if (sy > 0.0 && yPy > 0.0)
          tau = std::clamp(sy / yPy, 1e-4 * opts.step_size, 1e4 * opts.step_size);
      }
      bool accepted = false;
      TriField trial = f;
      GnEval te;
      for (int bt = 0; bt < 40; ++bt) {
        trial = f;
        for (int j = 0; j < 3; ++j) trial[j] = (trial[j] - tau * d[j]).real().cast<Complex>();
        te = gn_evaluate(m, pin, trial);
        if (te.J > 0.0 && std::isfinite(te.F) && te.F <= e.F + 1e-13 * std::abs(e.F)) {
          accepted = true;
          break;
        }
        tau *= 0.5;
      }
      if (!accepted) break;
      // Fix the mass; J is homogeneous of degree zero.
      const double s = std::sqrt(M0 / te.M);
      trial *= s;
      te = gn_evaluate(m, pin, trial);
      last_dJ = std::abs(te.J - e.J) / e.J;
      prev_f = std::move(f);
      prev_h = std::move(e.h);
      have_prev = true;
      f = std::move(trial);
      e = std::move(te);
    }
    out.iterations = it;
    out.residual = std::sqrt(norm_sq(e.h) / norm_sq(f));
    if (!out.converged) out.converged = out.residual < opts.tol_grad && last_dJ < opts.tol_grad;
    out.alpha = e.J;
    out.C_opt = 1.0 / e.J;
    const double a = e.M / e.V;
    const double b = std::sqrt(2.0 * e.M / e.K);
    TriField scaled(grid.with_half_width(grid.half_width() / b), f[0], f[1], f[2]);
    out.profile = a * std::move(scaled);
    runs[r] = std::move(out);
  });

  int best = 0;
  for (int r = 1; r < opts.restarts; ++r) {
    const bool better = (runs[r]->converged && !runs[best]->converged) ||
                        (runs[r]->converged == runs[best]->converged && runs[r]->alpha < runs[best]->alpha);
    if (better) best = r;
  }
  return std::move(*runs[best]);
}

double mu_estimate(const Params& params, const Grid& grid, const SolveOptions& opts, WaveCase wc) {
  const WaveResult r = params.speed() == 0.0 ? ground_state(params, grid, opts)
                                             : traveling_wave(params, wc, grid, opts);
  if (r.restart_values.empty())
    throw NumericalError("mu_estimate: no restart converged (best residual " +
                         std::to_string(r.grad_residual) + ")");
  return *std::min_element(r.restart_values.begin(), r.restart_values.end());
}

ScalingReport scaling_consistency(const Params& params, const TriField& field) {
  const Grid& g = field.grid();
  params.validate(g.dim());
  if (g.dim() != 4) throw ValidationError("scaling_consistency requires dim = 4");
  const double s = params.speed();
  if (!(s > 0.0)) throw ValidationError("scaling_consistency requires c != 0");

  Params unit = params;
  unit.omega = params.omega / (s * s);
  unit.c = params.velocity(g.dim()) / s;
  const Grid mapped_grid = g.with_half_width(g.half_width() * s);
  TriField mapped(mapped_grid, field[0], field[1], field[2]);
  mapped *= 1.0 / (s * s);

  const FunctionalReport before = tilde_report(params, field);
  const FunctionalReport after = tilde_report(unit, mapped);
  ScalingReport r;
  r.factor_Q = after.Q / before.Q;
  r.factor_V = after.V / before.V;
  r.predicted = std::pow(s, g.dim() - 6.0);
  r.N_original = before.N;
  r.N_mapped = after.N;
  r.mapped = std::move(mapped);
  return r;
}

ProbeResult nonexistence_probe(const Params& params, const Grid& grid, const SolveOptions& opts) {
  params.validate(grid.dim());
  opts.validate();
  if (!params.mass_resonant()) throw ValidationError("probe requires gamma1 + gamma2 = gamma3");
  if (std::abs(params.gamma1 - params.gamma2) > 1e-12)
    throw ValidationError("probe requires gamma1 = gamma2");
  const double s = params.speed();
  const double target = params.gamma1 * s * s / 4.0;
  if (std::abs(params.omega - target) > 1e-12 * std::max(1.0, target))
    throw ValidationError("probe requires omega = gamma1 |c|^2 / 4");

  const TildeContext ctx(params, grid);
  DescentSettings settings;
  settings.mean_free = {true, true, true};
  settings.record_trace = true;
  auto rng = restart_rng(opts.seed, 0);
  DescentOutcome o = nehari_descent(ctx, random_initial(ctx, rng), opts, settings);

  ProbeResult r;
  r.trace_Q = o.trace_Q;
  r.final_Q = o.report.Q;
  for (std::size_t i = 1; i < r.trace_Q.size(); ++i)
    if (r.trace_Q[i] > r.trace_Q[i - 1] * (1.0 + 1e-12)) r.monotone = false;
  const double K = kinetic(o.field);
  const double V = o.report.V;
  r.nehari_residual = rel(K - 3.0 * V, K);
  r.dilation_residual = rel(K - grid.dim() / 2.0 * V, K);
  std::ostringstream verdict;
  verdict.precision(6);
  const double q0 = r.trace_Q.empty() ? 0.0 : r.trace_Q.front();
  if (o.converged) {
    verdict << "torus-limited candidate: Q " << q0 << " -> " << r.final_Q
            << "; dilation identity residual " << r.dilation_residual
            << " rules out a continuum critical point";
  } else {
    verdict << "no convergence: Q " << q0 << " -> " << r.final_Q << " after " << o.iterations
            << " iterations; dilation identity residual " << r.dilation_residual;
  }
  r.verdict = verdict.str();
  r.last = std::move(o.field);
  return r;
}

}  // namespace triwave
