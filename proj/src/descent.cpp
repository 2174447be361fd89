#include "triwave/descent.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <string>
#include <thread>

#include "triwave/errors.hpp"

namespace triwave {

void SolveOptions::validate() const {
  if (max_iters < 1) throw ValidationError("solver.max_iters must be >= 1");
  if (!(step_size > 0.0)) throw ValidationError("solver.step_size must be positive");
  if (!(tol_grad > 0.0)) throw ValidationError("solver.tol_grad must be positive");
  if (restarts < 1) throw ValidationError("solver.restarts must be >= 1");
}

std::array<bool, 3> zero_mass_slots(const Params& params) {
  const auto a = mass_coefficients(params);
  const double scale = std::max({1.0, params.omega * params.gamma3, std::abs(a[2])});
  return {std::abs(a[0]) <= 1e-12 * scale, std::abs(a[1]) <= 1e-12 * scale,
          std::abs(a[2]) <= 1e-12 * scale};
}

void remove_means(TriField& field, const std::array<bool, 3>& mean_free) {
  for (int j = 0; j < 3; ++j)
    if (mean_free[j]) field[j] -= field[j].mean();
}

double gradient_residual(const TriField& field, const TriField& gradient,
                         const std::array<bool, 3>& mean_free) {
  TriField g = gradient;
  remove_means(g, mean_free);
  const double nf = norm_sq(field);
  if (nf == 0.0) return 0.0;
  return std::sqrt(norm_sq(g) / nf);
}

namespace {

/// Pieces of the tilde gradient: G(lambda f) = lambda L f - lambda^2 B(f).
struct Split {
  TriField Lf;
  TriField Bf;
  double Q = 0.0;
  double V = 0.0;
};

Split evaluate_split(const TildeContext& ctx, const TriField& f) {
  const Grid& g = f.grid();
  Split s;
  s.Lf = TriField(g);
  s.Bf = TriField(g);
  double K = 0.0, mass_part = 0.0;
  for (int j = 0; j < 3; ++j) {
    CArray coeffs = f[j];
    spectral::forward(g, coeffs);
    K += spectral::gradient_norm_sq(g, coeffs);
    mass_part += ctx.a[j] * f[j].abs2().sum() * g.cell_volume();
    coeffs *= (-g.laplacian_symbol()).cast<Complex>();
    spectral::inverse(g, coeffs);
    s.Lf[j] = coeffs + ctx.a[j] * f[j];
  }
  const bool weighted = ctx.weight.size() != 0;
  if (weighted) {
    const CArray wc = ctx.weight.conjugate();
    s.Bf[0] = wc * f[2] * f[1].conjugate();
    s.Bf[1] = wc * f[2] * f[0].conjugate();
    s.Bf[2] = ctx.weight * f[0] * f[1];
  } else {
    s.Bf[0] = f[2] * f[1].conjugate();
    s.Bf[1] = f[2] * f[0].conjugate();
    s.Bf[2] = f[0] * f[1];
  }
  s.Q = K / 2.0 + mass_part / 2.0;
  s.V = (s.Bf[2] * f[2].conjugate()).real().sum() * g.cell_volume();
  return s;
}

struct Preconditioner {
  std::array<RArray, 3> inv_symbol;

  Preconditioner(const TildeContext& ctx) {
    const double floor = std::pow(ctx.grid.wavenumber_unit(), 2);
    for (int j = 0; j < 3; ++j) {
      const double sigma = std::max(ctx.a[j], floor);
      inv_symbol[j] = 1.0 / (sigma - ctx.grid.laplacian_symbol());
    }
  }

  TriField apply(const TriField& G) const {
    TriField out = G;
    for (int j = 0; j < 3; ++j) {
      spectral::forward(G.grid(), out[j]);
      out[j] *= inv_symbol[j].cast<Complex>();
      spectral::inverse(G.grid(), out[j]);
    }
    return out;
  }
};

void take_moduli(TriField& f) {
  for (int j = 0; j < 3; ++j) f[j] = f[j].abs().cast<Complex>();
}

void take_real(TriField& f) {
  for (int j = 0; j < 3; ++j) f[j] = f[j].real().cast<Complex>();
}

/// Projects onto the Nehari manifold in place; false when V <= 0 or Q <= 0.
bool project(TriField& f, Split& s) {
  if (!(s.V > 0.0) || !(s.Q > 0.0) || !std::isfinite(s.Q) || !std::isfinite(s.V))
    return false;
  const double lam = 2.0 * s.Q / (3.0 * s.V);
  f *= lam;
  s.Lf *= lam;
  s.Bf *= lam * lam;
  s.Q *= lam * lam;
  s.V *= lam * lam * lam;
  return true;
}

TriField gradient_of(const Split& s, const std::array<bool, 3>& mean_free) {
  TriField G = s.Lf;
  G -= s.Bf;
  remove_means(G, mean_free);
  return G;
}

}  // namespace

DescentOutcome nehari_descent(const TildeContext& ctx, TriField init,
                              const SolveOptions& opts, const DescentSettings& settings) {
  opts.validate();
  const auto& mf = settings.mean_free;
  TriField f = std::move(init);
  if (settings.positive) take_moduli(f);
  remove_means(f, mf);
  if (!settings.positive) align_cubic(ctx, f);
  Split s = evaluate_split(ctx, f);
  if (!project(f, s))
    throw ValidationError("descent start has no positive cubic term; Nehari projection undefined");

  const Preconditioner prec(ctx);
  TriField G = gradient_of(s, mf);
  double S = s.Q - s.V;

  DescentOutcome out{f, {}, 0.0, 0, false, {}};
  if (settings.record_trace) out.trace_Q.push_back(s.Q);

  int streak = 0;
  double last_dS = 1.0;
  TriField prev_f = f, prev_G = G;
  bool have_prev = false;
  int it = 0;
  for (; it < opts.max_iters; ++it) {
    const double res = gradient_residual(f, G, mf);
    streak = (res < opts.tol_grad && last_dS < opts.tol_grad) ? streak + 1 : 0;
    if (streak >= 10) {
      out.converged = true;
      break;
    }
    TriField d = prec.apply(G);
    remove_means(d, mf);
    d *= -1.0;

    double tau = opts.step_size;
    if (have_prev) {
      TriField sv = f - prev_f;
      TriField yv = G - prev_G;
      const double sy = inner(sv, yv);
      const double yPy = inner(yv, prec.apply(yv));
      if (sy > 0.0 && yPy > 0.0) tau = std::clamp(sy / yPy, 1e-4 * opts.step_size, 1e4 * opts.step_size);
    }

    bool accepted = false;
    TriField trial = f;
    Split ts;
    for (int bt = 0; bt < 40; ++bt) {
      trial = f;
      for (int j = 0; j < 3; ++j) trial[j] += tau * d[j];
      if (settings.positive) take_real(trial);
      remove_means(trial, mf);
      ts = evaluate_split(ctx, trial);
      if (project(trial, ts) && ts.Q - ts.V <= S + 1e-13 * std::abs(S)) {
        accepted = true;
        break;
      }
      tau *= 0.5;
    }
    if (!accepted) break;

    const double S_new = ts.Q - ts.V;
    last_dS = std::abs(S_new - S) / std::max(std::abs(S), 1e-300);
    prev_f = std::move(f);
    prev_G = std::move(G);
    have_prev = true;
    f = std::move(trial);
    s = std::move(ts);
    G = gradient_of(s, mf);
    S = S_new;
    if (settings.record_trace) out.trace_Q.push_back(s.Q);
  }

  out.iterations = it;
  out.residual = gradient_residual(f, G, mf);
  if (!out.converged) out.converged = out.residual < opts.tol_grad && last_dS < opts.tol_grad;
  out.report = FunctionalReport{s.Q - s.V, s.Q, s.V, 2.0 * s.Q - 3.0 * s.V, true};
  out.field = std::move(f);
  return out;
}

TriField random_initial(const TildeContext& ctx, std::mt19937_64& rng) {
  const Grid& g = ctx.grid;
  const int dim = g.dim();
  const double L = g.half_width();
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> lattice(-2, 2);

  Eigen::VectorXd center(dim);
  for (int a = 0; a < dim; ++a) center[a] = (unit(rng) - 0.5) * L / 2.0;
  const Eigen::VectorXd c = ctx.params.velocity(dim);
  const bool moving = c.squaredNorm() > 0.0;

  TriField f(g);
  for (int j = 0; j < 3; ++j) {
    const double width = L * (0.08 + 0.08 * unit(rng));
    Eigen::VectorXd cj = center;
    for (int a = 0; a < dim; ++a) cj[a] += (unit(rng) - 0.5) * 0.2 * width;
    Eigen::VectorXd k;
    if (moving) {
      k.resize(dim);
      for (int a = 0; a < dim; ++a) k[a] = lattice(rng) * g.wavenumber_unit();
    }
    const Complex amp = std::polar(0.5 + unit(rng),
                                   moving ? 2.0 * std::numbers::pi * unit(rng) : 0.0);
    f[j] = gaussian(g, amp, cj, width, k).values();
  }
  align_cubic(ctx, f);
  return f;
}

void align_cubic(const TildeContext& ctx, TriField& f) {
  CArray prod = f[0] * f[1] * f[2].conjugate();
  if (ctx.weight.size() != 0) prod *= ctx.weight;
  const Complex z = prod.sum();
  if (std::abs(z) > 0.0) f[2] *= z / std::abs(z);
}

int worker_count() {
  int n = static_cast<int>(std::thread::hardware_concurrency());
  if (const char* env = std::getenv("TRIWAVE_THREADS")) {
    const int cap = std::atoi(env);
    if (cap >= 1) n = cap;
  }
  return std::max(1, n);
}

void parallel_for(int count, const std::function<void(int)>& fn) {
  const int workers = std::min(worker_count(), count);
  if (workers <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(count));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (int i = w; i < count; i += workers) {
        try {
          fn(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace triwave
