#include "triwave/functionals.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "triwave/errors.hpp"

namespace triwave {

char case_label(WaveCase wc) noexcept { return static_cast<char>('A' + static_cast<int>(wc)); }

WaveCase parse_case(const std::string& text) {
  if (text.size() == 1) {
    const char ch = static_cast<char>(std::toupper(static_cast<unsigned char>(text[0])));
    if (ch >= 'A' && ch <= 'E') return static_cast<WaveCase>(ch - 'A');
  }
  throw ValidationError("case must be one of A, B, C, D, E; got '" + text + "'");
}

double case_frequency(const Params& params, WaveCase wc) {
  const double c2 = params.speed() * params.speed();
  const double g1 = params.gamma1, g2 = params.gamma2, g3 = params.gamma3;
  switch (wc) {
    case WaveCase::A: return std::max({g1 * c2 / 4.0, g2 * c2 / 4.0, g3 * c2 / 8.0});
    case WaveCase::B:
    case WaveCase::C: return g3 * c2 / 8.0;
    case WaveCase::D:
    case WaveCase::E: return g2 * c2 / 4.0;
  }
  return 0.0;
}

void check_case(const Params& params, int dim, WaveCase wc, double tol) {
  params.validate(dim);
  const double g1 = params.gamma1, g2 = params.gamma2, g3 = params.gamma3;
  const double w = params.omega;
  const double target = case_frequency(params, wc);
  const double scale = std::max(1.0, std::abs(target));
  const std::string label = std::string("case ") + case_label(wc) + ": ";
  auto fail = [&](const std::string& why) { throw ValidationError(label + why); };
  auto near = [&](double a, double b) { return std::abs(a - b) <= tol * std::max(1.0, std::abs(b)); };

  if (wc == WaveCase::A) {
    if (!(w > target)) fail("requires omega > max(g1|c|^2/4, g2|c|^2/4, g3|c|^2/8)");
    return;
  }
  if (std::abs(w - target) > tol * scale) {
    fail(wc == WaveCase::B || wc == WaveCase::C ? "requires omega = g3|c|^2/8"
                                                 : "requires omega = g2|c|^2/4");
  }
  switch (wc) {
    case WaveCase::B:
      if (dim < 3) fail("requires dim >= 3");
      if (!(g1 <= g2 && g2 < g3 / 2.0)) fail("requires g1 <= g2 < g3/2");
      break;
    case WaveCase::C:
      if (dim < 4) fail("requires dim >= 4");
      if (!(g1 < g2 && near(g2, g3 / 2.0))) fail("requires g1 < g2 = g3/2");
      break;
    case WaveCase::D:
      if (dim < 3) fail("requires dim >= 3");
      if (!(std::max(g1, g3 / 2.0) < g2)) fail("requires max(g1, g3/2) < g2");
      break;
    case WaveCase::E:
      if (dim < 4) fail("requires dim >= 4");
      if (!(g3 / 2.0 < g1 && near(g1, g2))) fail("requires g3/2 < g1 = g2");
      break;
    default:
      break;
  }
}

std::array<double, 3> mass_coefficients(const Params& params) {
  const double c2 = params.speed() * params.speed();
  const double w = params.omega;
  const double g1 = params.gamma1, g2 = params.gamma2, g3 = params.gamma3;
  return {g1 * w - g1 * g1 * c2 / 4.0, g2 * w - g2 * g2 * c2 / 4.0,
          2.0 * g3 * w - g3 * g3 * c2 / 4.0};
}

RArray weight_phase(const Grid& grid, const Params& params) {
  const Eigen::VectorXd c = params.velocity(grid.dim());
  RArray theta = RArray::Zero(grid.size());
  const double d = params.resonance_defect() / 2.0;
  for (int a = 0; a < grid.dim(); ++a)
    if (c[a] != 0.0) theta += grid.coordinates(a) * (d * c[a]);
  return theta;
}

namespace {

double cubic(const TriField& f, const CArray* weight) {
  CArray prod = f[0] * f[1] * f[2].conjugate();
  if (weight != nullptr && weight->size() != 0) prod *= *weight;
  return prod.real().sum() * f.grid().cell_volume();
}

double squared_norm(const CArray& a, const Grid& g) { return a.abs2().sum() * g.cell_volume(); }

}  // namespace

FunctionalReport report(const Params& params, const TriField& field) {
  const InvariantSet inv = invariants(params, field);
  const Grid& g = field.grid();
  const Eigen::VectorXd c = params.velocity(g.dim());
  FunctionalReport r;
  r.Q = inv.K / 2.0 + params.omega * params.gamma1 * squared_norm(field[0], g) / 2.0 +
        params.omega * params.gamma2 * squared_norm(field[1], g) / 2.0 +
        params.gamma3 * params.omega * squared_norm(field[2], g) + c.dot(inv.P) / 2.0;
  r.V = cubic(field, nullptr);
  r.S = r.Q - r.V;
  r.N = 2.0 * r.Q - 3.0 * r.V;
  return r;
}

TildeContext::TildeContext(const Params& p, const Grid& g)
    : params(p), grid(g), a(mass_coefficients(p)) {
  params.validate(grid.dim());
  const Eigen::VectorXd c = params.velocity(grid.dim());
  if (params.resonance_defect() != 0.0 && c.squaredNorm() > 0.0) {
    require_weight_commensurate(grid, params);
    weight = (weight_phase(grid, params).cast<Complex>() * Complex(0.0, 1.0)).exp();
  }
}

FunctionalReport tilde_evaluate(const TildeContext& ctx, const TriField& field,
                                TriField* gradient) {
  const Grid& g = field.grid();
  if (!(g == ctx.grid)) throw ValidationError("tilde evaluation: grid mismatch");
  const bool weighted = ctx.weight.size() != 0;
  FunctionalReport r;
  r.tilde = true;
  double K = 0.0, mass_part = 0.0;
  for (int j = 0; j < 3; ++j) {
    CArray coeffs = field[j];
    spectral::forward(g, coeffs);
    K += spectral::gradient_norm_sq(g, coeffs);
    mass_part += ctx.a[j] * squared_norm(field[j], g);
    if (gradient != nullptr) {
      coeffs *= (-g.laplacian_symbol()).cast<Complex>();
      spectral::inverse(g, coeffs);
      (*gradient)[j] = std::move(coeffs);
    }
  }
  r.Q = K / 2.0 + mass_part / 2.0;
  r.V = cubic(field, weighted ? &ctx.weight : nullptr);
  r.S = r.Q - r.V;
  r.N = 2.0 * r.Q - 3.0 * r.V;
  if (gradient != nullptr) {
    TriField& G = *gradient;
    const CArray& u = field[0];
    const CArray& v = field[1];
    const CArray& w = field[2];
    if (weighted) {
      const CArray wc = ctx.weight.conjugate();
      G[0] += ctx.a[0] * u - wc * w * v.conjugate();
      G[1] += ctx.a[1] * v - wc * w * u.conjugate();
      G[2] += ctx.a[2] * w - ctx.weight * u * v;
    } else {
      G[0] += ctx.a[0] * u - w * v.conjugate();
      G[1] += ctx.a[1] * v - w * u.conjugate();
      G[2] += ctx.a[2] * w - u * v;
    }
  }
  return r;
}

FunctionalReport tilde_report(const Params& params, const TriField& field) {
  return tilde_evaluate(TildeContext(params, field.grid()), field);
}

TriField action_gradient(const Params& params, const TriField& field) {
  TriField G(field.grid());
  tilde_evaluate(TildeContext(params, field.grid()), field, &G);
  return G;
}

TriField plain_action_gradient(const Params& params, const TriField& field) {
  const Grid& g = field.grid();
  params.validate(g.dim());
  const Eigen::VectorXd c = params.velocity(g.dim());
  const std::array<double, 3> mass = {params.gamma1 * params.omega,
                                      params.gamma2 * params.omega,
                                      2.0 * params.gamma3 * params.omega};
  TriField G(g);
  for (int j = 0; j < 3; ++j) {
    CArray coeffs = field[j];
    spectral::forward(g, coeffs);
    // -Lap + i gamma c.grad  ->  |k|^2 - gamma c.kappa
    RArray symbol = -g.laplacian_symbol();
    for (int a = 0; a < g.dim(); ++a)
      if (c[a] != 0.0) symbol -= params.gamma(j) * c[a] * g.kappa(a);
    coeffs *= symbol.cast<Complex>();
    spectral::inverse(g, coeffs);
    G[j] = coeffs + mass[j] * field[j];
  }
  G[0] -= field[2] * field[1].conjugate();
  G[1] -= field[2] * field[0].conjugate();
  G[2] -= field[0] * field[1];
  return G;
}

double nehari_scale(double Q, double V) {
  if (!(V > 0.0))
    throw ValidationError("Nehari projection needs a positive cubic term, got V = " +
                          std::to_string(V));
  if (!(Q > 0.0))
    throw ValidationError("Nehari projection needs a positive quadratic term, got Q = " +
                          std::to_string(Q));
  return 2.0 * Q / (3.0 * V);
}

NehariProjection nehari_project(const Params& params, const TriField& field) {
  const FunctionalReport r = tilde_report(params, field);
  const double lambda0 = nehari_scale(r.Q, r.V);
  TriField out = field;
  out *= lambda0;
  return {std::move(out), lambda0};
}

}  // namespace triwave
