#pragma once

#include <array>
#include <string>

#include "triwave/state.hpp"

namespace triwave {

struct FunctionalReport {
  double S = 0.0;
  double Q = 0.0;
  double V = 0.0;
  double N = 0.0;
  bool tilde = false;
};

/// Admissible parameter families for traveling waves.
enum class WaveCase { A, B, C, D, E };

char case_label(WaveCase wc) noexcept;
/// Accepts "A".."E" (case-insensitive).
WaveCase parse_case(const std::string& text);

/// Checks omega, the gamma ordering and the dimension against `wc`.
/// Throws ValidationError naming the violated condition.
void check_case(const Params& params, int dim, WaveCase wc, double tol = 1e-10);

/// The frequency each boundary case pins omega to (case A returns the
/// threshold that omega must exceed).
double case_frequency(const Params& params, WaveCase wc);

/// Quadratic-form coefficients gamma_j omega - gamma_j^2 |c|^2 / 4 with the
/// w slot doubled in omega: (a1, a2, a3).
std::array<double, 3> mass_coefficients(const Params& params);

/// Phase (gamma1 + gamma2 - gamma3) c.x / 2 at every grid point.
RArray weight_phase(const Grid& grid, const Params& params);

FunctionalReport report(const Params& params, const TriField& field);
FunctionalReport tilde_report(const Params& params, const TriField& field);

/// 2Q / (3V). Throws ValidationError when V <= 0 or Q <= 0.
double nehari_scale(double Q, double V);

struct NehariProjection {
  TriField field;
  double lambda0;
};

/// Scales the stripped triple onto the Nehari manifold of the tilde action.
NehariProjection nehari_project(const Params& params, const TriField& field);

/// L2 representative of the first variation of the tilde action.
TriField action_gradient(const Params& params, const TriField& field);

/// L2 representative of the first variation of the plain action.
TriField plain_action_gradient(const Params& params, const TriField& field);

/// Precomputed coefficients and oscillatory weight for repeated tilde
/// evaluations on one grid.
struct TildeContext {
  TildeContext(const Params& params, const Grid& grid);

  Params params;
  Grid grid;
  std::array<double, 3> a;
  /// exp(i theta); empty when the phase vanishes identically.
  CArray weight;
};

/// Tilde report, plus the gradient when `gradient` is non-null.
FunctionalReport tilde_evaluate(const TildeContext& ctx, const TriField& field,
                                TriField* gradient = nullptr);

}  // namespace triwave
