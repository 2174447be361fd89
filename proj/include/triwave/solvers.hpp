#pragma once

#include <string>
#include <vector>

#include "triwave/descent.hpp"

namespace triwave {

struct WaveResult {
  /// Stripped triple (plain triple when c = 0).
  TriField profile;
  /// Tilde action at the profile.
  double action_value = 0.0;
  /// Lowest action over restarts.
  double mu_estimate = 0.0;
  double grad_residual = 0.0;
  WaveCase wave_case = WaveCase::A;
  FunctionalReport report;
  bool converged = false;
  int iterations = 0;
  /// Converged action per restart, in restart order.
  std::vector<double> restart_values;
  /// Relative spread of converged restart values above 1%.
  bool spread_suspicious = false;
};

/// Standing wave at c = 0 with positive components.
WaveResult ground_state(const Params& params, const Grid& grid, const SolveOptions& opts);

/// Critical point of the tilde action for the admissible case `wc`.
/// Falls back to ground_state when c = 0.
WaveResult traveling_wave(const Params& params, WaveCase wc, const Grid& grid,
                          const SolveOptions& opts);

/// Throws NumericalError unless `result` converged.
void require_converged(const WaveResult& result, const std::string& what);

struct PohozaevResiduals {
  /// |K + omega M - 3V| / K.
  double nehari = 0.0;
  /// |(N-2)K/2 + N omega M/2 - N V| / K.
  double dilation = 0.0;
  /// |K - (N/2) V| / K; at dim 4 this is K = 2V.
  double kinetic = 0.0;
};

PohozaevResiduals pohozaev_check(const Params& params, const TriField& profile);

/// K * M^{1/2} / V with V = Re int u v conj(w).
double gn_functional(const Params& params, const TriField& field);

struct GnResult {
  double alpha = 0.0;
  double C_opt = 0.0;
  /// Minimizer rescaled so that K = 2V and M = V.
  TriField profile;
  double residual = 0.0;
  bool converged = false;
  int iterations = 0;
};

/// Minimizes J over positive triples at dim 4.
GnResult gn_constant(const Params& params, const Grid& grid, const SolveOptions& opts);

/// Lowest tilde action on the Nehari manifold over opts.restarts starts.
double mu_estimate(const Params& params, const Grid& grid, const SolveOptions& opts,
                   WaveCase wc = WaveCase::A);

struct ScalingReport {
  double factor_Q = 0.0;
  double factor_V = 0.0;
  /// |c|^{dim-6}, the factor predicted by substitution.
  double predicted = 0.0;
  double N_original = 0.0;
  double N_mapped = 0.0;
  TriField mapped;
};

/// Applies f -> |c|^{-2} f(x/|c|) and compares the tilde functionals at
/// (omega, c) and (omega/|c|^2, c/|c|).
ScalingReport scaling_consistency(const Params& params, const TriField& field);

struct ProbeResult {
  std::vector<double> trace_Q;
  double final_Q = 0.0;
  /// |K - 3V| / K at the last iterate.
  double nehari_residual = 0.0;
  /// |K - (N/2) V| / K at the last iterate.
  double dilation_residual = 0.0;
  bool monotone = true;
  std::string verdict;
  TriField last;
};

/// Descent at mass-resonant zero-mass parameters; records Q per iterate.
ProbeResult nonexistence_probe(const Params& params, const Grid& grid, const SolveOptions& opts);

}  // namespace triwave
