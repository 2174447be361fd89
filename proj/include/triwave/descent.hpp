#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "triwave/functionals.hpp"

namespace triwave {

struct SolveOptions {
  int max_iters = 4000;
  /// Fallback step when the Barzilai-Borwein estimate is unusable.
  double step_size = 0.5;
  double tol_grad = 1e-6;
  int restarts = 5;
  std::uint64_t seed = 1;

  void validate() const;
};

struct DescentSettings {
  /// Start from the moduli and keep every iterate real.
  bool positive = false;
  /// Components whose spatial mean is held at zero.
  std::array<bool, 3> mean_free{false, false, false};
  bool record_trace = false;
};

struct DescentOutcome {
  TriField field;
  FunctionalReport report;
  double residual = 0.0;
  int iterations = 0;
  bool converged = false;
  /// Q per accepted iterate (when recorded).
  std::vector<double> trace_Q;
};

/// Preconditioned, Nehari-projected descent on the tilde action starting
/// from `init`. Throws ValidationError when the start has no positive cubic
/// term.
DescentOutcome nehari_descent(const TildeContext& ctx, TriField init,
                              const SolveOptions& opts, const DescentSettings& settings);

/// Zero-mass components of the tilde quadratic form.
std::array<bool, 3> zero_mass_slots(const Params& params);

/// Random Gaussian triple; a random lattice phase is added when c != 0.
TriField random_initial(const TildeContext& ctx, std::mt19937_64& rng);

/// Rotates the w gauge so the weighted cubic term is non-negative.
void align_cubic(const TildeContext& ctx, TriField& field);

/// Relative L2 norm of the gradient restricted to the admissible directions.
double gradient_residual(const TriField& field, const TriField& gradient,
                         const std::array<bool, 3>& mean_free);

/// Removes the spatial mean of the flagged components.
void remove_means(TriField& field, const std::array<bool, 3>& mean_free);

/// Worker count from TRIWAVE_THREADS (default: hardware concurrency).
int worker_count();

/// Runs fn(i) for i in [0, count) on up to worker_count() threads.
void parallel_for(int count, const std::function<void(int)>& fn);

}  // namespace triwave
