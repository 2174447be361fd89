#pragma once

#include <optional>
#include <string>
#include <vector>

#include "triwave/functionals.hpp"

namespace triwave {

struct EvolveConfig {
  double dt = 1e-3;
  double t_final = 1.0;
  int snapshot_every = 100;
  double blowup_factor = 1e3;
  bool keep_snapshots = true;
  /// Nonzero: the field holds comoving stripped variables for this velocity
  /// and reported invariants refer to the lab-frame solution.
  Eigen::VectorXd frame_velocity;

  void validate() const;
  /// Number of dt steps covering t_final.
  long steps() const;
};

enum class Verdict { completed, blowup_flagged };
std::string verdict_name(Verdict v);

struct Trajectory {
  std::vector<double> times;
  std::vector<TriField> snapshots;
  std::vector<InvariantSet> invariant_series;
  Verdict verdict = Verdict::completed;
  std::optional<TriField> final_state;
  double final_time = 0.0;
};

/// One second-order step: half free flow, nonlinear flow, half free flow.
TriField strang_step(const Params& params, const TriField& field, double dt);

Trajectory evolve(const Params& params, const TriField& field, const EvolveConfig& config);

/// Lab-frame invariants of the solution represented by comoving stripped
/// variables `field` at time t. A zero velocity reduces to invariants().
InvariantSet frame_invariants(const Params& params, const TriField& field,
                              const Eigen::VectorXd& velocity, double t);

/// Maps lab-frame data to comoving stripped variables at t = 0 and back.
TriField to_comoving(const TriField& lab, const Params& params, const Eigen::VectorXd& velocity);
TriField from_comoving(const TriField& comoving, const Params& params,
                       const Eigen::VectorXd& velocity, double t);

/// Largest relative deviation of each invariant from its first sample.
struct DriftStats {
  double M = 0.0, M1 = 0.0, M2 = 0.0, M3 = 0.0, K = 0.0, E = 0.0, P = 0.0;
};
DriftStats drift(const std::vector<InvariantSet>& series);

enum class Region { A_plus, A_minus, outside };
std::string region_name(Region r);

/// S < mu with N >= 0 is A+, S < mu with N < 0 is A-, anything else outside.
Region classify_region(const Params& params, const TriField& field, double mu);
Region classify_values(const FunctionalReport& report, double mu);

/// (sqrt(6 mu) + |c|/2 sqrt(gamma* M0))^2 with gamma* = max(g1, g2, g3/2).
double h1_bound(double mu, double mass0, const Params& params);

enum class ThresholdBranch { A, B, C, D };
char branch_label(ThresholdBranch b) noexcept;

/// A if g3 > g1 + g2, otherwise B, C or D as g1 <, >, = g2.
ThresholdBranch select_branch(const Params& params);

/// Frequency per unit |c|^2 used by `branch`.
double branch_frequency(const Params& params, ThresholdBranch branch);

struct ThresholdConstant {
  ThresholdBranch branch = ThresholdBranch::A;
  double value = 0.0;
  /// Which masses the cap bounds, e.g. "max(|u0|^2, |v0|^2)".
  std::string capped;
};

/// A0, B0, C0 or D0 from mu at unit velocity. Throws ValidationError when the
/// branch denominator is not positive.
ThresholdConstant threshold_constants(const Params& params, double mu_unit,
                                      std::optional<ThresholdBranch> branch = std::nullopt);

/// The mass combination the cap of `branch` bounds.
double capped_mass(const TriField& data, ThresholdBranch branch);

struct ScanRow {
  double speed = 0.0;
  double omega = 0.0;
  double mu = 0.0;
  FunctionalReport report;
  Region region = Region::outside;
};

/// Functionals of the dressed data at the branch frequency, evaluated through
/// the stripped identity so large |c| never needs to be resolved on the grid.
std::vector<ScanRow> oscillation_scan(const TriField& data, const Params& params,
                                      const std::vector<Eigen::VectorXd>& c_list, double mu_unit,
                                      std::optional<ThresholdBranch> branch = std::nullopt);

}  // namespace triwave
