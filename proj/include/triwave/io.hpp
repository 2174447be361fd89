#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "triwave/descent.hpp"
#include "triwave/evolution.hpp"

namespace triwave {

struct GridConfig {
  int dim = 1;
  int n_per_dim = 256;
  double half_width = 16.0;
};

/// Initial data: Gaussians with per-component amplitudes, or a snapshot.
struct DataConfig {
  std::string kind = "gaussian";
  std::string path;
  double amp_u = 1.0;
  double amp_v = 0.8;
  double amp_w = 0.6;
  double width = 1.0;
  Eigen::VectorXd center;
  Eigen::VectorXd momentum;
};

struct ScanConfig {
  std::vector<double> speeds{2.0, 4.0, 8.0, 16.0};
  Eigen::VectorXd direction;
  /// Non-positive: estimate it from [params] and [solver].
  double mu_unit = 0.0;
  std::string branch = "auto";
};

/// Every block with its defaults; the INI sections carry the same names.
struct RunConfig {
  GridConfig grid;
  Params params;
  SolveOptions solver;
  std::string wave_case = "A";
  EvolveConfig evolve;
  DataConfig data;
  ScanConfig scan;
};

/// Parses `[section]` / `key = value` text. Unknown keys, malformed numbers
/// and physical violations raise ValidationError naming the field.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);
std::string serialize_config(const RunConfig& cfg);
void validate_config(const RunConfig& cfg);

/// %.17g formatting.
std::string format_double(double x);

Grid build_grid(const RunConfig& cfg);
TriField build_data(const RunConfig& cfg, const Grid& grid);

struct Snapshot {
  TriField field;
  Params params;
};

void write_snapshot(const std::string& path, const TriField& field, const Params& params);
Snapshot read_snapshot(const std::string& path);

/// CSV `t,M,M1,M2,M3,K,E,P_1..P_dim,verdict`.
void write_series(const std::string& path, const Trajectory& traj, int dim);
void write_series(std::ostream& out, const Trajectory& traj, int dim);

struct SeriesTable {
  std::vector<double> times;
  std::vector<InvariantSet> rows;
  std::vector<std::string> verdicts;
};
SeriesTable read_series(const std::string& path);

/// Runs the quick invariant self-test suite; prints PASS/FAIL per property.
bool run_self_check(const RunConfig& cfg, std::ostream& out);

}  // namespace triwave
