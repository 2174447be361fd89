#include "triwave/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "triwave/errors.hpp"

namespace triwave {

void EvolveConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ValidationError("evolve.dt must be positive");
  if (!(t_final >= dt)) throw ValidationError("evolve.t_final must be >= evolve.dt");
  if (snapshot_every < 1) throw ValidationError("evolve.snapshot_every must be >= 1");
  if (!(blowup_factor > 1.0)) throw ValidationError("evolve.blowup_factor must exceed 1");
}

long EvolveConfig::steps() const { return static_cast<long>(std::floor(t_final / dt + 1e-9)); }

std::string verdict_name(Verdict v) {
  return v == Verdict::completed ? "completed" : "blowup_flagged";
}

namespace {

const Complex I(0.0, 1.0);

class Stepper {
 public:
  Stepper(const Params& params, const Grid& grid, double dt, const Eigen::VectorXd& frame)
      : grid_(grid), dt_(dt), gamma_(params.gammas()) {
    for (int j = 0; j < 3; ++j) {
      const RArray phase = grid.laplacian_symbol() * (dt / gamma_[j]);
      full_[j] = (phase.cast<Complex>() * I).exp();
      half_[j] = (phase.cast<Complex>() * (0.5 * I)).exp();
    }
    Eigen::VectorXd c = Eigen::VectorXd::Zero(grid.dim());
    for (Index a = 0; a < std::min<Index>(grid.dim(), frame.size()); ++a) c[a] = frame[a];
    const double D = params.resonance_defect();
    if (D != 0.0 && c.squaredNorm() > 0.0) {
      Params moving = params;
      moving.c = c;
      require_weight_commensurate(grid, moving);
      weight_ = (weight_phase(grid, moving).cast<Complex>() * I).exp();
      rate_ = D * c.squaredNorm() / 4.0;
    }
  }

  void free(TriField& f, bool half) const {
    for (int j = 0; j < 3; ++j) {
      spectral::forward(grid_, f[j]);
      f[j] *= half ? half_[j] : full_[j];
      spectral::inverse(grid_, f[j]);
    }
  }

  /// Classical RK4 for u' = (i/g1) e^{-i Theta} w conj(v) and companions.
  void nonlinear(TriField& f, double t) const {
    const double h = dt_;
    std::array<CArray, 3> k1, k2, k3, k4, tmp;
    rhs(f[0], f[1], f[2], t, k1);
    for (int j = 0; j < 3; ++j) tmp[j] = f[j] + (h / 2.0) * k1[j];
    rhs(tmp[0], tmp[1], tmp[2], t + h / 2.0, k2);
    for (int j = 0; j < 3; ++j) tmp[j] = f[j] + (h / 2.0) * k2[j];
    rhs(tmp[0], tmp[1], tmp[2], t + h / 2.0, k3);
    for (int j = 0; j < 3; ++j) tmp[j] = f[j] + h * k3[j];
    rhs(tmp[0], tmp[1], tmp[2], t + h, k4);
    for (int j = 0; j < 3; ++j) f[j] += (h / 6.0) * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
  }

 private:
  void rhs(const CArray& u, const CArray& v, const CArray& w, double t,
           std::array<CArray, 3>& out) const {
    if (weight_.size() == 0) {
      out[0] = (I / gamma_[0]) * w * v.conjugate();
      out[1] = (I / gamma_[1]) * w * u.conjugate();
      out[2] = (I / gamma_[2]) * u * v;
      return;
    }
    const CArray e = weight_ * std::polar(1.0, rate_ * t);
    out[0] = (I / gamma_[0]) * e.conjugate() * w * v.conjugate();
    out[1] = (I / gamma_[1]) * e.conjugate() * w * u.conjugate();
    out[2] = (I / gamma_[2]) * e * u * v;
  }

  Grid grid_;
  double dt_;
  std::array<double, 3> gamma_;
  std::array<CArray, 3> full_, half_;
  CArray weight_;
  double rate_ = 0.0;
};

bool is_moving(const Eigen::VectorXd& v) { return v.size() > 0 && v.squaredNorm() > 0.0; }

}  // namespace

TriField strang_step(const Params& params, const TriField& field, double dt) {
  params.validate(field.grid().dim());
  if (!(dt > 0.0)) throw ValidationError("dt must be positive");
  const Stepper st(params, field.grid(), dt, Eigen::VectorXd());
  TriField f = field;
  st.free(f, true);
  st.nonlinear(f, 0.0);
  st.free(f, true);
  return f;
}

InvariantSet frame_invariants(const Params& params, const TriField& field,
                              const Eigen::VectorXd& velocity, double t) {
  if (!is_moving(velocity)) return invariants(params, field);
  const Grid& g = field.grid();
  params.validate(g.dim());
  Eigen::VectorXd c = Eigen::VectorXd::Zero(g.dim());
  for (Index a = 0; a < std::min<Index>(g.dim(), velocity.size()); ++a) c[a] = velocity[a];
  const double dv = g.cell_volume();

  InvariantSet out;
  out.P = Eigen::VectorXd::Zero(g.dim());
  std::array<double, 3> mass{};
  for (int j = 0; j < 3; ++j) {
    mass[j] = field[j].abs2().sum() * dv;
    CArray coeffs = field[j];
    spectral::forward(g, coeffs);
    const Eigen::VectorXd offset = params.gamma(j) * c / 2.0;
    out.K += spectral::gradient_norm_sq(g, coeffs, &offset);
    for (int a = 0; a < g.dim(); ++a)
      out.P[a] -= params.gamma(j) * spectral::first_moment(g, a, coeffs);
    out.P -= params.gamma(j) * params.gamma(j) * c / 2.0 * mass[j];
  }
  const double g1 = params.gamma1, g2 = params.gamma2, g3 = params.gamma3;
  out.M = g1 * mass[0] + g2 * mass[1] + 2.0 * g3 * mass[2];
  out.M1 = g1 * mass[0] + g3 * mass[2];
  out.M2 = g2 * mass[1] + g3 * mass[2];
  out.M3 = g1 * mass[0] - g2 * mass[1];

  CArray prod = field[0] * field[1] * field[2].conjugate();
  const double D = params.resonance_defect();
  if (D != 0.0) {
    Params moving = params;
    moving.c = c;
    require_weight_commensurate(g, moving);
    prod *= (weight_phase(g, moving).cast<Complex>() * I).exp() *
            std::polar(1.0, D * c.squaredNorm() * t / 4.0);
  }
  out.E = 0.5 * out.K - prod.real().sum() * dv;
  return out;
}

TriField to_comoving(const TriField& lab, const Params& params, const Eigen::VectorXd& velocity) {
  Params moving = params;
  moving.c = velocity;
  return phase_map(lab, moving, PhaseDirection::strip);
}

TriField from_comoving(const TriField& comoving, const Params& params,
                       const Eigen::VectorXd& velocity, double t) {
  Params moving = params;
  moving.c = velocity;
  return galilean_boost(comoving, moving, t);
}

Trajectory evolve(const Params& params, const TriField& field, const EvolveConfig& config) {
  config.validate();
  const Grid& g = field.grid();
  params.validate(g.dim());
  const Stepper st(params, g, config.dt, config.frame_velocity);
  Trajectory traj;
  TriField f = field;

  auto record = [&](double t) {
    traj.times.push_back(t);
    traj.invariant_series.push_back(frame_invariants(params, f, config.frame_velocity, t));
    if (config.keep_snapshots) traj.snapshots.push_back(f);
  };

  record(0.0);
  const double K0 = traj.invariant_series.front().K;
  const long nsteps = config.steps();
  const long se = config.snapshot_every;
  long step = 0;
  double t = 0.0;
  while (step < nsteps) {
    const long block = std::min(se - step % se, nsteps - step);
    st.free(f, true);
    for (long i = 0; i < block; ++i) {
      st.nonlinear(f, (step + i) * config.dt);
      if (i + 1 < block) st.free(f, false);
    }
    st.free(f, true);
    step += block;
    t = step * config.dt;
    if (!f.all_finite()) {
      traj.verdict = Verdict::blowup_flagged;
      record(t);
      break;
    }
    if (step % se == 0) {
      record(t);
      const double K = traj.invariant_series.back().K;
      if (K0 > 0.0 && K > config.blowup_factor * config.blowup_factor * K0) {
        traj.verdict = Verdict::blowup_flagged;
        break;
      }
    }
  }
  traj.final_time = t;
  traj.final_state = std::move(f);
  return traj;
}

DriftStats drift(const std::vector<InvariantSet>& series) {
  DriftStats d;
  if (series.empty()) return d;
  const InvariantSet& s0 = series.front();
  const double tiny = std::numeric_limits<double>::min();
  const double mass_scale = std::max(std::abs(s0.M), tiny);
  const double energy_scale = std::max(s0.K, mass_scale);
  const double momentum_scale = std::sqrt(energy_scale * mass_scale);
  // Relative to the first sample, floored at 1e-6 of the natural scale.
  auto rel = [](double dx, double x0, double scale) { return dx / std::max(std::abs(x0), 1e-6 * scale); };
  const double P0 = s0.P.size() ? s0.P.norm() : 0.0;
  for (const auto& s : series) {
    d.M = std::max(d.M, rel(std::abs(s.M - s0.M), s0.M, mass_scale));
    d.M1 = std::max(d.M1, rel(std::abs(s.M1 - s0.M1), s0.M1, mass_scale));
    d.M2 = std::max(d.M2, rel(std::abs(s.M2 - s0.M2), s0.M2, mass_scale));
    d.M3 = std::max(d.M3, rel(std::abs(s.M3 - s0.M3), s0.M3, mass_scale));
    d.K = std::max(d.K, rel(std::abs(s.K - s0.K), s0.K, energy_scale));
    d.E = std::max(d.E, rel(std::abs(s.E - s0.E), s0.E, energy_scale));
    const double dp = s.P.size() ? (s.P - s0.P).norm() : 0.0;
    d.P = std::max(d.P, rel(dp, P0, momentum_scale));
  }
  return d;
}

std::string region_name(Region r) {
  switch (r) {
    case Region::A_plus: return "A_plus";
    case Region::A_minus: return "A_minus";
    default: return "outside";
  }
}

Region classify_values(const FunctionalReport& rep, double mu) {
  if (!(rep.S < mu)) return Region::outside;
  return rep.N >= 0.0 ? Region::A_plus : Region::A_minus;
}

Region classify_region(const Params& params, const TriField& field, double mu) {
  return classify_values(report(params, field), mu);
}

double h1_bound(double mu, double mass0, const Params& params) {
  if (!(mu >= 0.0)) throw ValidationError("h1_bound needs mu >= 0");
  if (!(mass0 >= 0.0)) throw ValidationError("h1_bound needs a non-negative mass");
  const double gstar = std::max({params.gamma1, params.gamma2, params.gamma3 / 2.0});
  const double root = std::sqrt(6.0 * mu) + params.speed() / 2.0 * std::sqrt(gstar * mass0);
  return root * root;
}

char branch_label(ThresholdBranch b) noexcept { return static_cast<char>('A' + static_cast<int>(b)); }

ThresholdBranch select_branch(const Params& params) {
  const double g1 = params.gamma1, g2 = params.gamma2, g3 = params.gamma3;
  if (g3 > g1 + g2) return ThresholdBranch::A;
  if (g1 < g2) return ThresholdBranch::B;
  if (g1 > g2) return ThresholdBranch::C;
  return ThresholdBranch::D;
}

double branch_frequency(const Params& params, ThresholdBranch branch) {
  switch (branch) {
    case ThresholdBranch::A: return params.gamma3 / 8.0;
    case ThresholdBranch::B: return params.gamma2 / 4.0;
    default: return params.gamma1 / 4.0;
  }
}

ThresholdConstant threshold_constants(const Params& params, double mu_unit,
                                      std::optional<ThresholdBranch> branch) {
  const double g1 = params.gamma1, g2 = params.gamma2, g3 = params.gamma3;
  if (!(mu_unit > 0.0)) throw ValidationError("threshold needs mu_unit > 0");
  ThresholdConstant out;
  out.branch = branch.value_or(select_branch(params));
  double num = 8.0, den = 0.0;
  std::string condition;
  switch (out.branch) {
    case ThresholdBranch::A:
      num = 16.0;
      den = 2.0 * std::max(g1, g2) * (g3 - g1 - g2);
      condition = "gamma3 > gamma1 + gamma2";
      out.capped = "max(|u0|^2, |v0|^2)";
      break;
    case ThresholdBranch::B:
      den = std::max(g1, g3) * (3.0 * g2 - g1 - g3);
      condition = "3 gamma2 > gamma1 + gamma3";
      out.capped = "max(|u0|^2, |w0|^2)";
      break;
    case ThresholdBranch::C:
      den = std::max(g2, g3) * (3.0 * g1 - g2 - g3);
      condition = "3 gamma1 > gamma2 + gamma3";
      out.capped = "max(|v0|^2, |w0|^2)";
      break;
    case ThresholdBranch::D:
      den = g3 * (2.0 * g1 - g3);
      condition = "2 gamma1 > gamma3";
      out.capped = "|w0|^2";
      break;
  }
  if (!(den > 0.0))
    throw ValidationError(std::string("threshold branch ") + branch_label(out.branch) +
                          " inapplicable: requires " + condition);
  out.value = num / den * mu_unit;
  return out;
}

double capped_mass(const TriField& data, ThresholdBranch branch) {
  const Grid& g = data.grid();
  auto m = [&](int j) { return data[j].abs2().sum() * g.cell_volume(); };
  switch (branch) {
    case ThresholdBranch::A: return std::max(m(0), m(1));
    case ThresholdBranch::B: return std::max(m(0), m(2));
    case ThresholdBranch::C: return std::max(m(1), m(2));
    default: return m(2);
  }
}

std::vector<ScanRow> oscillation_scan(const TriField& data, const Params& params,
                                      const std::vector<Eigen::VectorXd>& c_list, double mu_unit,
                                      std::optional<ThresholdBranch> branch) {
  const Grid& g = data.grid();
  params.validate(g.dim());
  if (params.mass_resonant())
    throw ValidationError("oscillation_scan requires gamma1 + gamma2 != gamma3");
  const ThresholdBranch b = branch.value_or(select_branch(params));
  std::vector<ScanRow> rows;
  double last = -1.0;
  for (const auto& c : c_list) {
    Params p = params;
    p.c = c;
    p.validate(g.dim());
    const double s = p.speed();
    if (!(s > last)) throw ValidationError("scan velocities must have increasing |c|");
    last = s;
    p.omega = branch_frequency(params, b) * s * s;
    ScanRow row;
    row.speed = s;
    row.omega = p.omega;
    row.mu = std::pow(s, 6.0 - g.dim()) * mu_unit;
    row.report = tilde_report(p, data);
    row.report.tilde = false;
    row.region = classify_values(row.report, row.mu);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace triwave
