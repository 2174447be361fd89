#include "triwave/state.hpp"

#include <cmath>
#include <string>

#include "triwave/errors.hpp"

namespace triwave {

Eigen::VectorXd Params::velocity(int dim) const {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(dim);
  for (Index a = 0; a < std::min<Index>(dim, c.size()); ++a) out[a] = c[a];
  return out;
}

bool Params::mass_resonant() const noexcept {
  return std::abs(resonance_defect()) <= 1e-12;
}

void Params::validate(int dim) const {
  const char* names[3] = {"params.gamma1", "params.gamma2", "params.gamma3"};
  for (int j = 0; j < 3; ++j) {
    const double g = gamma(j);
    if (!(g > 0.0) || !std::isfinite(g))
      throw ValidationError(std::string(names[j]) + " must be positive and finite");
  }
  if (!std::isfinite(omega)) throw ValidationError("params.omega must be finite");
  if (c.size() != 0 && c.size() != dim)
    throw ValidationError("params.c has length " + std::to_string(c.size()) +
                          ", expected " + std::to_string(dim));
  if (c.size() != 0 && !c.allFinite()) throw ValidationError("params.c must be finite");
}

TriField::TriField(Grid grid) : grid_(std::move(grid)) {
  for (auto& comp : comps_) comp = CArray::Zero(grid_.size());
}

TriField::TriField(Grid grid, CArray u, CArray v, CArray w)
    : grid_(std::move(grid)), comps_{std::move(u), std::move(v), std::move(w)} {
  for (const auto& comp : comps_)
    if (comp.size() != grid_.size())
      throw ValidationError("triple component size does not match grid");
}

TriField::TriField(const ComplexField& u, const ComplexField& v, const ComplexField& w)
    : grid_(u.grid()), comps_{u.values(), v.values(), w.values()} {
  if (!(v.grid() == grid_) || !(w.grid() == grid_))
    throw ValidationError("triple components live on different grids");
}

bool TriField::all_finite() const {
  for (const auto& comp : comps_)
    if (!comp.isFinite().all()) return false;
  return true;
}

TriField& TriField::operator+=(const TriField& other) {
  if (!(other.grid_ == grid_)) throw ValidationError("grid mismatch");
  for (int j = 0; j < 3; ++j) comps_[j] += other.comps_[j];
  return *this;
}

TriField& TriField::operator-=(const TriField& other) {
  if (!(other.grid_ == grid_)) throw ValidationError("grid mismatch");
  for (int j = 0; j < 3; ++j) comps_[j] -= other.comps_[j];
  return *this;
}

TriField& TriField::operator*=(double s) {
  for (auto& comp : comps_) comp *= s;
  return *this;
}

TriField& TriField::operator*=(Complex s) {
  for (auto& comp : comps_) comp *= s;
  return *this;
}

TriField operator+(TriField a, const TriField& b) { return a += b; }
TriField operator-(TriField a, const TriField& b) { return a -= b; }
TriField operator*(double s, TriField a) { return a *= s; }

double inner(const TriField& f, const TriField& g) {
  if (!(f.grid() == g.grid())) throw ValidationError("inner: grid mismatch");
  double acc = 0.0;
  for (int j = 0; j < 3; ++j) acc += (f[j] * g[j].conjugate()).real().sum();
  return acc * f.grid().cell_volume();
}

double norm_sq(const TriField& f) {
  double acc = 0.0;
  for (int j = 0; j < 3; ++j) acc += f[j].abs2().sum();
  return acc * f.grid().cell_volume();
}

double kinetic(const TriField& f) {
  double acc = 0.0;
  for (int j = 0; j < 3; ++j) acc += gradient_norm_sq(f.component(j));
  return acc;
}

InvariantSet invariants(const Params& params, const TriField& field) {
  const Grid& grid = field.grid();
  params.validate(grid.dim());
  const double dv = grid.cell_volume();
  std::array<double, 3> mass{};
  InvariantSet out;
  out.P = Eigen::VectorXd::Zero(grid.dim());
  for (int j = 0; j < 3; ++j) {
    mass[j] = field[j].abs2().sum() * dv;
    CArray coeffs = field[j];
    spectral::forward(grid, coeffs);
    out.K += spectral::gradient_norm_sq(grid, coeffs);
    for (int a = 0; a < grid.dim(); ++a)
      out.P[a] -= params.gamma(j) * spectral::first_moment(grid, a, coeffs);
  }
  const double g1 = params.gamma1, g2 = params.gamma2, g3 = params.gamma3;
  out.M = g1 * mass[0] + g2 * mass[1] + 2.0 * g3 * mass[2];
  out.M1 = g1 * mass[0] + g3 * mass[2];
  out.M2 = g2 * mass[1] + g3 * mass[2];
  out.M3 = g1 * mass[0] - g2 * mass[1];
  const double V = (field[0] * field[1] * field[2].conjugate()).real().sum() * dv;
  out.E = 0.5 * out.K - V;
  return out;
}

TriField gauge_transform(const TriField& field, double theta) {
  TriField out = field;
  const Complex p = std::polar(1.0, theta);
  out[0] *= p;
  out[1] *= p;
  out[2] *= p * p;
  return out;
}

TriField scaling_transform(const TriField& field, double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw ValidationError("scaling lambda must be positive and finite");
  const Grid& g = field.grid();
  TriField out(g.with_half_width(g.half_width() / lambda), field[0], field[1], field[2]);
  return out *= lambda * lambda;
}

namespace {

void require_lattice(const Grid& grid, double k, const std::string& what) {
  if (!grid.commensurate(k))
    throw ValidationError(what + " = " + std::to_string(k) +
                          " is not a multiple of pi/L = " +
                          std::to_string(grid.wavenumber_unit()));
}

CArray linear_phase(const Grid& grid, const Eigen::VectorXd& k) {
  return plane_wave(grid, k).values();
}

}  // namespace

void require_boost_commensurate(const Grid& grid, const Params& params) {
  const Eigen::VectorXd c = params.velocity(grid.dim());
  for (int j = 0; j < 3; ++j)
    for (int a = 0; a < grid.dim(); ++a)
      require_lattice(grid, params.gamma(j) * c[a] / 2.0,
                      "gamma" + std::to_string(j + 1) + "*c" + std::to_string(a + 1) + "/2");
}

void require_weight_commensurate(const Grid& grid, const Params& params) {
  const Eigen::VectorXd c = params.velocity(grid.dim());
  for (int a = 0; a < grid.dim(); ++a)
    require_lattice(grid, params.resonance_defect() * c[a] / 2.0,
                    "(gamma1+gamma2-gamma3)*c" + std::to_string(a + 1) + "/2");
}

TriField galilean_boost(const TriField& field, const Params& params, double t) {
  const Grid& grid = field.grid();
  params.validate(grid.dim());
  require_boost_commensurate(grid, params);
  const Eigen::VectorXd c = params.velocity(grid.dim());
  const Eigen::VectorXd shift = c * t;
  TriField out(grid);
  for (int j = 0; j < 3; ++j) {
    const double g = params.gamma(j);
    const Complex temporal = std::polar(1.0, -g * c.squaredNorm() * t / 4.0);
    const CArray moved = translate(field.component(j), shift).values();
    out[j] = moved * linear_phase(grid, g * c / 2.0) * temporal;
  }
  return out;
}

TriField phase_map(const TriField& field, const Params& params, PhaseDirection direction) {
  const Grid& grid = field.grid();
  params.validate(grid.dim());
  require_boost_commensurate(grid, params);
  const Eigen::VectorXd c = params.velocity(grid.dim());
  const double sign = direction == PhaseDirection::dress ? 1.0 : -1.0;
  TriField out = field;
  for (int j = 0; j < 3; ++j)
    out[j] *= linear_phase(grid, sign * params.gamma(j) * c / 2.0);
  return out;
}

TriField oscillating_data(const TriField& data, const Params& params) {
  return phase_map(data, params, PhaseDirection::dress);
}

TriField twisted_translate(const TriField& field, const Params& params,
                           const Eigen::VectorXd& y) {
  const Grid& grid = field.grid();
  const Eigen::VectorXd c = params.velocity(grid.dim());
  TriField out(grid);
  for (int j = 0; j < 3; ++j) {
    const Complex phase = std::polar(1.0, -params.gamma(j) * c.dot(y) / 2.0);
    out[j] = translate(field.component(j), y).values() * phase;
  }
  return out;
}

TriField swap_uv(const TriField& field) {
  return TriField(field.grid(), field[1], field[0], field[2]);
}

ComplexField gaussian(const Grid& grid, Complex amplitude, const Eigen::VectorXd& center,
                      double width, const Eigen::VectorXd& k) {
  if (center.size() != grid.dim()) throw ValidationError("center length != grid.dim");
  if (!(width > 0.0)) throw ValidationError("gaussian width must be positive");
  RArray r2 = RArray::Zero(grid.size());
  RArray phase = RArray::Zero(grid.size());
  for (int a = 0; a < grid.dim(); ++a) {
    const RArray x = grid.coordinates(a);
    r2 += (x - center[a]).square();
    if (k.size() == grid.dim()) phase += x * k[a];
  }
  CArray values = (-r2 / (2.0 * width * width)).exp().cast<Complex>() * amplitude;
  if (k.size() == grid.dim()) values *= (phase.cast<Complex>() * Complex(0.0, 1.0)).exp();
  return ComplexField(grid, std::move(values));
}

double boundary_ratio(const TriField& field) {
  double r = 0.0;
  for (int j = 0; j < 3; ++j) r = std::max(r, boundary_ratio(field.component(j)));
  return r;
}

}  // namespace triwave
