#pragma once

#include <array>

#include <Eigen/Core>

#include "triwave/grid.hpp"

namespace triwave {

/// Couplings and wave parameters.
struct Params {
  double gamma1 = 1.0;
  double gamma2 = 1.0;
  double gamma3 = 2.0;
  double omega = 1.0;
  /// Velocity; an empty vector stands for zero.
  Eigen::VectorXd c;

  std::array<double, 3> gammas() const noexcept { return {gamma1, gamma2, gamma3}; }
  double gamma(int j) const noexcept { return j == 0 ? gamma1 : (j == 1 ? gamma2 : gamma3); }
  /// c padded with zeros to length `dim`.
  Eigen::VectorXd velocity(int dim) const;
  double speed() const noexcept { return c.size() == 0 ? 0.0 : c.norm(); }
  bool mass_resonant() const noexcept;
  /// gamma1 + gamma2 - gamma3.
  double resonance_defect() const noexcept { return gamma1 + gamma2 - gamma3; }

  /// Throws ValidationError naming the offending field.
  void validate(int dim) const;
};

/// The triple (u, v, w) on one shared grid.
class TriField {
 public:
  TriField() : TriField(Grid()) {}
  explicit TriField(Grid grid);
  TriField(Grid grid, CArray u, CArray v, CArray w);
  TriField(const ComplexField& u, const ComplexField& v, const ComplexField& w);

  const Grid& grid() const noexcept { return grid_; }
  CArray& operator[](int j) noexcept { return comps_[j]; }
  const CArray& operator[](int j) const noexcept { return comps_[j]; }
  ComplexField component(int j) const { return ComplexField(grid_, comps_[j]); }
  bool all_finite() const;

  TriField& operator+=(const TriField& other);
  TriField& operator-=(const TriField& other);
  TriField& operator*=(double s);
  TriField& operator*=(Complex s);

 private:
  Grid grid_;
  std::array<CArray, 3> comps_;
};

TriField operator+(TriField a, const TriField& b);
TriField operator-(TriField a, const TriField& b);
TriField operator*(double s, TriField a);

/// sum_j Re int f_j conj(g_j).
double inner(const TriField& f, const TriField& g);
double norm_sq(const TriField& f);
/// Plain sum of the three kinetic terms.
double kinetic(const TriField& f);

struct InvariantSet {
  double M = 0.0;
  double M1 = 0.0;
  double M2 = 0.0;
  double M3 = 0.0;
  double K = 0.0;
  double E = 0.0;
  Eigen::VectorXd P;
};

InvariantSet invariants(const Params& params, const TriField& field);

/// (e^{i theta} u, e^{i theta} v, e^{2 i theta} w).
TriField gauge_transform(const TriField& field, double theta);

/// lambda^2 f(lambda x) on the grid of half-width L / lambda.
///
/// The samples are reused, so the map is exact on the grid.
TriField scaling_transform(const TriField& field, double lambda);

/// Requires every gamma_j c / 2 on the dual lattice.
void require_boost_commensurate(const Grid& grid, const Params& params);
/// Requires (gamma1 + gamma2 - gamma3) c / 2 on the dual lattice.
void require_weight_commensurate(const Grid& grid, const Params& params);

/// Galilean image at time t:
/// u_j -> exp(i gamma_j (c.x/2 - |c|^2 t/4)) u_j(x - c t).
TriField galilean_boost(const TriField& field, const Params& params, double t);

/// (e^{i gamma_1 c.x/2} u0, e^{i gamma_2 c.x/2} v0, e^{i gamma_3 c.x/2} w0).
TriField oscillating_data(const TriField& data, const Params& params);

enum class PhaseDirection { strip, dress };

/// Multiplies component j by exp(-+ i gamma_j c.x / 2).
TriField phase_map(const TriField& field, const Params& params, PhaseDirection direction);

/// f_j -> exp(-i gamma_j c.y / 2) f_j(x - y).
TriField twisted_translate(const TriField& field, const Params& params,
                           const Eigen::VectorXd& y);

/// Exchanges u and v.
TriField swap_uv(const TriField& field);

/// amplitude * exp(-|x - center|^2 / (2 width^2)) * exp(i k.x).
ComplexField gaussian(const Grid& grid, Complex amplitude, const Eigen::VectorXd& center,
                      double width, const Eigen::VectorXd& k = Eigen::VectorXd());

/// Largest boundary_ratio over the three components.
double boundary_ratio(const TriField& field);

}  // namespace triwave
