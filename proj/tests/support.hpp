#pragma once

// Hand-rolled generators shared by the unit tests.

#include <cmath>
#include <numbers>
#include <random>

#include "triwave/state.hpp"

namespace testing {

using namespace triwave;

inline constexpr double kPi = std::numbers::pi;

inline Eigen::VectorXd vec(std::initializer_list<double> xs) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

inline Params params(double g1, double g2, double g3, double omega,
                     Eigen::VectorXd c = Eigen::VectorXd()) {
  Params p;
  p.gamma1 = g1;
  p.gamma2 = g2;
  p.gamma3 = g3;
  p.omega = omega;
  p.c = std::move(c);
  return p;
}

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  Complex phase() { return std::polar(1.0, uniform(0.0, 2.0 * kPi)); }

  /// Smooth decaying field: a sum of two Gaussians with lattice momenta.
  ComplexField smooth(const Grid& g, double spread = 0.25, int max_mode = 3) {
    CArray sum = CArray::Zero(g.size());
    for (int term = 0; term < 2; ++term) {
      Eigen::VectorXd center(g.dim()), k(g.dim());
      for (int a = 0; a < g.dim(); ++a) {
        center[a] = uniform(-spread, spread) * g.half_width();
        k[a] = integer(-max_mode, max_mode) * g.wavenumber_unit();
      }
      const double width = uniform(0.08, 0.14) * g.half_width();
      sum += gaussian(g, uniform(0.4, 1.2) * phase(), center, width, k).values();
    }
    return ComplexField(g, sum);
  }

  TriField triple(const Grid& g, double spread = 0.25, int max_mode = 3) {
    return TriField(smooth(g, spread, max_mode), smooth(g, spread, max_mode),
                    smooth(g, spread, max_mode));
  }

  /// Lattice-valued velocity with every gamma_j c / 2 on the dual lattice
  /// for integer gammas.
  Eigen::VectorXd lattice_velocity(const Grid& g, int max_mode) {
    Eigen::VectorXd c(g.dim());
    for (int a = 0; a < g.dim(); ++a) c[a] = 2.0 * integer(-max_mode, max_mode) * g.wavenumber_unit();
    return c;
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

inline double rel_diff(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

inline double max_abs(const CArray& a) { return a.abs().maxCoeff(); }

}  // namespace testing
