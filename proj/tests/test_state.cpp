#include <doctest.h>

#include "support.hpp"
#include "triwave/errors.hpp"

using namespace testing;

namespace {

/// Momentum through pointwise quadrature of Re(i grad u conj(u)).
Eigen::VectorXd momentum_oracle(const Params& p, const TriField& f) {
  const Grid& g = f.grid();
  Eigen::VectorXd P = Eigen::VectorXd::Zero(g.dim());
  for (int j = 0; j < 3; ++j) {
    const auto grad = apply_gradient(f.component(j));
    for (int a = 0; a < g.dim(); ++a)
      P[a] += p.gamma(j) * (Complex(0, 1) * grad[a].values() * f[j].conjugate()).real().sum() *
              g.cell_volume();
  }
  return P;
}

double masses_sq(const TriField& f, int j) { return f[j].abs2().sum() * f.grid().cell_volume(); }

double field_diff(const TriField& a, const TriField& b) {
  double m = 0.0;
  for (int j = 0; j < 3; ++j) m = std::max(m, max_abs(a[j] - b[j]));
  return m;
}

}  // namespace

TEST_CASE("params validation names the field") {
  Params p = params(1, 1, 2, 1);
  CHECK_NOTHROW(p.validate(1));
  p.gamma2 = -1;
  try {
    p.validate(1);
    FAIL("expected a ValidationError");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("gamma2") != std::string::npos);
  }
  Params q = params(1, 1, 2, 1, vec({1.0, 2.0}));
  CHECK_THROWS_AS(q.validate(1), ValidationError);
  CHECK(params(1, 2, 3, 1).mass_resonant());
  CHECK_FALSE(params(1, 1, 3, 1).mass_resonant());
}

TEST_CASE("zero triple has zero invariants") {
  const Grid g = make_grid(2, 16, 4.0);
  const InvariantSet s = invariants(params(1, 1, 2, 1), TriField(g));
  CHECK(s.M == 0.0);
  CHECK(s.K == 0.0);
  CHECK(s.E == 0.0);
  CHECK(s.P.norm() == 0.0);
}

TEST_CASE("constant triple invariants") {
  const Grid g = make_grid(1, 64, kPi);
  const double a = 0.7;
  const CArray c = CArray::Constant(g.size(), a);
  const InvariantSet s = invariants(params(1, 1, 2, 1), TriField(g, c, c, c));
  CHECK(std::abs(s.K) < 1e-12);
  CHECK(s.M == doctest::Approx(6 * a * a * 2 * kPi));
  CHECK(s.M1 == doctest::Approx(3 * a * a * 2 * kPi));
  CHECK(s.M2 == doctest::Approx(3 * a * a * 2 * kPi));
  CHECK(std::abs(s.M3) < 1e-12);
  CHECK(s.E == doctest::Approx(-a * a * a * 2 * kPi));
}

TEST_CASE("plane-wave momentum") {
  const Grid g = make_grid(1, 64, 8.0);
  const double k0 = 3 * g.wavenumber_unit();
  const TriField f(plane_wave(g, vec({k0})), ComplexField(g), ComplexField(g));
  const InvariantSet s = invariants(params(1.5, 1, 2, 1), f);
  CHECK(s.P[0] == doctest::Approx(-1.5 * k0 * 2 * g.half_width()));
  CHECK(s.K == doctest::Approx(k0 * k0 * 2 * g.half_width()));
}

TEST_CASE("spectral momentum agrees with pointwise quadrature") {
  Gen gen(21);
  const Grid g = make_grid(2, 32, 6.0);
  for (int trial = 0; trial < 10; ++trial) {
    const Params p = params(gen.uniform(0.5, 2), gen.uniform(0.5, 2), gen.uniform(0.5, 3), 1);
    const TriField f = gen.triple(g);
    const Eigen::VectorXd P = invariants(p, f).P;
    const Eigen::VectorXd Q = momentum_oracle(p, f);
    CHECK((P - Q).norm() / std::max(1.0, Q.norm()) < 1e-10);
  }
}

TEST_CASE("mass decompositions") {
  Gen gen(22);
  const Grid g = make_grid(1, 128, 10.0);
  for (int trial = 0; trial < 50; ++trial) {
    const Params p = params(gen.uniform(0.2, 3), gen.uniform(0.2, 3), gen.uniform(0.2, 3), 1);
    const TriField f = gen.triple(g);
    const InvariantSet s = invariants(p, f);
    CHECK(rel_diff(s.M, s.M1 + s.M2) < 1e-13);
    CHECK(rel_diff(s.M3, s.M1 - s.M2) < 1e-10);
    CHECK(rel_diff(s.M, p.gamma1 * masses_sq(f, 0) + p.gamma2 * masses_sq(f, 1) +
                            2 * p.gamma3 * masses_sq(f, 2)) < 1e-13);
  }
}

TEST_CASE("gauge transform") {
  Gen gen(23);
  const Grid g = make_grid(1, 128, 10.0);
  const Params p = params(1, 2, 3, 1);
  const TriField f = gen.triple(g);
  CHECK(field_diff(gauge_transform(f, 0.0), f) == 0.0);
  const TriField flipped = gauge_transform(f, kPi);
  CHECK(max_abs(flipped[0] + f[0]) < 1e-14);
  CHECK(max_abs(flipped[1] + f[1]) < 1e-14);
  CHECK(max_abs(flipped[2] - f[2]) < 1e-14);

  const InvariantSet base = invariants(p, f);
  for (int trial = 0; trial < 100; ++trial) {
    const InvariantSet s = invariants(p, gauge_transform(f, gen.uniform(-10, 10)));
    CHECK(rel_diff(s.M, base.M) < 1e-12);
    CHECK(rel_diff(s.E, base.E) < 1e-12);
    CHECK(rel_diff(s.K, base.K) < 1e-12);
    CHECK(std::abs(s.P[0] - base.P[0]) < 1e-12 * std::max(1.0, std::abs(base.P[0])));
  }
}

TEST_CASE("scaling transform") {
  Gen gen(24);
  const Grid g = make_grid(4, 8, 5.0);
  const TriField f = gen.triple(g, 0.2, 1);
  const TriField same = scaling_transform(f, 1.0);
  CHECK(same.grid() == g);
  CHECK(field_diff(same, f) == 0.0);
  for (double lambda : {0.5, 1.7, 3.0}) {
    const TriField s = scaling_transform(f, lambda);
    CHECK(s.grid().half_width() == doctest::Approx(g.half_width() / lambda));
    CHECK(rel_diff(norm_sq(s), norm_sq(f)) < 1e-12);
    CHECK(rel_diff(kinetic(s), lambda * lambda * kinetic(f)) < 1e-12);
  }
  CHECK_THROWS_AS(scaling_transform(f, 0.0), ValidationError);
}

TEST_CASE("Galilean boost") {
  Gen gen(25);
  const Grid g = make_grid(1, 128, 8.0);
  const TriField f = gen.triple(g);
  const double unit = g.wavenumber_unit();

  const Params zero = params(1, 1, 2, 1, vec({0.0}));
  CHECK(field_diff(galilean_boost(f, zero, 0.7), f) < 1e-13);

  const Params p = params(1, 1, 2, 1, vec({4 * unit}));
  const TriField b = galilean_boost(f, p, 0.0);
  for (int j = 0; j < 3; ++j) CHECK(rel_diff(masses_sq(b, j), masses_sq(f, j)) < 1e-12);

  const InvariantSet s0 = invariants(p, f), s1 = invariants(p, b);
  double shift = 0.0;
  for (int j = 0; j < 3; ++j) shift += p.gamma(j) * p.gamma(j) * masses_sq(f, j);
  const double predicted = s0.P[0] - shift * p.c[0] / 2.0;
  CHECK(rel_diff(s1.P[0], predicted) < 1e-10);
  CHECK(rel_diff(momentum_oracle(p, b)[0], predicted) < 1e-10);

  const Params bad = params(1, 1, 2, 1, vec({0.3}));
  CHECK_THROWS_AS(galilean_boost(f, bad, 0.0), ValidationError);
}

TEST_CASE("oscillating data") {
  Gen gen(26);
  const Grid g = make_grid(1, 128, 8.0);
  const TriField f = gen.triple(g);
  CHECK(field_diff(oscillating_data(f, params(1, 1, 2, 1)), f) < 1e-14);
  const Params p = params(1, 1, 3, 1, vec({6 * g.wavenumber_unit()}));
  const TriField d = oscillating_data(f, p);
  const InvariantSet a = invariants(p, f), b = invariants(p, d);
  CHECK(rel_diff(a.M, b.M) < 1e-12);
  CHECK(rel_diff(a.M3, b.M3) < 1e-12);
  for (int j = 0; j < 3; ++j) CHECK(max_abs(d[j].abs() - f[j].abs()) < 1e-14);
}

TEST_CASE("strip undoes dress") {
  Gen gen(27);
  const Grid g = make_grid(2, 32, 6.0);
  for (int trial = 0; trial < 20; ++trial) {
    const Params p = params(1, 2, 3, 1, gen.lattice_velocity(g, 4));
    const TriField f = gen.triple(g);
    const TriField back =
        phase_map(phase_map(f, p, PhaseDirection::dress), p, PhaseDirection::strip);
    CHECK(field_diff(back, f) < 1e-14);
  }
}

TEST_CASE("resonant twisted translation by whole cells preserves the invariants") {
  Gen gen(28);
  const Grid g = make_grid(1, 128, 8.0);
  const Params p = params(1, 1, 2, 1, vec({2 * g.wavenumber_unit()}));
  const TriField f = gen.triple(g);
  const InvariantSet a = invariants(p, f);
  for (int cells : {3, -11, 40}) {
    const InvariantSet b = invariants(p, twisted_translate(f, p, vec({cells * g.spacing()})));
    CHECK(rel_diff(a.M, b.M) < 1e-12);
    CHECK(rel_diff(a.K, b.K) < 1e-12);
    CHECK(rel_diff(a.E, b.E) < 1e-12);
  }
}

TEST_CASE("two-wave symmetry") {
  Gen gen(29);
  const Grid g = make_grid(1, 128, 8.0);
  const Params p = params(1.3, 1.3, 2, 1);
  const ComplexField u = gen.smooth(g), w = gen.smooth(g);
  const TriField f(u, u, w);
  CHECK(field_diff(swap_uv(f), f) == 0.0);

  const TriField h = gen.triple(g);
  const InvariantSet a = invariants(p, h), b = invariants(p, swap_uv(h));
  CHECK(rel_diff(a.M, b.M) < 1e-13);
  CHECK(rel_diff(a.E, b.E) < 1e-12);
  CHECK(rel_diff(a.P[0], b.P[0]) < 1e-12);
  CHECK(rel_diff(a.M3, -b.M3) < 1e-12);
}

TEST_CASE("commensurability checks") {
  const Grid g = make_grid(1, 64, 4.0);
  const double unit = g.wavenumber_unit();
  CHECK_NOTHROW(require_boost_commensurate(g, params(1, 1, 2, 1, vec({2 * unit}))));
  CHECK_THROWS_AS(require_boost_commensurate(g, params(1, 1, 2, 1, vec({unit}))), ValidationError);
  CHECK_NOTHROW(require_weight_commensurate(g, params(1, 1, 3, 1, vec({2 * unit}))));
  CHECK_NOTHROW(require_weight_commensurate(g, params(1, 1, 2, 1, vec({0.123}))));
}
