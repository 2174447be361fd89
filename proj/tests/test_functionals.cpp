#include <doctest.h>

#include "support.hpp"
#include "triwave/descent.hpp"
#include "triwave/errors.hpp"
#include "triwave/functionals.hpp"

using namespace testing;

namespace {

/// Plain action assembled from the conserved quantities: E + omega M/2 + c.P/2.
double action_oracle(const Params& p, const TriField& f) {
  const InvariantSet s = invariants(p, f);
  return s.E + p.omega * s.M / 2 + p.velocity(f.grid().dim()).dot(s.P) / 2;
}

Params admissible_case_a(Gen& gen, const Grid& g, double g1, double g2, double g3) {
  Params p = params(g1, g2, g3, 0.0, gen.lattice_velocity(g, 3));
  p.omega = case_frequency(p, WaveCase::A) + gen.uniform(0.1, 1.5);
  return p;
}

}  // namespace

TEST_CASE("case labels round trip") {
  for (WaveCase wc : {WaveCase::A, WaveCase::B, WaveCase::C, WaveCase::D, WaveCase::E})
    CHECK(parse_case(std::string(1, case_label(wc))) == wc);
  CHECK(parse_case("b") == WaveCase::B);
  CHECK_THROWS_AS(parse_case("F"), ValidationError);
}

TEST_CASE("case conditions") {
  const Eigen::VectorXd c4 = vec({1.0, 0.0, 0.0, 0.0});
  Params a = params(1, 1, 3, 1.0, c4);
  CHECK_NOTHROW(check_case(a, 4, WaveCase::A));
  a.omega = 0.3;
  CHECK_THROWS_AS(check_case(a, 4, WaveCase::A), ValidationError);

  const Params b = params(1, 1, 3, 3.0 / 8, c4);
  CHECK_NOTHROW(check_case(b, 4, WaveCase::B));
  CHECK_THROWS_AS(check_case(b, 2, WaveCase::B), ValidationError);
  CHECK_THROWS_AS(check_case(params(1, 2, 3, 3.0 / 8, c4), 4, WaveCase::B), ValidationError);

  CHECK_NOTHROW(check_case(params(1, 1.5, 3, 3.0 / 8, c4), 4, WaveCase::C));
  CHECK_THROWS_AS(check_case(params(1, 1.5, 3, 3.0 / 8, c4), 3, WaveCase::C), ValidationError);

  const Eigen::VectorXd c3 = vec({1.0, 0.0, 0.0});
  CHECK_NOTHROW(check_case(params(1, 2, 3, 0.5, c3), 3, WaveCase::D));
  CHECK_THROWS_AS(check_case(params(1, 2, 3, 0.6, c3), 3, WaveCase::D), ValidationError);

  CHECK_NOTHROW(check_case(params(1.2, 1.2, 2, 0.3, c4), 4, WaveCase::E));
  CHECK_THROWS_AS(check_case(params(1.2, 1.3, 2, 0.3, c4), 4, WaveCase::E), ValidationError);
}

TEST_CASE("zero triple has zero functionals") {
  const Grid g = make_grid(1, 32, 4.0);
  const FunctionalReport r = report(params(1, 1, 2, 1), TriField(g));
  CHECK(r.S == 0.0);
  CHECK(r.Q == 0.0);
  CHECK(r.V == 0.0);
  CHECK(r.N == 0.0);
}

TEST_CASE("constant triple functionals") {
  const Grid g = make_grid(1, 64, kPi);
  const double a = 0.6;
  const CArray c = CArray::Constant(g.size(), a);
  const FunctionalReport r = report(params(1, 1, 2, 1), TriField(g, c, c, c));
  CHECK(r.Q == doctest::Approx(3 * a * a * 2 * kPi));
  CHECK(r.V == doctest::Approx(a * a * a * 2 * kPi));
  CHECK(r.S == doctest::Approx(r.Q - r.V));
  CHECK(r.N == doctest::Approx(2 * r.Q - 3 * r.V));
}

TEST_CASE("plain action equals the conserved-quantity combination") {
  Gen gen(31);
  const Grid g = make_grid(1, 128, 8.0);
  for (int trial = 0; trial < 30; ++trial) {
    const Params p = params(gen.uniform(0.5, 2), gen.uniform(0.5, 2), gen.uniform(0.5, 3),
                            gen.uniform(0.1, 2), vec({gen.uniform(-2, 2)}));
    const TriField f = gen.triple(g);
    CHECK(rel_diff(report(p, f).S, action_oracle(p, f)) < 1e-10);
  }
}

TEST_CASE("stripped functionals equal the plain functionals of the dressed triple") {
  Gen gen(32);
  const Grid g = make_grid(1, 256, 8.0);
  for (int trial = 0; trial < 30; ++trial) {
    const double g3 = trial % 2 ? 3.0 : 2.0;
    const Params p = admissible_case_a(gen, g, 1, 1, g3);
    const TriField f = gen.triple(g);
    const FunctionalReport t = tilde_report(p, f);
    const TriField dressed = phase_map(f, p, PhaseDirection::dress);
    CHECK(rel_diff(t.S, action_oracle(p, dressed)) < 1e-10);
    const FunctionalReport d = report(p, dressed);
    CHECK(rel_diff(t.Q, d.Q) < 1e-10);
    CHECK(rel_diff(t.V, d.V) < 1e-10);
  }
}

TEST_CASE("resonant weight is trivial") {
  Gen gen(33);
  const Grid g = make_grid(2, 32, 6.0);
  for (int trial = 0; trial < 10; ++trial) {
    const Params p = admissible_case_a(gen, g, 1, 2, 3);
    const TriField f = gen.triple(g);
    const double plain = (f[0] * f[1] * f[2].conjugate()).real().sum() * g.cell_volume();
    CHECK(rel_diff(tilde_report(p, f).V, plain) < 1e-13);
  }
}

TEST_CASE("zero velocity reduces to the plain functionals") {
  Gen gen(34);
  const Grid g = make_grid(1, 128, 8.0);
  const Params p = params(1, 1, 3, 0.8);
  const TriField f = gen.triple(g);
  const FunctionalReport a = tilde_report(p, f), b = report(p, f);
  CHECK(rel_diff(a.S, b.S) < 1e-13);
  CHECK(rel_diff(a.Q, b.Q) < 1e-13);
}

TEST_CASE("algebraic identities and gauge invariance") {
  Gen gen(35);
  const Grid g = make_grid(1, 128, 8.0);
  for (int trial = 0; trial < 30; ++trial) {
    const Params p = admissible_case_a(gen, g, 1, 1, 3);
    const TriField f = gen.triple(g);
    const FunctionalReport r = tilde_report(p, f);
    CHECK(rel_diff(r.S, r.Q - r.V) < 1e-12);
    CHECK(std::abs(r.N - (2 * r.Q - 3 * r.V)) < 1e-12 * std::max(1.0, r.Q));
    CHECK(r.Q > 0.0);
    const FunctionalReport s = tilde_report(p, gauge_transform(f, gen.uniform(0, 7)));
    CHECK(rel_diff(r.S, s.S) < 1e-12);
  }
}

TEST_CASE("twisted translations leave the stripped action invariant") {
  Gen gen(36);
  const Grid g = make_grid(1, 128, 8.0);
  const Params p = admissible_case_a(gen, g, 1, 1, 3);
  const TriField f = gen.triple(g);
  const double s = tilde_report(p, f).S;
  for (int cells : {2, -9, 30}) {
    const TriField t = twisted_translate(f, p, vec({cells * g.spacing()}));
    CHECK(rel_diff(tilde_report(p, t).S, s) < 1e-11);
  }
}

TEST_CASE("Nehari scale") {
  CHECK(nehari_scale(3, 2) == doctest::Approx(1.0));
  CHECK(nehari_scale(3, 4) == doctest::Approx(0.5));
  CHECK_THROWS_AS(nehari_scale(3, 0), ValidationError);
  CHECK_THROWS_AS(nehari_scale(3, -1), ValidationError);
  CHECK_THROWS_AS(nehari_scale(0, 1), ValidationError);
}

TEST_CASE("Nehari projection lands on the manifold and is positive there") {
  Gen gen(37);
  const Grid g = make_grid(1, 128, 8.0);
  for (int trial = 0; trial < 100; ++trial) {
    const Params p = admissible_case_a(gen, g, gen.integer(1, 2), 1, 3);
    TriField f = gen.triple(g);
    align_cubic(TildeContext(p, g), f);
    const NehariProjection np = nehari_project(p, f);
    const FunctionalReport r = tilde_report(p, np.field);
    CHECK(std::abs(r.N) < 1e-10 * r.Q);
    CHECK(rel_diff(r.S, r.Q / 3) < 1e-10);
    CHECK(r.S > 0.0);
  }
}

TEST_CASE("stripped gradient matches central differences") {
  Gen gen(38);
  const Grid g = make_grid(1, 128, 8.0);
  for (int set = 0; set < 3; ++set) {
    const Params p = admissible_case_a(gen, g, 1, 1, 3);
    const TriField f = gen.triple(g);
    const TriField G = action_gradient(p, f);
    for (int k = 0; k < 10; ++k) {
      const TriField d = gen.triple(g);
      const double h = 1e-5;
      const double fd = (tilde_report(p, f + h * d).S - tilde_report(p, f - h * d).S) / (2 * h);
      CHECK(rel_diff(fd, inner(G, d)) < 1e-6);
    }
  }
}

TEST_CASE("plain gradient matches central differences") {
  Gen gen(39);
  const Grid g = make_grid(2, 32, 6.0);
  const Params p = params(1, 1.5, 2, 0.7, vec({0.4, -0.3}));
  const TriField f = gen.triple(g);
  const TriField G = plain_action_gradient(p, f);
  for (int k = 0; k < 10; ++k) {
    const TriField d = gen.triple(g);
    const double h = 1e-5;
    const double fd = (report(p, f + h * d).S - report(p, f - h * d).S) / (2 * h);
    CHECK(rel_diff(fd, inner(G, d)) < 1e-6);
  }
}

TEST_CASE("context evaluation agrees with the free functions") {
  Gen gen(40);
  const Grid g = make_grid(1, 128, 8.0);
  const Params p = admissible_case_a(gen, g, 1, 1, 3);
  const TildeContext ctx(p, g);
  const TriField f = gen.triple(g);
  TriField G(g);
  const FunctionalReport a = tilde_evaluate(ctx, f, &G);
  const FunctionalReport b = tilde_report(p, f);
  CHECK(rel_diff(a.S, b.S) < 1e-13);
  const TriField H = action_gradient(p, f);
  double err = 0.0;
  for (int j = 0; j < 3; ++j) err = std::max(err, max_abs(G[j] - H[j]));
  CHECK(err < 1e-10);
}

TEST_CASE("weighted cubic bound constant stabilizes under refinement") {
  Gen gen(41);
  const Params p = params(1, 1, 3, 1.0, vec({kPi / 4}));
  const Grid coarse = make_grid(1, 128, 8.0), fine = make_grid(1, 256, 8.0);
  double rc = 0.0, rf = 0.0;
  for (int trial = 0; trial < 40; ++trial) {
    Eigen::VectorXd centers(3), widths(3);
    std::array<Complex, 3> amps;
    for (int j = 0; j < 3; ++j) {
      centers[j] = gen.uniform(-2, 2);
      widths[j] = gen.uniform(0.6, 1.4);
      amps[j] = gen.uniform(0.3, 1.5) * gen.phase();
    }
    auto sample = [&](const Grid& g) {
      TriField f(g);
      for (int j = 0; j < 3; ++j) f[j] = gaussian(g, amps[j], vec({centers[j]}), widths[j]).values();
      const FunctionalReport r = tilde_report(p, f);
      return std::abs(r.V) / std::pow(r.Q, 1.5);
    };
    rc = std::max(rc, sample(coarse));
    rf = std::max(rf, sample(fine));
  }
  CHECK(std::isfinite(rc));
  CHECK(rel_diff(rc, rf) < 1e-8);
}
