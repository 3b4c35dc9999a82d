#include <doctest.h>

#include <cmath>

#include "apfix/errors.hpp"
#include "apfix/examples.hpp"
#include "apfix/integral_op.hpp"
#include "oracles.hpp"

using namespace apfix;

namespace {

ModelParams constant_model(double m, double n, double r, double b, double tau = 1.0,
                           double lambda = 1.0) {
  std::vector<ModelTerm> terms;
  terms.push_back(ModelTerm{lambda, APExpr::constant(r), APExpr::constant(tau), {}, {}});
  return ModelParams::create(m, n, std::move(terms), APExpr::constant(b));
}

}  // namespace

TEST_CASE("flux basics") {
  CHECK(flux(0.0, 1.1, 0.5) == 0.0);
  CHECK(flux(1.0, 1.1, 0.5) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(flux(1.0, 2.3, 1.9) == doctest::Approx(0.5).epsilon(1e-15));
  // 4^1.1 / (1 + 4^0.5), pinned by direct power evaluation
  CHECK(flux(4.0, 1.1, 0.5) == doctest::Approx(1.531597806662713).epsilon(1e-13));
  CHECK(flux(4.0, 1.1, 0.5) ==
        doctest::Approx(std::pow(4.0, 1.1) / (1.0 + std::pow(4.0, 0.5))).epsilon(1e-14));
  CHECK_THROWS_AS(flux(-0.1, 1.1, 0.5), DomainError);
}

TEST_CASE("capped flux") {
  const double m = 1.1, n = 1.2;
  const double V = compute_V(m, n);
  CHECK(h_trunc(V, m, n, V) == doctest::Approx(flux(V, m, n)).epsilon(1e-15));
  CHECK(h_trunc(2.0 * V, m, n, V) == doctest::Approx(flux(V, m, n)).epsilon(1e-15));
  CHECK(h_trunc(0.5 * V, m, n, V) == doctest::Approx(flux(0.5 * V, m, n)).epsilon(1e-15));
  CHECK_THROWS_AS(h_trunc(1.0, m, n, 0.0), DomainError);
}

TEST_CASE("flux_sup_over matches the regime") {
  // n <= m: nondecreasing, sup at the right end
  CHECK(flux_sup_over(1.1, 0.5, 81.145) == doctest::Approx(flux(81.145, 1.1, 0.5)));
  // n > m: peak at V
  const double V = compute_V(1.1, 1.2);
  CHECK(flux_sup_over(1.1, 1.2, 100.0) == doctest::Approx(flux(V, 1.1, 1.2)));
  CHECK(flux_sup_over(1.1, 1.2, 0.5 * V) == doctest::Approx(flux(0.5 * V, 1.1, 1.2)));
}

TEST_CASE("tail_length closed forms") {
  // bundled coefficients in the n >= m regime: log(F_s * 6.4 / 1e-10)
  const ModelParams ex2 = builtin_example(2);
  CHECK(tail_length(ex2, 1e-10) == doctest::Approx(24.888148920306083).epsilon(1e-12));

  // F_s = 1, b* = 1, sum lambda r^+ = 1, tol = e^{-20}  ->  L = 20
  const ModelParams unit = constant_model(1.2, 1.5, 1.0, 1.0);
  CHECK(tail_length(unit, std::exp(-20.0)) == doctest::Approx(20.0).epsilon(1e-12));

  // doubling the tolerance shaves off log(2)/(b*)^-
  const double l1 = tail_length(unit, 1e-8);
  const double l2 = tail_length(unit, 2e-8);
  CHECK(l1 - l2 == doctest::Approx(std::log(2.0)).epsilon(1e-12));

  // n < m needs an explicit flux bound
  const ModelParams ex1 = builtin_example(1);
  CHECK_THROWS_AS(tail_length(ex1, 1e-10), DomainError);
  CHECK(tail_length(ex1, 1e-10, flux(81.145, 1.1, 0.5)) > 24.0);
}

TEST_CASE("constant-kernel application reproduces the closed form") {
  const double m = 1.3, n = 1.5, r0 = 2.5, b0 = 1.5, c = 2.0;
  const ModelParams p = constant_model(m, n, r0, b0);
  QuadratureSpec q;
  q.tail_tol = 1e-12;

  const double L = tail_length(p, q.tail_tol);
  const double dt = 0.005;
  const double t0 = -(L + 1.0 + 1.0 + 2.0 * dt);
  const auto len = static_cast<std::size_t>(std::ceil((2.0 - t0) / dt)) + 1;
  const GridFunction x = GridFunction::constant(t0, dt, len, c);

  const GridFunction out = phi_apply(p, x, 0.0, 2.0, q, false);
  const double expected = r0 / b0 * flux(c, m, n);
  for (std::size_t i = 0; i < out.size(); ++i)
    CHECK(out[i] == doctest::Approx(expected).epsilon(1e-9));

  // cross-check the closed form against brute-force quadrature
  const double brute = oracles::integrate(
      [&](double s) { return std::exp(-b0 * (0.0 - s)) * r0 * flux(c, m, n); }, -L, 0.0);
  CHECK(expected == doctest::Approx(brute).epsilon(1e-9));

  // trapezoid rule lands on the same value at its (coarser) accuracy
  QuadratureSpec qt = q;
  qt.rule = QuadratureSpec::Rule::Trapezoid;
  const GridFunction out_t = phi_apply(p, x, 0.0, 2.0, qt, false);
  for (std::size_t i = 0; i < out_t.size(); ++i)
    CHECK(out_t[i] == doctest::Approx(expected).epsilon(1e-5));
}

TEST_CASE("quad_dt caps the admissible lattice step") {
  const ModelParams p = constant_model(1.3, 1.5, 2.5, 1.5);
  QuadratureSpec q;
  q.L = 5.0;
  q.quad_dt = 0.005;
  CHECK_THROWS_AS(PhiEvaluator(p, 0.0, 0.01, 100, q, false), GridError);
  const PhiEvaluator ok(p, 0.0, 0.005, 100, q, false);
  CHECK(ok.dt() == 0.005);
}

TEST_CASE("bracket endpoints map inward on example 1") {
  const ModelParams p = builtin_example(1);
  const double A = 4.0;
  const double B = compute_B(A, p.m(), p.n());

  QuadratureSpec q;  // L auto-resolved from the input's own sup
  const double L = tail_length(p, q.tail_tol, flux_sup_over(p.m(), p.n(), B));
  const double dt = 7.853981633974483e-4;
  const double t0 = -(L + p.upsilon() + 3.0 * dt);
  const auto len = static_cast<std::size_t>(std::ceil((2.0 - t0) / dt)) + 1;

  const GridFunction lo = GridFunction::constant(t0, dt, len, A);
  const GridFunction out_lo = phi_apply(p, lo, 0.0, 2.0, q, false);
  CHECK(out_lo.min_value() >= A - 1e-8);

  const GridFunction hi = GridFunction::constant(t0, dt, len, B);
  const GridFunction out_hi = phi_apply(p, hi, 0.0, 2.0, q, false);
  CHECK(out_hi.max_value() <= B + 1e-8);
}

TEST_CASE("phi_apply input validation") {
  const ModelParams p = constant_model(1.3, 1.5, 2.5, 1.5);
  QuadratureSpec q;
  const GridFunction shallow = GridFunction::constant(-2.0, 0.01, 500, 1.0);
  CHECK_THROWS_AS(phi_apply(p, shallow, 0.0, 2.0, q, false), InsufficientHistory);

  const GridFunction negative(-30.0, 0.1, std::vector<double>(400, -1.0));
  CHECK_THROWS_AS(phi_apply(p, negative, 0.0, 2.0, q, false), DomainError);
}

TEST_CASE("evaluator rejects foreign lattices and unresolved specs") {
  const ModelParams p = constant_model(1.3, 1.5, 2.5, 1.5);
  QuadratureSpec q;
  CHECK_THROWS_AS(PhiEvaluator(p, 0.0, 0.01, 100, q, false), DomainError);  // L unresolved

  q.L = 5.0;
  const PhiEvaluator ev(p, 0.0, 0.01, 100, q, false);
  const GridFunction wrong = GridFunction::constant(0.0, 0.02, 100, 1.0);
  CHECK_THROWS_AS(ev.apply(wrong), GridError);
}

TEST_CASE("truncated and plain applications agree under the cap") {
  const double m = 1.1, n = 1.2;
  const ModelParams p = constant_model(m, n, 2.6, 1.0);
  const double V = compute_V(m, n);

  QuadratureSpec q;
  q.L = tail_length(p, q.tail_tol);
  const double dt = 0.01;
  const double t0 = -(q.L + 1.0 + 3.0 * dt);
  const auto len = static_cast<std::size_t>(std::ceil((2.0 - t0) / dt)) + 1;
  const PhiEvaluator plain(p, t0, dt, len, q, false);
  const PhiEvaluator capped(p, t0, dt, len, q, true);

  const GridFunction below = GridFunction::constant(t0, dt, len, 0.8 * V);
  CHECK(GridFunction::sup_diff(plain.apply(below), capped.apply(below)) ==
        doctest::Approx(0.0).epsilon(1e-14));

  const GridFunction above = GridFunction::constant(t0, dt, len, 2.0 * V);
  const GridFunction d1 = plain.apply(above);
  const GridFunction d2 = capped.apply(above);
  CHECK(GridFunction::sup_diff(d2, d1) > 1e-3);  // cap binds above V
}
