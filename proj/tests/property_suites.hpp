#pragma once

// Randomized invariant suites shared by the property test binary and the
// acceptance harness. Each suite runs at least 100 generated cases and
// returns the number of violations (0 = clean).

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <vector>

#include "apfix/errors.hpp"
#include "apfix/expr.hpp"
#include "apfix/fixedpoint.hpp"
#include "apfix/integral_op.hpp"
#include "apfix/model.hpp"

namespace property_suites {

using namespace apfix;

struct Rng {
  std::mt19937_64 gen;
  explicit Rng(std::uint64_t seed) : gen(seed) {}
  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(gen);
  }
  int pick(int n) { return static_cast<int>(gen() % static_cast<std::uint64_t>(n)); }
};

inline ModelParams constant_model(double m, double n, double r, double b, double tau) {
  std::vector<ModelTerm> terms;
  terms.push_back(ModelTerm{1.0, APExpr::constant(r), APExpr::constant(tau), {}, {}});
  return ModelParams::create(m, n, std::move(terms), APExpr::constant(b));
}

inline double chain_value(double x, double m, double n) {
  return (1.0 + std::pow(x, n)) / std::pow(x, m - 1.0);
}

struct ConstantCase {
  double m, n, A, B, r, b;
  bool capped;
};

inline ConstantCase random_constant_case(Rng& rng, bool capped_regime) {
  for (;;) {
    const double m = rng.uniform(1.05, 1.6);
    const double n =
        capped_regime ? m + rng.uniform(0.05, 0.35) : rng.uniform(std::max(0.25, m - 0.85), m);
    const double thr = threshold_A(m, n);
    double A_pick = thr * rng.uniform(1.3, 3.0);
    if (capped_regime) A_pick = std::min(A_pick, compute_V(m, n) * 0.999);
    if (A_pick <= thr * 1.02) continue;
    const double A = A_pick;
    const double B = compute_B(A, m, n);
    if (capped_regime && !(compute_V(m, n) <= B)) continue;
    const double lo = chain_value(A, m, n);
    const double hi = capped_regime ? compute_V(m, n) : chain_value(B, m, n);
    if (!(hi > lo * 1.002)) continue;
    const double b = rng.uniform(0.6, 1.6);
    const double ratio = lo + rng.uniform(0.05, 0.95) * (hi - lo);
    return ConstantCase{m, n, A, B, ratio * b, b, capped_regime};
  }
}

struct OpRig {
  ModelParams p;
  PhiEvaluator ev;
  double t0;
  double dt;
  std::size_t len;

  OpRig(ModelParams params, double dt_, double window, double B_hint, bool truncated)
      : p(std::move(params)),
        ev(p, rig_t0(p, dt_, B_hint), dt_, rig_len(p, dt_, window, B_hint), rig_spec(p, B_hint),
           truncated),
        t0(ev.t0()),
        dt(ev.dt()),
        len(ev.len()) {}

  static QuadratureSpec rig_spec(const ModelParams& p, double B_hint) {
    QuadratureSpec q;
    q.tail_tol = 1e-9;
    q.L = tail_length(p, q.tail_tol, flux_sup_over(p.m(), p.n(), B_hint));
    return q;
  }
  static double rig_t0(const ModelParams& p, double dt, double B_hint) {
    const double L = rig_spec(p, B_hint).L;
    return -std::ceil((L + p.upsilon() + 0.5) / dt) * dt;
  }
  static std::size_t rig_len(const ModelParams& p, double dt, double window, double B_hint) {
    const double t0 = rig_t0(p, dt, B_hint);
    return static_cast<std::size_t>(std::ceil((window - t0) / dt)) + 1;
  }

  GridFunction constant(double c) const { return GridFunction::constant(t0, dt, len, c); }
  GridFunction from(const std::function<double(double)>& f) const {
    std::vector<double> v(len);
    for (std::size_t i = 0; i < len; ++i) v[i] = f(t0 + dt * static_cast<double>(i));
    return GridFunction(t0, dt, std::move(v));
  }
};

inline ModelParams random_oscillating_model(Rng& rng, bool capped_regime) {
  const double m = rng.uniform(1.05, 1.5);
  const double n = capped_regime ? m + rng.uniform(0.05, 0.4)
                                 : rng.uniform(std::max(0.3, m - 0.8), m);
  const double b0 = rng.uniform(0.7, 1.4);
  const double amp = (rng.pick(3) == 0) ? b0 * rng.uniform(1.02, 1.25)
                                        : b0 * rng.uniform(0.05, 0.6);
  APExpr b = APExpr::sum({APExpr::constant(b0), APExpr::sine(amp, rng.uniform(0.6, 2.5))});

  std::vector<ModelTerm> terms;
  const int nterms = 1 + rng.pick(2);
  for (int k = 0; k < nterms; ++k) {
    const double r0 = rng.uniform(0.8, 2.5);
    APExpr r = APExpr::sum(
        {APExpr::constant(r0),
         APExpr::scale(r0 * rng.uniform(0.02, 0.2),
                       APExpr::abs_of(APExpr::cosine(1.0, rng.uniform(0.7, 2.0))))});
    APExpr tau = APExpr::sum(
        {APExpr::constant(rng.uniform(0.3, 1.2)),
         APExpr::scale(rng.uniform(0.1, 0.4),
                       APExpr::abs_of(APExpr::sine(1.0, rng.uniform(0.5, 1.5))))});
    terms.push_back(ModelTerm{rng.uniform(0.5, 1.5), std::move(r), std::move(tau), {}, {}});
  }
  return ModelParams::create(m, n, std::move(terms), std::move(b));
}

inline APExpr random_tree(Rng& rng, int depth) {
  const int kind = (depth <= 0) ? rng.pick(2) : rng.pick(7);
  switch (kind) {
    case 0: return APExpr::constant(rng.uniform(-2.0, 2.0));
    case 1:
      return rng.pick(2) ? APExpr::sine(rng.uniform(-2.0, 2.0), rng.uniform(0.2, 5.0),
                                        rng.uniform(0.0, 6.28))
                         : APExpr::cosine(rng.uniform(-2.0, 2.0), rng.uniform(0.2, 5.0),
                                          rng.uniform(0.0, 6.28));
    case 2: return APExpr::abs_of(random_tree(rng, depth - 1));
    case 3: return APExpr::exp_of(random_tree(rng, depth - 1));
    case 4: return APExpr::scale(rng.uniform(-1.5, 1.5), random_tree(rng, depth - 1));
    case 5: {
      std::vector<APExpr> kids;
      const int n = 2 + rng.pick(2);
      for (int i = 0; i < n; ++i) kids.push_back(random_tree(rng, depth - 1));
      return APExpr::sum(std::move(kids));
    }
    default: {
      std::vector<APExpr> kids;
      for (int i = 0; i < 2; ++i) kids.push_back(random_tree(rng, depth - 1));
      return APExpr::product(std::move(kids));
    }
  }
}

// --- suites ----------------------------------------------------------------

/// u_n <= u_{n+1} <= v_{n+1} <= v_n and the lambda ratchet, random instances.
inline int suite_sandwich_and_lambda(int& cases_run) {
  Rng rng(0xa11ce);
  int violations = 0;
  int cases = 0;
  while (cases < 110) {
    const ConstantCase c = random_constant_case(rng, cases % 3 == 2);
    const ModelParams p = constant_model(c.m, c.n, c.r, c.b, rng.uniform(0.4, 1.2));
    OpRig rig(p, 0.05, 1.0, c.B, c.capped);

    GridFunction u = rig.constant(c.A);
    GridFunction v = rig.constant(c.B);
    double last_lambda = lambda_of(u, v);
    for (int step = 0; step < 6; ++step) {
      GridFunction un = rig.ev.apply(u);
      GridFunction vn = rig.ev.apply(v);
      const double tol = 1e-7 * c.B;
      if (!GridFunction::leq(u, un, tol)) ++violations;
      if (!GridFunction::leq(un, vn, tol)) ++violations;
      if (!GridFunction::leq(vn, v, tol)) ++violations;
      u = std::move(un);
      v = std::move(vn);

      const double lam = lambda_of(u, v);
      if (lam < last_lambda - 1e-9) ++violations;
      if (lam > 1.0) ++violations;
      last_lambda = lam;
    }
    ++cases;
  }
  cases_run = cases;
  return violations;
}

/// phi(gamma) > gamma over [A/B, 1) for random admissible (m, n, A).
inline int suite_phi_exceeds_gamma(int& cases_run) {
  Rng rng(0xbeef);
  int violations = 0;
  for (int cases = 0; cases < 120; ++cases) {
    const double m = rng.uniform(1.02, 2.2);
    const double n = rng.uniform(std::max(0.15, m - 0.95), m + 0.8);
    const double thr = threshold_A(m, n);
    const double A = thr * rng.uniform(1.001, 6.0);
    const double B = compute_B(A, m, n);
    if (!(B > A)) ++violations;
    const double g0 = A / B;
    for (int i = 0; i < 200; ++i) {
      const double g = g0 + (1.0 - g0) * static_cast<double>(i) / 200.0;
      if (!(phi_gamma(g, A, m, n) > g)) ++violations;
    }
  }
  cases_run = 120;
  return violations;
}

/// x <= y pointwise implies Phi x <= Phi y pointwise.
inline int suite_operator_monotone(int& cases_run) {
  Rng rng(0xc0de);
  int violations = 0;
  for (int cases = 0; cases < 110; ++cases) {
    const bool capped = cases % 2 == 1;
    const ModelParams p = random_oscillating_model(rng, capped);
    OpRig rig(p, 0.08, 1.5, 3.0, capped);

    const double base = rng.uniform(0.3, 1.5);
    const double w1 = rng.uniform(0.4, 1.8), w2 = rng.uniform(0.3, 1.1);
    const double lift = rng.uniform(0.0, 0.01);
    const GridFunction x = rig.from([&](double t) {
      const double s = std::sin(w1 * t + 0.3);
      return base + 0.25 * base * s * s;
    });
    const GridFunction y = rig.from([&](double t) {
      const double s = std::sin(w1 * t + 0.3);
      const double c = std::cos(w2 * t);
      return base + 0.25 * base * s * s + lift + 0.2 * base * c * c;
    });
    if (!GridFunction::leq(x, y)) ++violations;
    if (!GridFunction::leq(rig.ev.apply(x), rig.ev.apply(y), 1e-12)) ++violations;
  }
  cases_run = 110;
  return violations;
}

/// Phi(gamma x) >= phi(gamma) Phi(x) and the produced positive floor.
inline int suite_operator_scaling_and_cone(int& cases_run) {
  Rng rng(0xd1ce);
  int violations = 0;
  for (int cases = 0; cases < 110; ++cases) {
    const bool capped = cases % 2 == 0;
    const ModelParams p = random_oscillating_model(rng, capped);
    OpRig rig(p, 0.08, 1.5, 3.0, capped);

    const double lo = rng.uniform(0.4, 1.0);
    const double hi = lo * rng.uniform(1.3, 2.5);
    const double wf = rng.uniform(0.4, 1.6);
    const GridFunction x = rig.from([&](double t) {
      const double s = 0.5 + 0.5 * std::sin(wf * t);
      return lo + (hi - lo) * s;
    });

    const double gamma = rng.uniform(lo / hi, 0.999);
    const GridFunction px = rig.ev.apply(x);
    std::vector<double> scaled(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) scaled[i] = gamma * x[i];
    const GridFunction pgx = rig.ev.apply(GridFunction(rig.t0, rig.dt, std::move(scaled)));
    const double gain = capped ? theta_gamma(gamma, lo, p.m(), p.n())
                               : phi_gamma(gamma, lo, p.m(), p.n());
    for (std::size_t i = 0; i < px.size(); ++i)
      if (!(pgx[i] >= gain * px[i] - 1e-9 * (1.0 + px[i]))) ++violations;

    const double eps = lo;
    const double cap = capped ? compute_V(p.m(), p.n()) : std::numeric_limits<double>::infinity();
    const double produced =
        p.sum_lambda_r_inf() / p.b_bounds().sup_est * h_trunc(eps, p.m(), p.n(), cap);
    const double floor = produced * (1.0 - 1e-6) - 1e-6;
    for (std::size_t i = 0; i < px.size(); ++i) {
      if (px.node_time(i) < rig.t0 + rig.ev.L() + p.upsilon()) continue;
      if (!(px[i] >= floor)) ++violations;
    }
  }
  cases_run = 110;
  return violations;
}

/// exp(-int_s^t b) <= F_s exp(-int_s^t b*) over random pairs and loss rates.
inline int suite_kernel_domination(int& pairs_checked) {
  Rng rng(0xfeed);
  int violations = 0;
  pairs_checked = 0;
  for (int cases = 0; cases < 25; ++cases) {
    const double b0 = rng.uniform(0.4, 1.5);
    std::vector<APExpr> parts{APExpr::constant(b0)};
    const int waves = 1 + rng.pick(2);
    for (int w = 0; w < waves; ++w) {
      const double amp = b0 * rng.uniform(0.2, 1.6);
      parts.push_back(rng.pick(2) ? APExpr::sine(amp, rng.uniform(0.5, 30.0))
                                  : APExpr::cosine(amp, rng.uniform(0.5, 30.0),
                                                   rng.uniform(0.0, 6.28)));
    }
    const APExpr b = APExpr::sum(std::move(parts));
    const OscillationBound osc = derive_oscillation_bound(b);
    const auto P = antiderivative(b);
    const auto Pstar = antiderivative(osc.b_star);
    if (!P || !Pstar) {
      ++violations;
      continue;
    }
    for (int i = 0; i < 420; ++i) {
      double s = rng.uniform(-25.0, 25.0), t = rng.uniform(-25.0, 25.0);
      if (s > t) std::swap(s, t);
      const double lhs = std::exp(-(P->eval(t) - P->eval(s)));
      const double rhs = osc.F_s * std::exp(-(Pstar->eval(t) - Pstar->eval(s)));
      if (!(lhs <= rhs * (1.0 + 1e-12))) ++violations;
      ++pairs_checked;
    }
  }
  return violations;
}

/// Capped nonlinearity: continuity at the cap, monotonicity, ratio bound.
inline int suite_capped_ratio_bound(int& cases_run) {
  Rng rng(0x5eed);
  int violations = 0;
  for (int cases = 0; cases < 120; ++cases) {
    const double m = rng.uniform(1.05, 1.6);
    const double n = m + rng.uniform(0.05, 0.5);
    const double V = compute_V(m, n);
    const double thr = threshold_A(m, n);
    const double A = std::min(thr * rng.uniform(1.05, 3.0), V * 0.99);
    const double B = compute_B(A, m, n);

    const double below = h_trunc(V * (1.0 - 1e-9), m, n, V);
    const double at = h_trunc(V, m, n, V);
    if (!(std::abs(below - at) <= 1e-8 * at)) ++violations;

    double prev = 0.0;
    for (int i = 1; i <= 50; ++i) {
      const double u = 2.0 * V * static_cast<double>(i) / 50.0;
      const double hu = h_trunc(u, m, n, V);
      if (!(hu >= prev - 1e-15)) ++violations;
      prev = hu;
    }

    for (int i = 0; i < 40; ++i) {
      const double gamma = rng.uniform(A / B, 0.9999);
      const double x = rng.uniform(A, B);
      const double ratio = h_trunc(gamma * x, m, n, V) / h_trunc(x, m, n, V);
      const double bound = (x <= V / gamma) ? phi_gamma(gamma, A, m, n) : 1.0;
      if (!(ratio >= bound * (1.0 - 1e-12))) ++violations;
    }
  }
  cases_run = 120;
  return violations;
}

/// Random expression trees: sampled evaluations stay inside estimated bounds.
inline int suite_bounds_containment(int& cases_run) {
  Rng rng(0x90ad);
  int violations = 0;
  for (int cases = 0; cases < 120; ++cases) {
    const APExpr f = random_tree(rng, 2);
    const BoundsEstimate be = estimate_bounds(f, 0.0, 60.0, 0.01);
    for (int i = 0; i < 100; ++i) {
      const double v = f.eval(rng.uniform(0.0, 60.0));
      if (!(v >= be.inf_est - 1e-9 * (1.0 + std::abs(be.inf_est)))) ++violations;
      if (!(v <= be.sup_est + 1e-9 * (1.0 + std::abs(be.sup_est)))) ++violations;
    }
  }
  cases_run = 120;
  return violations;
}

/// Capped and plain applications coincide below the cap.
inline int suite_cap_inactive_below_V(int& cases_run) {
  Rng rng(0xaced);
  int violations = 0;
  for (int cases = 0; cases < 100; ++cases) {
    const ModelParams p = random_oscillating_model(rng, true);
    const double V = compute_V(p.m(), p.n());
    OpRig plain(p, 0.1, 1.0, V, false);
    OpRig capped(p, 0.1, 1.0, V, true);

    const double wf = rng.uniform(0.5, 1.5);
    const double mid = rng.uniform(0.2, 0.8) * V;
    const GridFunction x =
        plain.from([&](double t) { return mid * (0.75 + 0.2 * std::sin(wf * t)); });
    if (!(x.max_value() <= V)) ++violations;
    const GridFunction a = plain.ev.apply(x);
    const GridFunction b = capped.ev.apply(x);
    const double tol = 1e-13 * (1.0 + a.max_value());
    if (std::abs(GridFunction::sup_diff(a, b)) > tol) ++violations;
    if (std::abs(GridFunction::sup_diff(b, a)) > tol) ++violations;
  }
  cases_run = 100;
  return violations;
}

}  // namespace property_suites
