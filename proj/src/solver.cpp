#include "apfix/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "apfix/errors.hpp"

namespace apfix {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

struct Lattice {
  double t0;
  double dt;
  std::size_t len;
};

/// Lattice anchored at 0 covering [-(pad_span), W].
Lattice make_lattice(double pad_span, double window_w, double dt) {
  const auto pad = static_cast<std::size_t>(std::ceil(pad_span / dt));
  const auto body = static_cast<std::size_t>(std::ceil(window_w / dt)) + 1;
  return Lattice{-static_cast<double>(pad) * dt, dt, pad + body};
}

double window_extreme(const GridFunction& x, double lo, double hi, bool want_max) {
  double best = want_max ? -std::numeric_limits<double>::infinity()
                         : std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double t = x.node_time(i);
    if (t < lo - 1e-9 * x.dt() || t > hi + 1e-9 * x.dt()) continue;
    best = want_max ? std::max(best, x[i]) : std::min(best, x[i]);
  }
  return best;
}

}  // namespace

double verification_dt(const ModelParams& p, double B) {
  // Want the centered-difference defect x'''*dt^2/6 below half of 1e-3.
  // x''' is driven by (b x)'' ~ curv(b)*B plus the production terms.
  double x3 = curvature_bound(p.b()) * B;
  const double fb = flux_sup_over(p.m(), p.n(), B);
  for (const auto& term : p.terms()) x3 += term.lambda * curvature_bound(term.r) * fb;
  if (!(x3 > 1.0)) return std::numeric_limits<double>::infinity();
  return std::sqrt(6.0 * 0.5e-3 / x3);
}

SolveResult solve(const ModelParams& p, const SolveOptions& opt) {
  if (!(opt.A > 0.0)) throw DomainError("bracket base A must be positive");
  if (!(opt.window_w > 0.0)) throw DomainError("solve window must be nondegenerate");
  if (!(opt.gap_tol > 0.0) || !(opt.tail_tol > 0.0))
    throw DomainError("tolerances must be positive");

  SolveResult res;
  res.selection = select_theorem(p, opt.A);
  if (!res.selection.chosen.applicable && !opt.force) {
    throw HypothesisViolation("no hypothesis chain passes at A = " + std::to_string(opt.A) +
                              "; pass force to iterate anyway");
  }

  const double m = p.m(), n = p.n();
  res.A = opt.A;
  res.B = compute_B(opt.A, m, n);
  res.V = (n > m) ? compute_V(m, n) : std::numeric_limits<double>::quiet_NaN();
  res.truncated = n > m;
  res.window_lo = 0.0;
  res.window_hi = opt.window_w;

  res.L = tail_length(p, opt.tail_tol, flux_sup_over(m, n, res.B));
  res.L = std::max(res.L, 1.0);

  double dt_a = opt.quad_dt;
  if (!(dt_a > 0.0)) {
    const double w_max = p.max_frequency();
    const double dt_freq =
        (w_max > 0.0) ? (kTwoPi / w_max) / 20.0 : std::numeric_limits<double>::infinity();
    // also keep the kernel decay resolved when the coefficients are slow
    const double b_scale = std::max({1.0, p.b_bounds().sup_est, -p.b_bounds().inf_est});
    dt_a = std::min(dt_freq, 0.02 / b_scale);
  }
  res.coarse_dt = dt_a;

  const double pad_span = res.L + p.upsilon() + 1.0;

  QuadratureSpec quad;
  quad.tail_tol = opt.tail_tol;
  quad.L = res.L;

  IterateOptions iopt;
  iopt.gap_tol = opt.gap_tol;
  iopt.max_iter = opt.max_iter;
  iopt.bracket_tol = 1e-6 * res.B + 10.0 * opt.tail_tol;

  // Phase 1: bracket between the constants A and B at quadrature resolution.
  const Lattice la = make_lattice(pad_span, opt.window_w, dt_a);
  PhiEvaluator ev_a(p, la.t0, la.dt, la.len, quad, res.truncated);
  MixedMonotoneOp op_a{[&ev_a](const GridFunction& x, const GridFunction&) {
    return ev_a.apply(x);
  }};
  IterateResult coarse = iterate(op_a, GridFunction::constant(la.t0, la.dt, la.len, res.A),
                                 GridFunction::constant(la.t0, la.dt, la.len, res.B), iopt);

  double dt_b = opt.refine_dt;
  if (dt_b == 0.0) dt_b = verification_dt(p, res.B);

  if (!(dt_b > 0.0) || dt_b >= dt_a) {
    // single-phase solve
    res.x = std::move(coarse.x);
    res.trace = std::move(coarse.trace);
    res.dt = dt_a;
    const GridFunction phix = ev_a.apply(res.x);
    double worst = 0.0;
    for (std::size_t i = 0; i < res.x.size(); ++i) {
      const double t = res.x.node_time(i);
      if (t < -1e-9 * res.x.dt() || t > opt.window_w + 1e-9 * res.x.dt()) continue;
      worst = std::max(worst, std::abs(phix[i] - res.x[i]));
    }
    res.phi_residual = worst;
    res.min_x_window = window_extreme(res.x, 0.0, opt.window_w, false);
    res.max_x_window = window_extreme(res.x, 0.0, opt.window_w, true);
    return res;
  }

  // Phase 2: continue on the verification lattice from the widened coarse
  // bracket. The widening absorbs the discretization shift between the two
  // lattices; on a sandwich failure it is grown and retried.
  const Lattice lb = make_lattice(pad_span, opt.window_w, dt_b);
  PhiEvaluator ev_b(p, lb.t0, lb.dt, lb.len, quad, res.truncated);
  MixedMonotoneOp op_b{[&ev_b](const GridFunction& x, const GridFunction&) {
    return ev_b.apply(x);
  }};

  const double osc_span = std::log(p.osc().F_s);  // 2 * sup of the oscillatory primitive
  const double w_max = p.max_frequency();
  double widen = std::max({30.0 * 0.5 * osc_span * w_max * w_max * dt_a * dt_a / 8.0,
                           2.0 * opt.gap_tol / res.B, 1e-9});

  IterateResult fine = [&] {
    for (int attempt = 0;; ++attempt) {
      GridFunction u0 = coarse.u.resampled(lb.t0, lb.dt, lb.len);
      GridFunction v0 = coarse.v.resampled(lb.t0, lb.dt, lb.len);
      std::vector<double> uv(u0.size()), vv(v0.size());
      for (std::size_t i = 0; i < u0.size(); ++i) {
        uv[i] = std::max(u0[i] * (1.0 - widen), res.A);
        vv[i] = std::min(v0[i] * (1.0 + widen), res.B);
      }
      try {
        return iterate(op_b, GridFunction(lb.t0, lb.dt, std::move(uv)),
                       GridFunction(lb.t0, lb.dt, std::move(vv)), iopt);
      } catch (const SandwichViolation&) {
        if (attempt >= 3) {
          return iterate(op_b, GridFunction::constant(lb.t0, lb.dt, lb.len, res.A),
                         GridFunction::constant(lb.t0, lb.dt, lb.len, res.B), iopt);
        }
        widen *= 8.0;
      }
    }
  }();

  res.refine_start_step = static_cast<int>(coarse.trace.steps.size());
  res.trace = std::move(coarse.trace);
  const int offset = res.trace.steps.empty() ? 0 : res.trace.steps.back().n + 1;
  for (const auto& s : fine.trace.steps) {
    IterationStep shifted = s;
    shifted.n += offset;
    res.trace.steps.push_back(shifted);
  }
  res.trace.converged = fine.trace.converged;
  res.trace.reason = fine.trace.reason;
  for (const auto& w : fine.trace.warnings) res.trace.warnings.push_back(w);
  res.trace.warnings.push_back("lattice refined to dt = " + std::to_string(dt_b) +
                               " after step " + std::to_string(offset - 1));

  res.x = std::move(fine.x);
  res.dt = dt_b;
  const GridFunction phix = ev_b.apply(res.x);
  double worst = 0.0;
  for (std::size_t i = 0; i < res.x.size(); ++i) {
    const double t = res.x.node_time(i);
    if (t < -1e-9 * res.x.dt() || t > opt.window_w + 1e-9 * res.x.dt()) continue;
    worst = std::max(worst, std::abs(phix[i] - res.x[i]));
  }
  res.phi_residual = worst;
  res.min_x_window = window_extreme(res.x, 0.0, opt.window_w, false);
  res.max_x_window = window_extreme(res.x, 0.0, opt.window_w, true);
  return res;
}

}  // namespace apfix
