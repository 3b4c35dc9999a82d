#include "apfix/verify.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "apfix/errors.hpp"

namespace apfix {

namespace {

double safe_flux(double u, double m, double n) {
  return flux(std::max(u, 0.0), m, n);
}

/// Dense trajectory being built by the method of steps: node values plus
/// node slopes, interpolated with a cubic between nodes.
struct DenseTrajectory {
  double t0 = 0.0;
  double h = 0.0;
  std::vector<double> y;
  std::vector<double> slope;

  double eval(double t, std::size_t front) const {
    double pos = (t - t0) / h;
    pos = std::clamp(pos, 0.0, static_cast<double>(front));
    auto i = static_cast<std::size_t>(pos);
    if (i >= front) i = front - 1;
    const double th = pos - static_cast<double>(i);
    const double th2 = th * th, th3 = th2 * th;
    return (2.0 * th3 - 3.0 * th2 + 1.0) * y[i] + (th3 - 2.0 * th2 + th) * h * slope[i] +
           (-2.0 * th3 + 3.0 * th2) * y[i + 1] + (th3 - th2) * h * slope[i + 1];
  }
};

}  // namespace

DdeResult dde_integrate(const ModelParams& p, const GridFunction& history, double t_begin,
                        double t_end, double step) {
  if (!(step > 0.0)) throw DomainError("integration step must be positive");
  if (!(t_end > t_begin)) throw DomainError("integration span must be nondegenerate");
  const double upsilon = p.upsilon();
  const double slack = 1e-9 * step;
  if (history.t0() > t_begin - upsilon + slack || history.t_end() < t_begin - slack) {
    throw InsufficientHistory("history must cover [" + std::to_string(t_begin - upsilon) + ", " +
                              std::to_string(t_begin) + "]");
  }

  const auto steps = static_cast<std::size_t>(std::ceil((t_end - t_begin) / step - 1e-9));
  const double h = (t_end - t_begin) / static_cast<double>(steps);

  DenseTrajectory traj;
  traj.t0 = t_begin;
  traj.h = h;
  traj.y.resize(steps + 1);
  traj.slope.resize(steps + 1);
  traj.y[0] = history.at_time_clamped(t_begin);

  bool lost_positivity = false;
  double first_loss = 0.0;

  // Delayed lookup: history for t <= t_begin, the dense trajectory up to the
  // current front otherwise, linear extrapolation past the front (only
  // reachable when some delay is shorter than the step).
  const auto delayed = [&](double t, std::size_t front, double front_t, double front_y,
                           double front_slope) -> double {
    if (t <= t_begin) return history.at_time_clamped(t);
    if (front > 0 && t <= traj.t0 + h * static_cast<double>(front)) return traj.eval(t, front);
    return front_y + (t - front_t) * front_slope;
  };

  const auto rhs = [&](double t, double xv, std::size_t front, double front_t, double front_y,
                       double front_slope) -> double {
    double production = 0.0;
    for (const auto& term : p.terms()) {
      const double lag = term.tau.eval(t);
      const double u = delayed(t - lag, front, front_t, front_y, front_slope);
      production += term.lambda * term.r.eval(t) * safe_flux(u, p.m(), p.n());
    }
    return production - p.b().eval(t) * xv;
  };

  for (std::size_t i = 0; i < steps; ++i) {
    const double t = t_begin + h * static_cast<double>(i);
    const double xi = traj.y[i];
    const double k1 = rhs(t, xi, i, t, xi, 0.0);
    traj.slope[i] = k1;
    const double k2 = rhs(t + 0.5 * h, xi + 0.5 * h * k1, i, t, xi, k1);
    const double k3 = rhs(t + 0.5 * h, xi + 0.5 * h * k2, i, t, xi, k1);
    const double k4 = rhs(t + h, xi + h * k3, i, t, xi, k1);
    double next = xi + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (next <= 0.0) {
      if (!lost_positivity) {
        lost_positivity = true;
        first_loss = t + h;
      }
      next = 1e-12;
    }
    traj.y[i + 1] = next;
  }
  traj.slope[steps] = rhs(t_end, traj.y[steps], steps, t_end, traj.y[steps], 0.0);

  return DdeResult{GridFunction(t_begin, h, std::move(traj.y)), lost_positivity, first_loss};
}

double ode_residual(const ModelParams& p, const GridFunction& x) {
  const double dt = x.dt();
  const double t0 = x.t0();
  double worst = 0.0;
  bool any = false;
  for (std::size_t i = 1; i + 1 < x.size(); ++i) {
    const double t = x.node_time(i);
    double production = 0.0;
    bool covered = true;
    for (const auto& term : p.terms()) {
      const double pos = t - term.tau.eval(t);
      if (pos < t0 - 1e-9 * dt) {
        covered = false;
        break;
      }
      production += term.lambda * term.r.eval(t) * safe_flux(x.at_time_clamped(pos), p.m(), p.n());
    }
    if (!covered) continue;
    any = true;
    const double deriv = (x[i + 1] - x[i - 1]) / (2.0 * dt);
    const double resid = std::abs(deriv - (production - p.b().eval(t) * x[i]));
    worst = std::max(worst, resid);
  }
  if (!any)
    throw InsufficientHistory("no interior node has all delayed lookups inside the domain");
  return worst;
}

double voc_check(const ModelParams& p, const GridFunction& x, double t1, double t) {
  if (!(t1 <= t)) throw DomainError("voc_check needs t1 <= t");
  const double dt = x.dt();
  auto snap = [&](double v) {
    auto i = static_cast<std::ptrdiff_t>(std::llround((v - x.t0()) / dt));
    i = std::clamp<std::ptrdiff_t>(i, 0, static_cast<std::ptrdiff_t>(x.size()) - 1);
    return static_cast<std::size_t>(i);
  };
  const std::size_t i1 = snap(t1), i2 = snap(t);
  if (i2 <= i1) return 0.0;
  if (x.node_time(i1) - p.upsilon() < x.t0() - 1e-9 * dt) {
    throw InsufficientHistory("voc_check needs t1 at least one delay span inside the domain");
  }

  LossRateIntegral bint(p.b(), x.t0(), x.t_end() + dt, dt);
  const double a = x.node_time(i1), b = x.node_time(i2);
  const double Bb = bint.eval(b);

  std::vector<double> g(i2 - i1 + 1);
  for (std::size_t j = i1; j <= i2; ++j) {
    const double s = x.node_time(j);
    double production = 0.0;
    for (const auto& term : p.terms())
      production += term.lambda * term.r.eval(s) *
                    safe_flux(x.at_time_clamped(s - term.tau.eval(s)), p.m(), p.n());
    g[j - i1] = std::exp(bint.eval(s) - Bb) * production;
  }

  double integral = 0.0;
  const std::size_t npts = g.size();
  if (npts == 2) {
    integral = 0.5 * dt * (g[0] + g[1]);
  } else {
    std::size_t j = 0;
    while (j + 2 < npts) {
      integral += dt / 3.0 * (g[j] + 4.0 * g[j + 1] + g[j + 2]);
      j += 2;
    }
    if (j + 1 < npts)  // one odd interval left; parabola through the last three
      integral += dt / 12.0 * (-g[j - 1] + 8.0 * g[j] + 5.0 * g[j + 1]);
  }

  const double predicted = x[i1] * std::exp(bint.eval(a) - Bb) + integral;
  return std::abs(x[i2] - predicted);
}

DdeResult drift_trajectory(const ModelParams& p, const GridFunction& x, double t_begin,
                           double horizon, double step) {
  if (t_begin + horizon > x.t_end() + 1e-9 * x.dt())
    throw GridError("drift horizon extends past the candidate's domain");
  return dde_integrate(p, x, t_begin, t_begin + horizon, step);
}

double max_drift(const ModelParams& p, const GridFunction& x, double t_begin, double horizon,
                 double step) {
  const DdeResult r = drift_trajectory(p, x, t_begin, horizon, step);
  double worst = 0.0;
  for (std::size_t i = 0; i < r.x.size(); ++i)
    worst = std::max(worst, std::abs(r.x[i] - x.at_time_clamped(r.x.node_time(i))));
  return worst;
}

ResidualReport residual_report(const ModelParams& p, const GridFunction& x, double window_lo,
                               double window_hi, double horizon, double dde_step, int voc_pairs,
                               std::uint64_t seed) {
  ResidualReport rep;
  rep.sup_ode_residual = ode_residual(p, x);

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> pick(0.0, 1.0);
  const double lo = std::max(window_lo, x.t0() + p.upsilon() + 2.0 * x.dt());
  const double hi = std::min(window_hi, x.t_end());
  double worst_voc = 0.0;
  for (int i = 0; i < voc_pairs; ++i) {
    const double t1 = lo + pick(rng) * std::max(hi - lo - 0.5, 0.0);
    const double len = 0.25 + pick(rng) * std::min(5.0, hi - t1 - 0.25);
    worst_voc = std::max(worst_voc, voc_check(p, x, t1, t1 + len));
  }
  rep.sup_voc_residual = worst_voc;

  rep.drift_horizon = std::min(horizon, hi - std::max(window_lo, lo));
  rep.sup_drift = max_drift(p, x, std::max(window_lo, lo), rep.drift_horizon, dde_step);

  std::int64_t nodes = 0;
  for (std::size_t i = 1; i + 1 < x.size(); ++i) ++nodes;
  rep.sample_count = nodes + voc_pairs;
  return rep;
}

}  // namespace apfix
