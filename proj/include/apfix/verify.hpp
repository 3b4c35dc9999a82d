#pragma once

#include <cstdint>

#include "apfix/grid.hpp"
#include "apfix/integral_op.hpp"
#include "apfix/model.hpp"

namespace apfix {

/// Independent checks of a candidate solution against the differential form
/// and the variation-of-constants identity.
struct ResidualReport {
  double sup_ode_residual = 0.0;
  double sup_voc_residual = 0.0;
  double drift_horizon = 0.0;
  double sup_drift = 0.0;
  std::int64_t sample_count = 0;
};

struct DdeResult {
  GridFunction x;
  bool positivity_loss = false;
  double first_loss_time = 0.0;
};

/// Classical fourth-order one-step march of
///   x'(t) = sum_k lambda_k r_k(t) flux(x(t - tau_k(t))) - b(t) x(t)
/// over [t_begin, t_end]. Delayed values come from the supplied history for
/// t <= t_begin and from a cubic interpolation of the already-computed
/// nodes afterwards. The history must cover [t_begin - upsilon - step,
/// t_begin] (InsufficientHistory otherwise).
///
/// A nonpositive state is reported through the result, not thrown; the
/// march continues from a tiny positive value.
DdeResult dde_integrate(const ModelParams& p, const GridFunction& history, double t_begin,
                        double t_end, double step);

/// sup over interior lattice nodes of |x'(t) - RHS(t)| with x' from centered
/// differences; nodes whose delayed lookups leave the domain are skipped.
double ode_residual(const ModelParams& p, const GridFunction& x);

/// | x(t) - [ x(t1) e^{-int_{t1}^t b} + int_{t1}^t e^{-int_s^t b}
///   sum_k lambda_k r_k(s) flux(x(s - tau_k(s))) ds ] |,
/// with t1 and t snapped to lattice nodes. Zero (up to quadrature) for any
/// genuine solution.
double voc_check(const ModelParams& p, const GridFunction& x, double t1, double t);

/// Re-integrates the equation seeded with x as its own history and returns
/// sup |trajectory - x| over [t_begin, t_begin + horizon]. A diagnostic:
/// the theory proves existence and uniqueness, not attractivity.
DdeResult drift_trajectory(const ModelParams& p, const GridFunction& x, double t_begin,
                           double horizon, double step);
double max_drift(const ModelParams& p, const GridFunction& x, double t_begin, double horizon,
                 double step);

/// Bundles the three checks: ODE residual over the window, the
/// variation-of-constants defect at `voc_pairs` seeded random (t1, t) pairs,
/// and the drift diagnostic.
ResidualReport residual_report(const ModelParams& p, const GridFunction& x, double window_lo,
                               double window_hi, double horizon, double dde_step, int voc_pairs,
                               std::uint64_t seed);

}  // namespace apfix
