#pragma once

#include "apfix/fixedpoint.hpp"
#include "apfix/integral_op.hpp"
#include "apfix/model.hpp"

namespace apfix {

struct SolveOptions {
  double A = 0.0;           ///< lower bracket constant
  double gap_tol = 1e-6;
  double tail_tol = 1e-10;
  double quad_dt = 0.0;     ///< 0 = (2*pi/omega_max)/20, constants fallback
  double refine_dt = 0.0;   ///< 0 = auto from coefficient curvature; < 0 = off
  double window_w = 40.0;   ///< solve window is [0, W]
  int max_iter = 400;
  bool force = false;       ///< iterate even when no hypothesis chain passes
};

struct SolveResult {
  /// full work lattice, window [0, W] plus warm-up pad
  GridFunction x{0.0, 1.0, std::vector<double>(2, 0.0)};
  IterationTrace trace;
  TheoremSelection selection;
  bool truncated = false;  ///< capped nonlinearity used (n > m path)
  double A = 0.0, B = 0.0, V = 0.0;  // V is NaN outside the n > m regime
  double L = 0.0;
  double dt = 0.0;          ///< final lattice step
  double coarse_dt = 0.0;   ///< bracketing-phase step
  double phi_residual = 0.0;  ///< sup |Phi x - x| over the window
  double window_lo = 0.0, window_hi = 0.0;
  double min_x_window = 0.0, max_x_window = 0.0;
  int refine_start_step = -1;  ///< trace index where the fine phase began
};

/// Runs the sandwich iteration for the model at bracket base A:
///   1. checks which hypothesis chain applies (HypothesisViolation when none
///      does, unless forced),
///   2. brackets the fixed point between the constants A and B on a lattice
///      resolved for the quadrature,
///   3. re-iterates on a finer lattice sized so that derivative-level
///      verification of the result is meaningful, restarting from the
///      slightly widened coarse bracket.
/// The production integral is the capped variant exactly when n > m.
SolveResult solve(const ModelParams& p, const SolveOptions& opt);

/// Lattice step fine enough that a centered-difference residual check on the
/// solution resolves the fastest coefficient oscillation; infinity when the
/// coefficients carry no curvature.
double verification_dt(const ModelParams& p, double B);

}  // namespace apfix
