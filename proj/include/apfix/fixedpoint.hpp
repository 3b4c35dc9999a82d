#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "apfix/grid.hpp"

namespace apfix {

/// Per-step record of the sandwich iteration.
struct IterationStep {
  int n = 0;
  double lambda = 0.0;  // max ratio with u_n >= lambda * v_n
  double gap = 0.0;     // sup(v_n - u_n)
  double sup_u = 0.0;
  double inf_u = 0.0;
};

enum class StopReason { GapTol, LambdaTol, MaxIter };

struct IterationTrace {
  std::vector<IterationStep> steps;
  bool converged = false;
  StopReason reason = StopReason::MaxIter;
  std::vector<std::string> warnings;
};

/// Two-slot operator on grid functions, nondecreasing in the first argument
/// and nonincreasing in the second. The production-integral instance ignores
/// its second slot (it is plainly nondecreasing).
struct MixedMonotoneOp {
  std::function<GridFunction(const GridFunction&, const GridFunction&)> apply;
};

struct IterateOptions {
  double gap_tol = 1e-6;
  int max_iter = 300;
  /// Slack for the initial-bracket condition u0 <= op(u0,v0),
  /// op(v0,u0) <= v0; set to ~10x the operator's quadrature error.
  double bracket_tol = 0.0;
};

/// gamma^m (1 + A^n) / (1 + gamma^n A^n); the scaling comparison function.
/// Throws DomainError for gamma <= 0.
double phi_gamma(double gamma, double A, double m, double n);

/// gamma^(m-1)(1+A^n) - (1+gamma^n A^n): positive exactly where
/// phi_gamma(gamma) > gamma.
double M_gamma(double gamma, double A, double m, double n);

/// Argmax of M_gamma: [(m-1)(1+A^n)/(n A^n)]^(1/(n-m+1)), which equals A/B.
double gamma_max(double A, double m, double n);

/// min(phi_gamma, 1); the scaling function of the truncated operator.
double theta_gamma(double gamma, double A, double m, double n);

/// Largest lambda with u >= lambda * v on the lattice, clamped to <= 1.
/// Requires matching lattices (GridError) and v > 0 (DomainError).
double lambda_of(const GridFunction& u, const GridFunction& v);

struct IterateResult {
  GridFunction x;  ///< midpoint of the final bracket
  GridFunction u;  ///< final lower iterate
  GridFunction v;  ///< final upper iterate
  IterationTrace trace;
};

/// Sandwich iteration u_{n+1} = op(u_n, v_n), v_{n+1} = op(v_n, u_n) from a
/// bracket u0 <= v0 down to sup(v_n - u_n) <= gap_tol, also stopping when
/// (1 - lambda_n) * sup v0 <= gap_tol. The returned solution is the bracket
/// midpoint.
///
/// Throws SandwichViolation when the initial bracket fails
/// u0 <= op(u0, v0) or op(v0, u0) <= v0 beyond bracket_tol.
IterateResult iterate(const MixedMonotoneOp& op, GridFunction u0, GridFunction v0,
                      const IterateOptions& opt);

}  // namespace apfix
