#include "apfix/fixedpoint.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "apfix/errors.hpp"

namespace apfix {

double phi_gamma(double gamma, double A, double m, double n) {
  if (!(gamma > 0.0)) throw DomainError("phi is defined for gamma > 0");
  const double An = std::pow(A, n);
  return std::pow(gamma, m) * (1.0 + An) / (1.0 + std::pow(gamma, n) * An);
}

double M_gamma(double gamma, double A, double m, double n) {
  if (!(gamma > 0.0)) throw DomainError("M is defined for gamma > 0");
  const double An = std::pow(A, n);
  return std::pow(gamma, m - 1.0) * (1.0 + An) - (1.0 + std::pow(gamma, n) * An);
}

double gamma_max(double A, double m, double n) {
  if (!(A > 0.0)) throw DomainError("A must be positive");
  if (!(n - m + 1.0 > 0.0))
    throw RegimeUnsupported("gamma_max needs n - m + 1 > 0 (open problem otherwise)");
  const double An = std::pow(A, n);
  return std::pow((m - 1.0) * (1.0 + An) / (n * An), 1.0 / (n - m + 1.0));
}

double theta_gamma(double gamma, double A, double m, double n) {
  return std::min(phi_gamma(gamma, A, m, n), 1.0);
}

double lambda_of(const GridFunction& u, const GridFunction& v) {
  if (!u.same_lattice(v)) throw GridError("lambda_of needs matching lattices");
  double lam = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (!(v[i] > 0.0)) throw DomainError("lambda_of needs v > 0");
    lam = std::min(lam, u[i] / v[i]);
  }
  return std::min(lam, 1.0);
}

namespace {

IterationStep make_step(int n, const GridFunction& u, const GridFunction& v) {
  IterationStep s;
  s.n = n;
  s.lambda = lambda_of(u, v);
  s.gap = GridFunction::sup_diff(v, u);
  s.sup_u = u.max_value();
  s.inf_u = u.min_value();
  return s;
}

void check_bracket(const GridFunction& lo, const GridFunction& hi, double tol,
                   const char* what) {
  double worst = 0.0, where = lo.t0();
  for (std::size_t i = 0; i < lo.size(); ++i) {
    const double d = lo[i] - hi[i];
    if (d > worst) {
      worst = d;
      where = lo.node_time(i);
    }
  }
  if (worst > tol) {
    throw SandwichViolation(std::string(what) + " violated by " + std::to_string(worst) +
                                " at t = " + std::to_string(where),
                            where, worst);
  }
}

}  // namespace

namespace {

GridFunction midpoint_of(const GridFunction& u, const GridFunction& v) {
  std::vector<double> mid(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) mid[i] = 0.5 * (u[i] + v[i]);
  return GridFunction(u.t0(), u.dt(), std::move(mid));
}

}  // namespace

IterateResult iterate(const MixedMonotoneOp& op, GridFunction u0, GridFunction v0,
                      const IterateOptions& opt) {
  if (!u0.same_lattice(v0)) throw GridError("bracket endpoints need one lattice");
  check_bracket(u0, v0, opt.bracket_tol, "u0 <= v0");

  IterationTrace trace;
  const double sup_v0 = v0.max_value();
  trace.steps.push_back(make_step(0, u0, v0));
  if (trace.steps.back().gap <= opt.gap_tol) {
    trace.converged = true;
    trace.reason = StopReason::GapTol;
    return IterateResult{midpoint_of(u0, v0), u0, v0, std::move(trace)};
  }

  GridFunction u1 = op.apply(u0, v0);
  GridFunction v1 = op.apply(v0, u0);
  check_bracket(u0, u1, opt.bracket_tol, "u0 <= Phi(u0, v0)");
  check_bracket(v1, v0, opt.bracket_tol, "Phi(v0, u0) <= v0");

  GridFunction u = std::move(u1), v = std::move(v1);
  for (int n = 1;; ++n) {
    IterationStep step = make_step(n, u, v);
    trace.steps.push_back(step);

    const double lambda_gap = (1.0 - step.lambda) * sup_v0;
    if (step.gap <= opt.gap_tol) {
      trace.converged = true;
      trace.reason = StopReason::GapTol;
      if (lambda_gap > 10.0 * std::max(step.gap, opt.gap_tol)) {
        trace.warnings.push_back("gap criterion met while (1 - lambda_n) sup v0 = " +
                                 std::to_string(lambda_gap) +
                                 " lags more than 10x behind; bracket ratio converges "
                                 "slower than the gap");
      }
      break;
    }
    if (lambda_gap <= opt.gap_tol) {
      trace.converged = true;
      trace.reason = StopReason::LambdaTol;
      break;
    }
    if (n >= opt.max_iter) {
      trace.converged = false;
      trace.reason = StopReason::MaxIter;
      break;
    }

    GridFunction un = op.apply(u, v);
    GridFunction vn = op.apply(v, u);
    u = std::move(un);
    v = std::move(vn);
  }

  return IterateResult{midpoint_of(u, v), std::move(u), std::move(v), std::move(trace)};
}

}  // namespace apfix
