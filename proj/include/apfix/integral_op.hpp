#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "apfix/grid.hpp"
#include "apfix/model.hpp"

namespace apfix {

/// How the improper production integral is truncated and discretized.
struct QuadratureSpec {
  double tail_tol = 1e-10;  ///< admissible mass of the discarded far tail
  double L = 0.0;           ///< truncation length; 0 = derive via tail_length
  double quad_dt = 0.0;     ///< coarsest admissible lattice step; 0 = no cap
  enum class Rule { Simpson, Trapezoid } rule = Rule::Simpson;
};

/// Cell-release nonlinearity u^m / (1 + u^n). Throws DomainError for u < 0.
double flux(double u, double m, double n);

/// flux continued as a constant above the cap V (Theorem-2 truncation).
double h_trunc(double u, double m, double n, double V);

/// sup of flux over [0, hi]: flux(hi) when n <= m (flux is nondecreasing),
/// flux(min(hi, V)) when n > m (flux peaks at V).
double flux_sup_over(double m, double n, double hi);

/// Smallest L with F_s * exp(-(b*)^- L) * sum(lambda r^+) * flux_bound /
/// (b*)^- <= tail_tol, a rigorous bound on the discarded tail mass.
/// Without an explicit flux_bound, 1 is used when n >= m (where
/// sup flux <= 1); for n < m a bound must be supplied.
double tail_length(const ModelParams& p, double tail_tol,
                   std::optional<double> flux_bound = std::nullopt);

/// Grid application of the production integral
///   (Phi x)(t) = int_{t-L}^{t} exp(-int_s^t b) sum_k lambda_k r_k(s)
///                g(x(s - tau_k(s))) ds,
/// with g = flux, or the truncated h when built with truncated = true.
///
/// Inputs and output share one lattice. Delayed lookups that fall left of
/// the lattice clamp to the first node, so the first L + upsilon of the
/// domain acts as a warm-up pad; values there are only approximate.
/// The operator commutes with that clamping in the ways the sandwich
/// iteration needs: it preserves pointwise order and scalar scaling.
///
/// Everything that does not depend on the iterate (coefficient samples,
/// kernel weights, delayed lookup positions) is precomputed once.
class PhiEvaluator {
 public:
  /// q.L must be resolved (> 0) by the caller. truncated requires n > m.
  PhiEvaluator(const ModelParams& p, double t0, double dt, std::size_t len,
               const QuadratureSpec& q, bool truncated);

  GridFunction apply(const GridFunction& x) const;

  double t0() const { return t0_; }
  double dt() const { return dt_; }
  std::size_t len() const { return len_; }
  double L() const { return L_; }
  double trunc_cap() const { return trunc_cap_; }  // 0 when not truncated

 private:
  double t0_, dt_;
  std::size_t len_;
  double L_;
  double m_, n_;
  bool truncated_;
  double trunc_cap_ = 0.0;
  QuadratureSpec::Rule rule_;
  std::size_t pad_;  // quadrature window in steps, even

  // indexed over the coefficient lattice j in [0, len + pad)
  std::vector<double> weight_;           // exp(B(s_j) - Bref)
  std::vector<std::vector<double>> rk_;  // lambda_k * r_k(s_j)
  std::vector<std::vector<std::int32_t>> didx_;  // delayed lookup base index
  std::vector<std::vector<float>> dfrac_;        // delayed lookup fraction
};

/// One-shot operator application on an explicit output window.
/// Requires x > 0 on a domain covering [w0 - L - upsilon, w1]
/// (InsufficientHistory otherwise); the result lives on x's lattice nodes
/// inside [w0, w1].
GridFunction phi_apply(const ModelParams& p, const GridFunction& x, double w0, double w1,
                       const QuadratureSpec& q, bool truncated);

/// Antiderivative of b evaluated anywhere: exact when b admits one, else a
/// cumulative-quadrature grid over [lo, hi] at the given step.
class LossRateIntegral {
 public:
  LossRateIntegral(const APExpr& b, double lo, double hi, double step);
  /// int_0^t-style primitive (arbitrary additive constant).
  double eval(double t) const;
  /// int_s^t b(u) du.
  double between(double s, double t) const { return eval(t) - eval(s); }

 private:
  std::optional<APExpr> exact_;
  double lo_ = 0.0, step_ = 0.0;
  std::vector<double> cumulative_;
};

}  // namespace apfix
