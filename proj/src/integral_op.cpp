#include "apfix/integral_op.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "apfix/errors.hpp"

namespace apfix {

double flux(double u, double m, double n) {
  if (u < 0.0) throw DomainError("flux argument must be nonnegative, got " + std::to_string(u));
  if (u == 0.0) return 0.0;
  const double lu = std::log(u);
  return std::exp(m * lu) / (1.0 + std::exp(n * lu));
}

double h_trunc(double u, double m, double n, double V) {
  if (!(V > 0.0)) throw DomainError("truncation cap must be positive");
  return flux(std::min(u, V), m, n);
}

double flux_sup_over(double m, double n, double hi) {
  if (!(hi > 0.0)) return 0.0;
  if (n > m) return flux(std::min(hi, compute_V(m, n)), m, n);
  return flux(hi, m, n);
}

double tail_length(const ModelParams& p, double tail_tol, std::optional<double> flux_bound) {
  if (!(tail_tol > 0.0)) throw DomainError("tail tolerance must be positive");
  double fb;
  if (flux_bound) {
    fb = *flux_bound;
  } else if (p.n() >= p.m()) {
    fb = 1.0;  // sup_u flux <= 1 in this regime
  } else {
    throw DomainError("tail_length needs an explicit flux bound when n < m");
  }
  const double decay = p.osc().b_star_inf;
  const double mass = p.osc().F_s * p.sum_lambda_r_sup() * fb / decay;
  if (mass <= tail_tol) return 0.0;
  return std::log(mass / tail_tol) / decay;
}

// ---------------------------------------------------------------------------
// PhiEvaluator
// ---------------------------------------------------------------------------

PhiEvaluator::PhiEvaluator(const ModelParams& p, double t0, double dt, std::size_t len,
                           const QuadratureSpec& q, bool truncated)
    : t0_(t0), dt_(dt), len_(len), m_(p.m()), n_(p.n()), truncated_(truncated), rule_(q.rule) {
  if (!(dt > 0.0)) throw GridError("operator grid step must be positive");
  if (len < 2) throw GridError("operator grid needs at least two nodes");
  if (!(q.L > 0.0)) throw DomainError("quadrature spec must carry a resolved tail length L");
  if (q.quad_dt > 0.0 && dt > q.quad_dt * (1.0 + 1e-12))
    throw GridError("operator lattice step exceeds the quadrature spec's quad_dt");
  L_ = q.L;
  if (truncated_) trunc_cap_ = compute_V(p.m(), p.n());

  pad_ = static_cast<std::size_t>(std::ceil(L_ / dt_));
  pad_ += pad_ % 2;  // Simpson pairs need an even window
  pad_ = std::max<std::size_t>(pad_, 2);

  const std::size_t n_ext = len_ + pad_;
  const double ext0 = t0_ - static_cast<double>(pad_) * dt_;

  // int_0^s b via the exact antiderivative when b has one, else cumulative
  // quadrature on this lattice.
  LossRateIntegral bint(p.b(), ext0, t0_ + dt_ * static_cast<double>(len_ - 1) + dt_, dt_);
  std::vector<double> bval(n_ext);
  double bmin = std::numeric_limits<double>::infinity(), bmax = -bmin;
  for (std::size_t j = 0; j < n_ext; ++j) {
    bval[j] = bint.eval(ext0 + dt_ * static_cast<double>(j));
    bmin = std::min(bmin, bval[j]);
    bmax = std::max(bmax, bval[j]);
  }
  if (bmax - bmin > 1200.0) {
    throw DomainError("work window too long for the kernel weights: the running "
                      "integral of b spans more than 1200");
  }
  const double bref = 0.5 * (bmin + bmax);
  weight_.resize(n_ext);
  for (std::size_t j = 0; j < n_ext; ++j) weight_[j] = std::exp(bval[j] - bref);

  const auto& terms = p.terms();
  rk_.resize(terms.size());
  didx_.resize(terms.size());
  dfrac_.resize(terms.size());
  const auto last_pair = static_cast<double>(len_ - 2);
  for (std::size_t k = 0; k < terms.size(); ++k) {
    rk_[k].resize(n_ext);
    didx_[k].resize(n_ext);
    dfrac_[k].resize(n_ext);
    for (std::size_t j = 0; j < n_ext; ++j) {
      const double s = ext0 + dt_ * static_cast<double>(j);
      rk_[k][j] = terms[k].lambda * terms[k].r.eval(s);
      const double lag = terms[k].tau.eval(s);
      double pos = (s - lag - t0_) / dt_;
      pos = std::clamp(pos, 0.0, last_pair + 1.0);
      double base = std::floor(pos);
      if (base > last_pair) base = last_pair;
      didx_[k][j] = static_cast<std::int32_t>(base);
      dfrac_[k][j] = static_cast<float>(pos - base);
    }
  }
}

GridFunction PhiEvaluator::apply(const GridFunction& x) const {
  if (x.t0() != t0_ || x.dt() != dt_ || x.size() != len_)
    throw GridError("operator input must live on the evaluator's lattice");
  if (!(x.min_value() > 0.0))
    throw DomainError("operator input must be strictly positive");

  const std::size_t n_ext = len_ + pad_;
  const double* xv = x.values().data();

  // kernel-weighted production density on the coefficient lattice
  std::vector<double> f(n_ext, 0.0);
  const bool trunc = truncated_;
  const double cap = trunc_cap_;
  for (std::size_t k = 0; k < rk_.size(); ++k) {
    const double* r = rk_[k].data();
    const std::int32_t* di = didx_[k].data();
    const float* df = dfrac_[k].data();
    for (std::size_t j = 0; j < n_ext; ++j) {
      const std::int32_t i0 = di[j];
      const double w = static_cast<double>(df[j]);
      double u = xv[i0] + w * (xv[i0 + 1] - xv[i0]);
      if (trunc && u > cap) u = cap;
      const double lu = std::log(u);
      f[j] += r[j] * std::exp(m_ * lu) / (1.0 + std::exp(n_ * lu));
    }
  }
  for (std::size_t j = 0; j < n_ext; ++j) f[j] *= weight_[j];

  // cumulative integral, chained over same-parity nodes so that differences
  // over the (even) window reduce to composite Simpson with positive weights
  std::vector<double> c(n_ext);
  c[0] = 0.0;
  c[1] = 0.5 * dt_ * (f[0] + f[1]);
  if (rule_ == QuadratureSpec::Rule::Simpson) {
    const double h3 = dt_ / 3.0;
    for (std::size_t j = 2; j < n_ext; ++j)
      c[j] = c[j - 2] + h3 * (f[j - 2] + 4.0 * f[j - 1] + f[j]);
  } else {
    for (std::size_t j = 2; j < n_ext; ++j)
      c[j] = c[j - 1] + 0.5 * dt_ * (f[j - 1] + f[j]);
  }

  std::vector<double> out(len_);
  for (std::size_t i = 0; i < len_; ++i) {
    const std::size_t hi = i + pad_;
    out[i] = (c[hi] - c[i]) / weight_[hi];
  }
  return GridFunction(t0_, dt_, std::move(out));
}

GridFunction phi_apply(const ModelParams& p, const GridFunction& x, double w0, double w1,
                       const QuadratureSpec& q, bool truncated) {
  if (!(w1 > w0)) throw DomainError("output window must be nondegenerate");
  if (!(x.min_value() > 0.0)) throw DomainError("operator input must be strictly positive");

  QuadratureSpec rq = q;
  if (!(rq.L > 0.0)) {
    rq.L = tail_length(p, rq.tail_tol, flux_sup_over(p.m(), p.n(), x.max_value()));
    rq.L = std::max(rq.L, 2.0 * x.dt());
  }
  const double slack = 1e-9 * x.dt();
  if (x.t0() > w0 - rq.L - p.upsilon() + slack || x.t_end() < w1 - slack) {
    throw InsufficientHistory("operator input must cover [w0 - L - upsilon, w1] = [" +
                              std::to_string(w0 - rq.L - p.upsilon()) + ", " +
                              std::to_string(w1) + "]");
  }

  PhiEvaluator ev(p, x.t0(), x.dt(), x.size(), rq, truncated);
  return ev.apply(x).restrict_to(w0, w1);
}

// ---------------------------------------------------------------------------
// LossRateIntegral
// ---------------------------------------------------------------------------

LossRateIntegral::LossRateIntegral(const APExpr& b, double lo, double hi, double step) {
  exact_ = antiderivative(b);
  if (exact_) return;
  if (!(step > 0.0) || !(hi > lo)) throw DomainError("invalid range for cumulative integral");
  lo_ = lo;
  step_ = step;
  const auto n = static_cast<std::size_t>(std::ceil((hi - lo) / step)) + 2;
  std::vector<double> bv(n + 1);
  for (std::size_t j = 0; j <= n; ++j) bv[j] = b.eval(lo + step * static_cast<double>(j));
  cumulative_.resize(n);
  cumulative_[0] = 0.0;
  for (std::size_t j = 0; j + 1 < n; ++j) {
    // integrate the parabola through (j, j+1, j+2) over the first subinterval
    cumulative_[j + 1] =
        cumulative_[j] + step / 12.0 * (5.0 * bv[j] + 8.0 * bv[j + 1] - bv[j + 2]);
  }
}

double LossRateIntegral::eval(double t) const {
  if (exact_) return exact_->eval(t);
  double pos = (t - lo_) / step_;
  const auto last = static_cast<double>(cumulative_.size() - 1);
  if (pos < -1e-9 || pos > last + 1e-9)
    throw GridError("loss-rate integral queried outside its tabulated range");
  pos = std::clamp(pos, 0.0, last);
  auto i = static_cast<std::size_t>(pos);
  if (i >= cumulative_.size() - 1) i = cumulative_.size() - 2;
  const double w = pos - static_cast<double>(i);
  return cumulative_[i] + w * (cumulative_[i + 1] - cumulative_[i]);
}

}  // namespace apfix
