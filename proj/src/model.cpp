#include "apfix/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "apfix/errors.hpp"

namespace apfix {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

void require_supported_regime(double m, double n) {
  if (!(m > 0.0) || !(n > 0.0)) throw DomainError("exponents m and n must be positive");
  if (!(m > 1.0)) {
    throw HypothesisViolation(
        "hypothesis (H0) fails: this solver targets m > 1; the case 0 <= m <= 1 "
        "is the classical regime handled by earlier methods (got m = " +
        fmt(m) + ")");
  }
}

ModelParams ModelParams::create(double m, double n, std::vector<ModelTerm> terms, APExpr b) {
  require_supported_regime(m, n);
  if (terms.empty()) throw DomainError("model needs at least one production term");

  ModelParams p;
  p.m_ = m;
  p.n_ = n;
  p.b_ = b;
  p.terms_ = std::move(terms);

  p.max_freq_ = b.max_frequency();
  double sum_inf = 0.0, sum_sup = 0.0, upsilon = 0.0, best_r_inf = 0.0;
  int k = 0;
  for (auto& term : p.terms_) {
    ++k;
    if (!(term.lambda > 0.0)) throw DomainError("lambda_" + std::to_string(k) + " must be positive");
    term.r_bounds = estimate_bounds_auto(term.r);
    term.tau_bounds = estimate_bounds_auto(term.tau);
    if (!(term.r_bounds.inf_est > 0.0)) {
      throw HypothesisViolation("r_" + std::to_string(k) +
                                " must be positive; estimated infimum " +
                                fmt(term.r_bounds.inf_est));
    }
    if (term.tau_bounds.inf_est < -1e-12) {
      throw HypothesisViolation("tau_" + std::to_string(k) +
                                " must be nonnegative; estimated infimum " +
                                fmt(term.tau_bounds.inf_est));
    }
    if (!term.r_bounds.certified) p.uncertified_.push_back("r_" + std::to_string(k));
    if (!term.tau_bounds.certified) p.uncertified_.push_back("tau_" + std::to_string(k));
    sum_inf += term.lambda * term.r_bounds.inf_est;
    sum_sup += term.lambda * term.r_bounds.sup_est;
    best_r_inf = std::max(best_r_inf, term.r_bounds.inf_est);
    upsilon = std::max(upsilon, term.tau_bounds.sup_est);
    p.max_freq_ = std::max({p.max_freq_, term.r.max_frequency(), term.tau.max_frequency()});
  }
  if (!(best_r_inf > 0.0)) throw HypothesisViolation("some r_j must have positive infimum");
  if (!(upsilon > 0.0)) throw HypothesisViolation("max_k tau_k^+ must be positive");

  p.b_bounds_ = estimate_bounds_auto(b);
  if (!p.b_bounds_.certified) p.uncertified_.push_back("b");
  p.mean_b_ = mean_value(b, std::max(1000.0, (b.min_frequency() > 0.0)
                                                 ? 40.0 * 6.283185307179586 / b.min_frequency()
                                                 : 0.0));
  p.osc_ = derive_oscillation_bound(b);  // throws HypothesisViolation if M[b] <= 0

  p.upsilon_ = upsilon;
  p.sum_r_inf_ = sum_inf;
  p.sum_r_sup_ = sum_sup;
  return p;
}

double compute_B(double A, double m, double n) {
  if (!(A > 0.0)) throw DomainError("A must be positive");
  if (!(n - m + 1.0 > 0.0)) {
    throw RegimeUnsupported(
        "the regime 0 < n <= m-1 is not covered: the lower and upper bracket "
        "conditions cannot hold simultaneously there (open problem); need "
        "n - m + 1 > 0, got m = " +
        fmt(m) + ", n = " + fmt(n));
  }
  const double An = std::pow(A, n);
  return A * std::pow(n * An / ((m - 1.0) * (1.0 + An)), 1.0 / (n - m + 1.0));
}

double threshold_A(double m, double n) {
  if (!(n - m + 1.0 > 0.0)) {
    throw RegimeUnsupported(
        "the regime 0 < n <= m-1 is not covered: no admissible bracket exists "
        "there (open problem); need n - m + 1 > 0, got m = " +
        fmt(m) + ", n = " + fmt(n));
  }
  return std::pow((m - 1.0) / (n - m + 1.0), 1.0 / n);
}

double compute_V(double m, double n) {
  if (!(n > m)) {
    throw RegimeUnsupported("the a-priori sup bound needs n > m, got m = " + fmt(m) +
                            ", n = " + fmt(n));
  }
  return std::pow(m / (n - m), 1.0 / n);
}

namespace {

struct ChainBuilder {
  std::vector<ChainEntry> entries;
  bool all_pass = true;
  double slack = 0.0;  // applied to the non-strict links only

  bool add(std::string name, double lhs, const char* rel, double rhs) {
    bool pass = false;
    if (rel == std::string("<=")) pass = lhs <= rhs + slack;
    else if (rel == std::string("<")) pass = lhs < rhs;
    else if (rel == std::string(">")) pass = lhs > rhs;
    else if (rel == std::string(">=")) pass = lhs >= rhs - slack;
    entries.push_back(ChainEntry{std::move(name), lhs, rel, rhs, pass});
    all_pass = all_pass && pass;
    return pass;
  }
};

double chain_value(double x, double m, double n) {
  // (1 + x^n) / x^(m-1)
  return (1.0 + std::pow(x, n)) / std::pow(x, m - 1.0);
}

}  // namespace

TheoremReport check_theorem1(const ModelParams& p, double A, double slack) {
  TheoremReport rep;
  rep.theorem = TheoremId::T1;
  rep.A = A;
  rep.B = kNaN;
  rep.V = kNaN;
  rep.threshold = kNaN;
  rep.uncertified_bounds = p.uncertified_bounds();

  const double m = p.m(), n = p.n();
  ChainBuilder c;
  c.slack = slack;
  c.add("m - 1 > 0", m - 1.0, ">", 0.0);
  if (!c.add("n > m - 1", n, ">", m - 1.0)) {
    rep.chain = std::move(c.entries);
    return rep;  // threshold/B undefined in this regime
  }
  c.add("n <= m", n, "<=", m);

  rep.threshold = threshold_A(m, n);
  rep.B = compute_B(A, m, n);
  c.add("A > threshold", A, ">", rep.threshold);

  const double left = chain_value(A, m, n);
  const double mid_lo = p.sum_lambda_r_inf() / p.b_bounds().sup_est;
  const double mid_hi = p.osc().F_s * p.sum_lambda_r_sup() / p.osc().b_star_inf;
  const double right = chain_value(rep.B, m, n);
  c.add("(1+A^n)/A^(m-1) <= sum lambda r^-/b^+", left, "<=", mid_lo);
  c.add("sum lambda r^-/b^+ <= F_s sum lambda r^+/(b*)^-", mid_lo, "<=", mid_hi);
  c.add("F_s sum lambda r^+/(b*)^- <= (1+B^n)/B^(m-1)", mid_hi, "<=", right);

  rep.chain = std::move(c.entries);
  rep.applicable = c.all_pass;
  return rep;
}

TheoremReport check_theorem2(const ModelParams& p, double A, double slack) {
  TheoremReport rep;
  rep.theorem = TheoremId::T2;
  rep.A = A;
  rep.B = kNaN;
  rep.V = kNaN;
  rep.threshold = kNaN;
  rep.uncertified_bounds = p.uncertified_bounds();

  const double m = p.m(), n = p.n();
  ChainBuilder c;
  c.slack = slack;
  c.add("m > 1", m, ">", 1.0);
  if (!c.add("n > m", n, ">", m)) {
    rep.chain = std::move(c.entries);
    return rep;
  }

  rep.threshold = threshold_A(m, n);
  rep.B = compute_B(A, m, n);
  rep.V = compute_V(m, n);
  c.add("A > threshold", A, ">", rep.threshold);
  c.add("A <= V", A, "<=", rep.V);
  c.add("V <= B", rep.V, "<=", rep.B);

  const double left = chain_value(A, m, n);
  const double mid_lo = p.sum_lambda_r_inf() / p.b_bounds().sup_est;
  const double mid_hi = p.osc().F_s * p.sum_lambda_r_sup() / p.osc().b_star_inf;
  c.add("(1+A^n)/A^(m-1) <= sum lambda r^-/b^+", left, "<=", mid_lo);
  c.add("sum lambda r^-/b^+ <= F_s sum lambda r^+/(b*)^-", mid_lo, "<=", mid_hi);
  c.add("F_s sum lambda r^+/(b*)^- <= V", mid_hi, "<=", rep.V);

  rep.chain = std::move(c.entries);
  rep.applicable = c.all_pass;
  return rep;
}

TheoremSelection select_theorem(const ModelParams& p, double A) {
  TheoremSelection sel;
  sel.t1 = check_theorem1(p, A);
  sel.t2 = check_theorem2(p, A);
  if (sel.t1.applicable) {
    sel.chosen = sel.t1;
  } else if (sel.t2.applicable) {
    sel.chosen = sel.t2;
  } else {
    sel.chosen = TheoremReport{};
    sel.chosen.theorem = TheoremId::None;
    sel.chosen.A = A;
    sel.chosen.B = kNaN;
    sel.chosen.V = kNaN;
    sel.chosen.threshold = kNaN;
    sel.chosen.uncertified_bounds = p.uncertified_bounds();
    for (const auto& e : sel.t1.chain) {
      ChainEntry copy = e;
      copy.name = "T1: " + copy.name;
      sel.chosen.chain.push_back(std::move(copy));
    }
    for (const auto& e : sel.t2.chain) {
      ChainEntry copy = e;
      copy.name = "T2: " + copy.name;
      sel.chosen.chain.push_back(std::move(copy));
    }
  }
  return sel;
}

}  // namespace apfix
