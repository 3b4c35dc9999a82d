#pragma once

#include <string>
#include <vector>

#include "apfix/expr.hpp"

namespace apfix {

/// One production term lambda_k * r_k(t) * x^m(t - tau_k(t)) / (1 + x^n(..)).
struct ModelTerm {
  double lambda = 1.0;
  APExpr r;
  APExpr tau;
  BoundsEstimate r_bounds;    // derived
  BoundsEstimate tau_bounds;  // derived
};

/// Parameters of x'(t) = sum_k lambda_k r_k(t) x^m(t-tau_k)/(1+x^n(t-tau_k))
/// - b(t) x(t), together with every derived constant the hypothesis chains
/// need. Construction validates:
///   m > 1, all tau_k >= 0 with max tau_k^+ > 0, all r_k > 0 with some
///   r_j^- > 0, and M[b] > 0.
class ModelParams {
 public:
  static ModelParams create(double m, double n, std::vector<ModelTerm> terms, APExpr b);

  double m() const { return m_; }
  double n() const { return n_; }
  const std::vector<ModelTerm>& terms() const { return terms_; }
  const APExpr& b() const { return b_; }
  const BoundsEstimate& b_bounds() const { return b_bounds_; }
  const OscillationBound& osc() const { return osc_; }
  double mean_b() const { return mean_b_; }
  double upsilon() const { return upsilon_; }            // max_k tau_k^+
  double sum_lambda_r_inf() const { return sum_r_inf_; } // sum_k lambda_k r_k^-
  double sum_lambda_r_sup() const { return sum_r_sup_; } // sum_k lambda_k r_k^+
  /// Largest sinusoid frequency across b, r_k, tau_k (0 when all constant).
  double max_frequency() const { return max_freq_; }
  /// Names of coefficient bounds that rest on sampling rather than exact
  /// range propagation.
  const std::vector<std::string>& uncertified_bounds() const { return uncertified_; }

 private:
  ModelParams() : b_(APExpr::constant(1.0)), osc_{APExpr::constant(1.0), 1.0, 1.0} {}
  double m_ = 0.0, n_ = 0.0;
  std::vector<ModelTerm> terms_;
  APExpr b_;
  BoundsEstimate b_bounds_;
  OscillationBound osc_;
  double mean_b_ = 0.0;
  double upsilon_ = 0.0;
  double sum_r_inf_ = 0.0;
  double sum_r_sup_ = 0.0;
  double max_freq_ = 0.0;
  std::vector<std::string> uncertified_;
};

/// One inequality in a theorem's hypothesis chain, with both sides evaluated.
struct ChainEntry {
  std::string name;
  double lhs = 0.0;
  std::string relation;  // "<=", "<", ">"
  double rhs = 0.0;
  bool pass = false;
};

enum class TheoremId { T1, T2, None };

/// Full record of a theorem's hypothesis check.
struct TheoremReport {
  TheoremId theorem = TheoremId::None;
  double A = 0.0;
  double B = 0.0;          // NaN when not computable in this regime
  double V = 0.0;          // NaN when absent (T1) or not computable
  double threshold = 0.0;  // NaN when not computable
  std::vector<ChainEntry> chain;
  bool applicable = false;
  std::vector<std::string> uncertified_bounds;
};

/// B = A * [n A^n / ((m-1)(1+A^n))]^(1/(n-m+1)).
/// Throws RegimeUnsupported when n - m + 1 <= 0.
double compute_B(double A, double m, double n);

/// ((m-1)/(n-m+1))^(1/n): B > A exactly when A exceeds this value.
double threshold_A(double m, double n);

/// (m/(n-m))^(1/n), the a-priori sup bound on solutions when n > m.
/// Throws RegimeUnsupported when n <= m.
double compute_V(double m, double n);

/// Hypothesis chain for the n <= m regime:
/// n > m-1 > 0, n <= m, A > threshold, and
/// (1+A^n)/A^(m-1) <= sum lambda_k r_k^- / b^+
///   <= F_s sum lambda_k r_k^+ / (b_star)^- <= (1+B^n)/B^(m-1).
/// `slack` loosens the non-strict links (lhs <= rhs + slack); the chains are
/// non-strict, so the default is exact comparison.
TheoremReport check_theorem1(const ModelParams& p, double A, double slack = 0.0);

/// Hypothesis chain for the n > m regime:
/// n > m > 1, threshold < A <= V <= B, and the chain capped by V.
TheoremReport check_theorem2(const ModelParams& p, double A, double slack = 0.0);

/// Runs both checks and picks the applicable one (preferring the first);
/// when neither applies the combined report carries both chains with
/// theorem = None.
struct TheoremSelection {
  TheoremReport t1;
  TheoremReport t2;
  TheoremReport chosen;
};
TheoremSelection select_theorem(const ModelParams& p, double A);

/// Rejects exponent pairs outside the supported regime with the messages
/// the rest of the pipeline relies on. Called by ModelParams::create for
/// m <= 1; the n <= m-1 gate lives in threshold_A/compute_B.
void require_supported_regime(double m, double n);

}  // namespace apfix
