#pragma once

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace apfix {

/// Immutable expression tree for the almost-periodic coefficient functions
/// r_k(t), tau_k(t), b(t): sums/products of constants, sinusoids, absolute
/// values and exponentials of sinusoid combinations, plus scalar multiples.
/// A ramp node (slope * t) exists so antiderivatives of the linear class can
/// be represented; it never appears in user-supplied coefficients.
///
/// Trees are shared immutably, so evaluation is safe from any thread.
class APExpr {
 public:
  struct Constant {
    double value;
  };
  struct Sinusoid {
    double amp;
    double freq;   // nonzero, radians per time unit
    double phase;
    bool is_sin;   // sin vs cos
  };
  struct Ramp {
    double slope;  // slope * t
  };
  struct Abs {
    std::shared_ptr<const APExpr> child;
  };
  struct ExpOf {
    std::shared_ptr<const APExpr> child;
  };
  struct Scale {
    double factor;
    std::shared_ptr<const APExpr> child;
  };
  struct Sum {
    std::vector<APExpr> children;
  };
  struct Product {
    std::vector<APExpr> children;
  };
  using Node = std::variant<Constant, Sinusoid, Ramp, Abs, ExpOf, Scale, Sum, Product>;

  static APExpr constant(double c);
  static APExpr cosine(double amp, double freq, double phase = 0.0);
  static APExpr sine(double amp, double freq, double phase = 0.0);
  static APExpr ramp(double slope);
  static APExpr abs_of(APExpr child);
  static APExpr exp_of(APExpr child);
  static APExpr scale(double factor, APExpr child);
  static APExpr sum(std::vector<APExpr> children);
  static APExpr product(std::vector<APExpr> children);

  /// Exact pointwise value; total for every real t.
  double eval(double t) const;

  const Node& node() const { return *node_; }

  /// Largest sinusoid frequency anywhere in the tree (0 if none).
  double max_frequency() const;
  /// Smallest sinusoid frequency anywhere in the tree (0 if none).
  double min_frequency() const;
  /// True when the tree contains no sinusoid or ramp node.
  bool is_constant() const;

 private:
  explicit APExpr(Node n);
  std::shared_ptr<const Node> node_;
};

/// Inf/sup estimate for an expression over a sampling window.
/// `certified` marks bounds obtained by exact range propagation through the
/// tree (attained in the almost-periodic closure); otherwise the bounds are
/// sampled and only approximate the true range from inside.
struct BoundsEstimate {
  double inf_est = 0.0;
  double sup_est = 0.0;
  double window_lo = 0.0;
  double window_hi = 0.0;
  double step = 0.0;
  bool certified = false;
  /// Set when the window is shorter than one period of the slowest sinusoid.
  bool short_window = false;
};

/// Kernel-domination pair: exp(-int_s^t b) <= F_s * exp(-int_s^t b_star)
/// with b_star bounded below by b_star_inf > 0.
struct OscillationBound {
  APExpr b_star;
  double F_s = 1.0;
  double b_star_inf = 0.0;
};

/// Sampled inf/sup over [window_lo, window_hi] at the given step, tightened
/// to the exact range when the tree supports it.
BoundsEstimate estimate_bounds(const APExpr& f, double window_lo, double window_hi, double step);

/// estimate_bounds with window/step derived from the tree's own frequencies:
/// step <= (2*pi/max_freq)/40 and window >= 20 periods of the slowest term.
BoundsEstimate estimate_bounds_auto(const APExpr& f);

/// Time average (1/T) * int_t^{t+T} f over several window starts; exact for
/// trees built from constants and sinusoids.
double mean_value(const APExpr& f, double horizon);

/// Exact antiderivative for linear combinations of constants and sinusoids;
/// nullopt for anything else (callers fall back to cumulative quadrature).
std::optional<APExpr> antiderivative(const APExpr& f);

/// Oscillation bound for a loss-rate coefficient with positive mean:
/// if inf b > 0, (b_star = b, F_s = 1); else, for b = c + p with c > 0 and p
/// a zero-mean sinusoid combination with antiderivative P, (b_star = c,
/// F_s = exp(2 * sup|P|)).
///
/// Throws HypothesisViolation when the mean is nonpositive and
/// UnsupportedCoefficient when no decomposition is available.
OscillationBound derive_oscillation_bound(const APExpr& b);

/// Exact range of the tree by interval propagation, with a flag telling
/// whether the interval is attained (tight) rather than merely enclosing.
/// nullopt when the tree is unbounded (contains a ramp).
struct RangeInfo {
  double lo;
  double hi;
  bool tight;
};
std::optional<RangeInfo> analytic_range(const APExpr& f);

/// Crude upper bound for |f''| used to pick verification-grade grid
/// resolutions; 0 for constants.
double curvature_bound(const APExpr& f);

}  // namespace apfix
