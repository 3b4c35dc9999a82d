#include "apfix/expr.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "apfix/errors.hpp"

namespace apfix {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw DomainError(std::string(what) + " must be finite");
}

}  // namespace

APExpr::APExpr(Node n) : node_(std::make_shared<const Node>(std::move(n))) {}

APExpr APExpr::constant(double c) {
  require_finite(c, "constant");
  return APExpr(Constant{c});
}

APExpr APExpr::cosine(double amp, double freq, double phase) {
  require_finite(amp, "amplitude");
  require_finite(phase, "phase");
  if (!std::isfinite(freq) || freq == 0.0)
    throw DomainError("sinusoid frequency must be finite and nonzero");
  return APExpr(Sinusoid{amp, freq, phase, false});
}

APExpr APExpr::sine(double amp, double freq, double phase) {
  require_finite(amp, "amplitude");
  require_finite(phase, "phase");
  if (!std::isfinite(freq) || freq == 0.0)
    throw DomainError("sinusoid frequency must be finite and nonzero");
  return APExpr(Sinusoid{amp, freq, phase, true});
}

APExpr APExpr::ramp(double slope) {
  require_finite(slope, "ramp slope");
  return APExpr(Ramp{slope});
}

APExpr APExpr::abs_of(APExpr child) {
  return APExpr(Abs{std::make_shared<const APExpr>(std::move(child))});
}

APExpr APExpr::exp_of(APExpr child) {
  return APExpr(ExpOf{std::make_shared<const APExpr>(std::move(child))});
}

APExpr APExpr::scale(double factor, APExpr child) {
  require_finite(factor, "scale factor");
  return APExpr(Scale{factor, std::make_shared<const APExpr>(std::move(child))});
}

APExpr APExpr::sum(std::vector<APExpr> children) {
  if (children.empty()) throw DomainError("sum needs at least one term");
  return APExpr(Sum{std::move(children)});
}

APExpr APExpr::product(std::vector<APExpr> children) {
  if (children.empty()) throw DomainError("product needs at least one factor");
  return APExpr(Product{std::move(children)});
}

double APExpr::eval(double t) const {
  struct Visitor {
    double t;
    double operator()(const Constant& n) const { return n.value; }
    double operator()(const Sinusoid& n) const {
      const double arg = n.freq * t + n.phase;
      return n.amp * (n.is_sin ? std::sin(arg) : std::cos(arg));
    }
    double operator()(const Ramp& n) const { return n.slope * t; }
    double operator()(const Abs& n) const { return std::abs(n.child->eval(t)); }
    double operator()(const ExpOf& n) const { return std::exp(n.child->eval(t)); }
    double operator()(const Scale& n) const { return n.factor * n.child->eval(t); }
    double operator()(const Sum& n) const {
      double acc = 0.0;
      for (const auto& c : n.children) acc += c.eval(t);
      return acc;
    }
    double operator()(const Product& n) const {
      double acc = 1.0;
      for (const auto& c : n.children) acc *= c.eval(t);
      return acc;
    }
  };
  return std::visit(Visitor{t}, *node_);
}

namespace {

template <typename F>
void for_each_sinusoid(const APExpr& e, F&& f) {
  struct Visitor {
    F& f;
    void walk(const APExpr& e) {
      const auto& n = e.node();
      if (const auto* s = std::get_if<APExpr::Sinusoid>(&n)) {
        f(*s);
      } else if (const auto* a = std::get_if<APExpr::Abs>(&n)) {
        walk(*a->child);
      } else if (const auto* x = std::get_if<APExpr::ExpOf>(&n)) {
        walk(*x->child);
      } else if (const auto* sc = std::get_if<APExpr::Scale>(&n)) {
        walk(*sc->child);
      } else if (const auto* su = std::get_if<APExpr::Sum>(&n)) {
        for (const auto& c : su->children) walk(c);
      } else if (const auto* pr = std::get_if<APExpr::Product>(&n)) {
        for (const auto& c : pr->children) walk(c);
      }
    }
  };
  Visitor v{f};
  v.walk(e);
}

}  // namespace

double APExpr::max_frequency() const {
  double w = 0.0;
  for_each_sinusoid(*this, [&](const Sinusoid& s) { w = std::max(w, std::abs(s.freq)); });
  return w;
}

double APExpr::min_frequency() const {
  double w = 0.0;
  for_each_sinusoid(*this, [&](const Sinusoid& s) {
    const double f = std::abs(s.freq);
    w = (w == 0.0) ? f : std::min(w, f);
  });
  return w;
}

bool APExpr::is_constant() const {
  struct Visitor {
    bool operator()(const Constant&) const { return true; }
    bool operator()(const Sinusoid&) const { return false; }
    bool operator()(const Ramp&) const { return false; }
    bool operator()(const Abs& n) const { return n.child->is_constant(); }
    bool operator()(const ExpOf& n) const { return n.child->is_constant(); }
    bool operator()(const Scale& n) const { return n.child->is_constant(); }
    bool operator()(const Sum& n) const {
      return std::all_of(n.children.begin(), n.children.end(),
                         [](const APExpr& c) { return c.is_constant(); });
    }
    bool operator()(const Product& n) const {
      return std::all_of(n.children.begin(), n.children.end(),
                         [](const APExpr& c) { return c.is_constant(); });
    }
  };
  return std::visit(Visitor{}, *node_);
}

// ---------------------------------------------------------------------------
// Range propagation
// ---------------------------------------------------------------------------

std::optional<RangeInfo> analytic_range(const APExpr& f) {
  using R = std::optional<RangeInfo>;
  struct Visitor {
    R walk(const APExpr& e) const { return std::visit(*this, e.node()); }

    static bool degenerate(const RangeInfo& r) { return r.lo == r.hi; }

    R operator()(const APExpr::Constant& n) const { return RangeInfo{n.value, n.value, true}; }
    R operator()(const APExpr::Sinusoid& n) const {
      const double a = std::abs(n.amp);
      return RangeInfo{-a, a, true};
    }
    R operator()(const APExpr::Ramp&) const { return std::nullopt; }
    R operator()(const APExpr::Abs& n) const {
      R c = walk(*n.child);
      if (!c) return std::nullopt;
      double lo = 0.0;
      if (c->lo > 0.0) lo = c->lo;
      else if (c->hi < 0.0) lo = -c->hi;
      const double hi = std::max(std::abs(c->lo), std::abs(c->hi));
      // A continuous function attains every value between its bounds, so
      // tightness survives |.|.
      return RangeInfo{lo, hi, c->tight};
    }
    R operator()(const APExpr::ExpOf& n) const {
      R c = walk(*n.child);
      if (!c) return std::nullopt;
      return RangeInfo{std::exp(c->lo), std::exp(c->hi), c->tight};
    }
    R operator()(const APExpr::Scale& n) const {
      R c = walk(*n.child);
      if (!c) return std::nullopt;
      double lo = n.factor * c->lo, hi = n.factor * c->hi;
      if (lo > hi) std::swap(lo, hi);
      return RangeInfo{lo, hi, c->tight};
    }
    R operator()(const APExpr::Sum& n) const {
      double lo = 0.0, hi = 0.0;
      bool tight = true;
      int oscillating = 0;
      for (const auto& child : n.children) {
        R c = walk(child);
        if (!c) return std::nullopt;
        lo += c->lo;
        hi += c->hi;
        tight = tight && c->tight;
        if (!degenerate(*c)) ++oscillating;
      }
      // With two or more varying terms the interval sum is still an
      // enclosure but joint attainment depends on the frequencies, so we
      // stop claiming tightness.
      return RangeInfo{lo, hi, tight && oscillating <= 1};
    }
    R operator()(const APExpr::Product& n) const {
      double lo = 1.0, hi = 1.0;
      bool tight = true;
      int oscillating = 0;
      for (const auto& child : n.children) {
        R c = walk(child);
        if (!c) return std::nullopt;
        const double a = lo * c->lo, b = lo * c->hi, cc = hi * c->lo, d = hi * c->hi;
        lo = std::min(std::min(a, b), std::min(cc, d));
        hi = std::max(std::max(a, b), std::max(cc, d));
        tight = tight && c->tight;
        if (!degenerate(*c)) ++oscillating;
      }
      return RangeInfo{lo, hi, tight && oscillating <= 1};
    }
  };
  return Visitor{}.walk(f);
}

namespace {

double magnitude_bound(const APExpr& f) {
  auto r = analytic_range(f);
  if (!r) return std::numeric_limits<double>::infinity();
  return std::max(std::abs(r->lo), std::abs(r->hi));
}

double slope_bound(const APExpr& f) {
  struct Visitor {
    double walk(const APExpr& e) const { return std::visit(*this, e.node()); }
    double operator()(const APExpr::Constant&) const { return 0.0; }
    double operator()(const APExpr::Sinusoid& n) const { return std::abs(n.amp * n.freq); }
    double operator()(const APExpr::Ramp& n) const { return std::abs(n.slope); }
    double operator()(const APExpr::Abs& n) const { return walk(*n.child); }
    double operator()(const APExpr::ExpOf& n) const {
      auto r = analytic_range(*n.child);
      const double top = r ? std::exp(r->hi) : std::numeric_limits<double>::infinity();
      return top * walk(*n.child);
    }
    double operator()(const APExpr::Scale& n) const { return std::abs(n.factor) * walk(*n.child); }
    double operator()(const APExpr::Sum& n) const {
      double acc = 0.0;
      for (const auto& c : n.children) acc += walk(c);
      return acc;
    }
    double operator()(const APExpr::Product& n) const {
      // d(uv) = u'v + uv', folded left to right
      double mag = 1.0, slope = 0.0;
      for (const auto& c : n.children) {
        const double cm = magnitude_bound(c), cs = walk(c);
        slope = slope * cm + mag * cs;
        mag *= cm;
      }
      return slope;
    }
  };
  return Visitor{}.walk(f);
}

}  // namespace

double curvature_bound(const APExpr& f) {
  struct Visitor {
    double walk(const APExpr& e) const { return std::visit(*this, e.node()); }
    double operator()(const APExpr::Constant&) const { return 0.0; }
    double operator()(const APExpr::Ramp&) const { return 0.0; }
    double operator()(const APExpr::Sinusoid& n) const { return std::abs(n.amp) * n.freq * n.freq; }
    double operator()(const APExpr::Abs& n) const { return walk(*n.child); }
    double operator()(const APExpr::ExpOf& n) const {
      auto r = analytic_range(*n.child);
      const double top = r ? std::exp(r->hi) : std::numeric_limits<double>::infinity();
      const double s = slope_bound(*n.child);
      return top * (walk(*n.child) + s * s);
    }
    double operator()(const APExpr::Scale& n) const { return std::abs(n.factor) * walk(*n.child); }
    double operator()(const APExpr::Sum& n) const {
      double acc = 0.0;
      for (const auto& c : n.children) acc += walk(c);
      return acc;
    }
    double operator()(const APExpr::Product& n) const {
      double mag = 1.0, slope = 0.0, curv = 0.0;
      for (const auto& c : n.children) {
        const double cm = magnitude_bound(c), cs = slope_bound(c), cc = walk(c);
        curv = curv * cm + 2.0 * slope * cs + mag * cc;
        slope = slope * cm + mag * cs;
        mag *= cm;
      }
      return curv;
    }
  };
  return Visitor{}.walk(f);
}

// ---------------------------------------------------------------------------
// Bounds estimation
// ---------------------------------------------------------------------------

BoundsEstimate estimate_bounds(const APExpr& f, double window_lo, double window_hi, double step) {
  if (!(step > 0.0)) throw DomainError("sampling step must be positive");
  if (!(window_hi > window_lo)) throw DomainError("sampling window must be nondegenerate");

  BoundsEstimate out;
  out.window_lo = window_lo;
  out.window_hi = window_hi;
  out.step = step;

  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  const auto n = static_cast<std::size_t>((window_hi - window_lo) / step) + 1;
  for (std::size_t i = 0; i < n; ++i) {
    const double v = f.eval(window_lo + static_cast<double>(i) * step);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  out.inf_est = lo;
  out.sup_est = hi;

  const double w_min = f.min_frequency();
  if (w_min > 0.0 && (window_hi - window_lo) < kTwoPi / w_min) out.short_window = true;

  if (auto r = analytic_range(f); r && r->tight) {
    out.inf_est = r->lo;
    out.sup_est = r->hi;
    out.certified = true;
  }
  return out;
}

BoundsEstimate estimate_bounds_auto(const APExpr& f) {
  const double w_max = f.max_frequency();
  const double w_min = f.min_frequency();
  const double step = (w_max > 0.0) ? (kTwoPi / w_max) / 40.0 : 0.25;
  const double window = (w_min > 0.0) ? 20.0 * (kTwoPi / w_min) : 10.0;
  return estimate_bounds(f, 0.0, window, step);
}

// ---------------------------------------------------------------------------
// Mean value and antiderivatives
// ---------------------------------------------------------------------------

namespace {

/// Flattens trees in the span of {constant, sinusoid} under Sum/Scale into
/// (constant part, scaled sinusoids). Fails on any other node.
struct LinearParts {
  double constant = 0.0;
  std::vector<APExpr::Sinusoid> waves;
};

bool decompose_linear(const APExpr& e, double factor, LinearParts& out) {
  const auto& n = e.node();
  if (const auto* c = std::get_if<APExpr::Constant>(&n)) {
    out.constant += factor * c->value;
    return true;
  }
  if (const auto* s = std::get_if<APExpr::Sinusoid>(&n)) {
    out.waves.push_back(APExpr::Sinusoid{factor * s->amp, s->freq, s->phase, s->is_sin});
    return true;
  }
  if (const auto* sc = std::get_if<APExpr::Scale>(&n)) {
    return decompose_linear(*sc->child, factor * sc->factor, out);
  }
  if (const auto* su = std::get_if<APExpr::Sum>(&n)) {
    for (const auto& child : su->children)
      if (!decompose_linear(child, factor, out)) return false;
    return true;
  }
  return false;
}

std::optional<LinearParts> decompose_linear(const APExpr& e) {
  LinearParts parts;
  if (!decompose_linear(e, 1.0, parts)) return std::nullopt;
  return parts;
}

}  // namespace

double mean_value(const APExpr& f, double horizon) {
  if (!(horizon > 0.0)) throw DomainError("averaging horizon must be positive");
  if (auto parts = decompose_linear(f)) return parts->constant;

  // Composite Simpson over [t0, t0 + horizon] for three window starts.
  const double w_max = f.max_frequency();
  double h = (w_max > 0.0) ? (kTwoPi / w_max) / 40.0 : horizon / 4096.0;
  auto intervals = static_cast<std::size_t>(std::ceil(horizon / h));
  intervals += intervals % 2;
  intervals = std::max<std::size_t>(intervals, 2);
  h = horizon / static_cast<double>(intervals);

  const double starts[] = {0.0, horizon / 3.0, 2.0 * horizon / 3.0};
  double acc = 0.0;
  for (double t0 : starts) {
    double simpson = f.eval(t0) + f.eval(t0 + horizon);
    for (std::size_t i = 1; i < intervals; ++i)
      simpson += f.eval(t0 + static_cast<double>(i) * h) * (i % 2 ? 4.0 : 2.0);
    acc += simpson * h / 3.0 / horizon;
  }
  return acc / 3.0;
}

std::optional<APExpr> antiderivative(const APExpr& f) {
  const auto& n = f.node();
  if (const auto* c = std::get_if<APExpr::Constant>(&n)) {
    return APExpr::ramp(c->value);
  }
  if (const auto* s = std::get_if<APExpr::Sinusoid>(&n)) {
    if (s->is_sin) return APExpr::cosine(-s->amp / s->freq, s->freq, s->phase);
    return APExpr::sine(s->amp / s->freq, s->freq, s->phase);
  }
  if (const auto* sc = std::get_if<APExpr::Scale>(&n)) {
    auto child = antiderivative(*sc->child);
    if (!child) return std::nullopt;
    return APExpr::scale(sc->factor, std::move(*child));
  }
  if (const auto* su = std::get_if<APExpr::Sum>(&n)) {
    std::vector<APExpr> children;
    children.reserve(su->children.size());
    for (const auto& c : su->children) {
      auto a = antiderivative(c);
      if (!a) return std::nullopt;
      children.push_back(std::move(*a));
    }
    return APExpr::sum(std::move(children));
  }
  return std::nullopt;
}

OscillationBound derive_oscillation_bound(const APExpr& b) {
  const auto parts = decompose_linear(b);
  double mean;
  if (parts) {
    mean = parts->constant;
  } else {
    const double w_min = b.min_frequency();
    const double horizon = std::max(1000.0, (w_min > 0.0) ? 40.0 * kTwoPi / w_min : 0.0);
    mean = mean_value(b, horizon);
  }
  if (!(mean > 0.0)) {
    throw HypothesisViolation("loss rate must have positive mean, got M[b] = " +
                              std::to_string(mean));
  }

  const BoundsEstimate bounds = estimate_bounds_auto(b);
  if (bounds.certified && bounds.inf_est > 0.0) {
    return OscillationBound{b, 1.0, bounds.inf_est};
  }

  if (parts) {
    // b = mean + p with p a zero-mean sinusoid combination; P = int p is
    // bounded and exp(-int_s^t b) <= exp(2 sup|P|) exp(-mean (t-s)).
    double d = 0.0;
    for (const auto& w : parts->waves) d += std::abs(w.amp / w.freq);
    if (!parts->waves.empty()) {
      std::vector<APExpr> terms;
      for (const auto& w : parts->waves)
        terms.push_back(w.is_sin ? APExpr::sine(w.amp, w.freq, w.phase)
                                 : APExpr::cosine(w.amp, w.freq, w.phase));
      auto P = antiderivative(APExpr::sum(std::move(terms)));
      if (P) {
        if (auto r = analytic_range(*P)) d = std::max(std::abs(r->lo), std::abs(r->hi));
      }
    }
    return OscillationBound{APExpr::constant(mean), std::exp(2.0 * d), mean};
  }

  if (bounds.inf_est > 0.0) {
    // Positive on every sample but outside the analytic class; usable, with
    // the caveat that the infimum rests on sampling.
    return OscillationBound{b, 1.0, bounds.inf_est};
  }

  throw UnsupportedCoefficient(
      "loss rate oscillates through zero and is not a constant-plus-sinusoid "
      "combination; no oscillation bound available");
}

}  // namespace apfix
