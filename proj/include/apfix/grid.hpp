#pragma once

#include <cstddef>
#include <vector>

namespace apfix {

/// A real function sampled on a uniform time lattice with linear
/// interpolation between nodes. Values are immutable after construction.
///
/// Linear interpolation is deliberate: it preserves pointwise order between
/// two functions on the same lattice, which the sandwich iteration relies on.
class GridFunction {
 public:
  GridFunction(double t0, double dt, std::vector<double> values);

  static GridFunction constant(double t0, double dt, std::size_t len, double value);

  double t0() const { return t0_; }
  double dt() const { return dt_; }
  std::size_t size() const { return values_.size(); }
  double t_end() const { return t0_ + dt_ * static_cast<double>(values_.size() - 1); }
  double node_time(std::size_t i) const { return t0_ + dt_ * static_cast<double>(i); }

  double operator[](std::size_t i) const { return values_[i]; }
  const std::vector<double>& values() const { return values_; }

  /// Linear interpolation; throws GridError outside [t0, t_end] (beyond a
  /// half-ulp-of-dt slack for endpoint roundoff).
  double at_time(double t) const;

  /// Linear interpolation with arguments clamped into the domain. Used for
  /// left history extension where out-of-domain lookups must resolve to the
  /// boundary value.
  double at_time_clamped(double t) const;

  bool same_lattice(const GridFunction& other) const {
    return t0_ == other.t0_ && dt_ == other.dt_ && values_.size() == other.values_.size();
  }

  double min_value() const;
  double max_value() const;

  /// Sub-function on the nodes with lo <= t <= hi.
  GridFunction restrict_to(double lo, double hi) const;

  /// Values interpolated onto another lattice; lookups outside this domain
  /// clamp to the boundary values.
  GridFunction resampled(double t0, double dt, std::size_t len) const;

  /// max over nodes of (a - b); lattices must match.
  static double sup_diff(const GridFunction& a, const GridFunction& b);
  /// a(t) <= b(t) + tol at every node; lattices must match.
  static bool leq(const GridFunction& a, const GridFunction& b, double tol = 0.0);

 private:
  double t0_;
  double dt_;
  std::vector<double> values_;
};

}  // namespace apfix
