#include "apfix/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "apfix/errors.hpp"

namespace apfix {

GridFunction::GridFunction(double t0, double dt, std::vector<double> values)
    : t0_(t0), dt_(dt), values_(std::move(values)) {
  if (!(dt_ > 0.0)) throw GridError("grid step must be positive");
  if (values_.size() < 2) throw GridError("grid needs at least two nodes");
  if (!std::isfinite(t0_)) throw GridError("grid origin must be finite");
  for (double v : values_)
    if (!std::isfinite(v)) throw GridError("grid values must be finite");
}

GridFunction GridFunction::constant(double t0, double dt, std::size_t len, double value) {
  return GridFunction(t0, dt, std::vector<double>(len, value));
}

double GridFunction::at_time(double t) const {
  const double slack = 1e-9 * dt_;
  if (t < t0_ - slack || t > t_end() + slack) {
    throw GridError("evaluation at t = " + std::to_string(t) + " outside grid domain [" +
                    std::to_string(t0_) + ", " + std::to_string(t_end()) + "]");
  }
  return at_time_clamped(t);
}

double GridFunction::at_time_clamped(double t) const {
  double pos = (t - t0_) / dt_;
  const auto last = static_cast<double>(values_.size() - 1);
  pos = std::clamp(pos, 0.0, last);
  auto i = static_cast<std::size_t>(pos);
  if (i >= values_.size() - 1) i = values_.size() - 2;
  const double w = pos - static_cast<double>(i);
  return values_[i] + w * (values_[i + 1] - values_[i]);
}

double GridFunction::min_value() const {
  return *std::min_element(values_.begin(), values_.end());
}

double GridFunction::max_value() const {
  return *std::max_element(values_.begin(), values_.end());
}

GridFunction GridFunction::restrict_to(double lo, double hi) const {
  const double slack = 1e-9 * dt_;
  const auto n = values_.size();
  std::size_t first = 0;
  while (first < n && node_time(first) < lo - slack) ++first;
  std::size_t last = n;
  while (last > first && node_time(last - 1) > hi + slack) --last;
  if (last - first < 2) throw GridError("restriction window keeps fewer than two nodes");
  return GridFunction(node_time(first), dt_,
                      std::vector<double>(values_.begin() + static_cast<std::ptrdiff_t>(first),
                                          values_.begin() + static_cast<std::ptrdiff_t>(last)));
}

GridFunction GridFunction::resampled(double t0, double dt, std::size_t len) const {
  std::vector<double> v(len);
  for (std::size_t i = 0; i < len; ++i)
    v[i] = at_time_clamped(t0 + dt * static_cast<double>(i));
  return GridFunction(t0, dt, std::move(v));
}

double GridFunction::sup_diff(const GridFunction& a, const GridFunction& b) {
  if (!a.same_lattice(b)) throw GridError("sup_diff needs matching lattices");
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < a.values_.size(); ++i)
    worst = std::max(worst, a.values_[i] - b.values_[i]);
  return worst;
}

bool GridFunction::leq(const GridFunction& a, const GridFunction& b, double tol) {
  if (!a.same_lattice(b)) throw GridError("order comparison needs matching lattices");
  for (std::size_t i = 0; i < a.values_.size(); ++i)
    if (a.values_[i] > b.values_[i] + tol) return false;
  return true;
}

}  // namespace apfix
