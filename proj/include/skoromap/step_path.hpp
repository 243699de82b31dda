#pragma once

// Right-continuous piecewise-constant paths on a finite grid, plus the small
// algebra the reflection maps are built from: evaluation, band projection,
// time shift, uniform distance and oscillation. Every supremum/infimum used
// by the maps is attained on the grid, so these operations are exact up to
// floating-point rounding.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace skoromap {

/// Closed band [lower, upper] with lower < upper; invalid bands are
/// unconstructible.
class Band {
 public:
  Band(double lower, double upper) : lower_(lower), upper_(upper) {
    if (!std::isfinite(lower) || !std::isfinite(upper) || !(lower < upper)) {
      throw std::invalid_argument("Band: require finite lower < upper");
    }
  }

  double lower() const { return lower_; }
  double upper() const { return upper_; }
  double width() const { return upper_ - lower_; }

 private:
  double lower_;
  double upper_;
};

/// Immutable, shareable time grid. Paths derived from one another (reflected
/// paths, regulators, resampled copies) share a single grid allocation, so
/// producing a same-grid path costs one values vector and nothing else.
using TimeGrid = std::shared_ptr<const std::vector<double>>;

/// A step path t -> values[k] for the largest k with times[k] <= t.
/// times[0] == 0, times strictly increasing, all entries finite. The path is
/// treated as constant after the last grid point.
class StepPath {
 public:
  StepPath(std::vector<double> times, std::vector<double> values)
      : times_(std::make_shared<const std::vector<double>>(std::move(times))),
        values_(std::move(values)) {
    const auto& t = *times_;
    if (t.empty() || t.size() != values_.size()) {
      throw std::invalid_argument(
          "StepPath: times/values must be nonempty and of equal length");
    }
    if (t.front() != 0.0) {
      throw std::invalid_argument("StepPath: times must start at 0");
    }
    for (std::size_t k = 0; k < t.size(); ++k) {
      if (!std::isfinite(t[k]) || !std::isfinite(values_[k])) {
        throw std::invalid_argument("StepPath: non-finite entry at index " +
                                    std::to_string(k));
      }
      if (k > 0 && !(t[k - 1] < t[k])) {
        throw std::invalid_argument(
            "StepPath: times not strictly increasing at index " +
            std::to_string(k));
      }
    }
  }

  /// Producer constructor: reuse an already-validated grid. The values are
  /// the caller's responsibility; this is the allocation-lean path every
  /// same-grid operation takes.
  StepPath(TimeGrid grid, std::vector<double> values)
      : times_(std::move(grid)), values_(std::move(values)) {
    if (!times_ || times_->size() != values_.size() || values_.empty()) {
      throw std::invalid_argument(
          "StepPath: grid/values must be nonempty and of equal length");
    }
  }

  static StepPath constant(double value) { return StepPath({0.0}, {value}); }

  std::size_t size() const { return times_->size(); }
  const std::vector<double>& times() const { return *times_; }
  const std::vector<double>& values() const { return values_; }

  /// The grid handle, for building further paths on the same grid.
  const TimeGrid& grid() const { return times_; }

  /// Final grid time; the path continues as a constant beyond it.
  double horizon() const { return times_->back(); }

  /// Largest k with times[k] <= t. Requires t >= 0.
  std::size_t index_at(double t) const {
    auto it = std::upper_bound(times_->begin(), times_->end(), t);
    return static_cast<std::size_t>(it - times_->begin()) - 1;
  }

  double eval(double t) const {
    if (!(t >= 0.0)) {
      throw std::domain_error("StepPath::eval: t must be >= 0");
    }
    return values_[index_at(t)];
  }

 private:
  TimeGrid times_;
  std::vector<double> values_;
};

/// Projection onto the band: upper if x >= upper, lower if x <= lower, x
/// otherwise. Monotone and 1-Lipschitz; returns the barrier values exactly.
inline double project_band(double x, const Band& band) {
  if (x >= band.upper()) return band.upper();
  if (x <= band.lower()) return band.lower();
  return x;
}

/// Shift operator: t -> p(r + t) - p(r) on the grid {0} U {t_k - r : t_k > r}.
inline StepPath shift(const StepPath& p, double r) {
  if (!(r >= 0.0) || !(r <= p.horizon())) {
    throw std::domain_error("shift: r must lie in [0, horizon]");
  }
  const double base = p.eval(r);
  std::vector<double> times{0.0};
  std::vector<double> values{0.0};
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (p.times()[k] > r) {
      times.push_back(p.times()[k] - r);
      values.push_back(p.values()[k] - base);
    }
  }
  return StepPath(std::move(times), std::move(values));
}

/// Sorted union of the two grids.
inline std::vector<double> merge_grids(const StepPath& p, const StepPath& q) {
  std::vector<double> merged;
  merged.reserve(p.size() + q.size());
  std::set_union(p.times().begin(), p.times().end(), q.times().begin(),
                 q.times().end(), std::back_inserter(merged));
  return merged;
}

/// Re-express p on a finer grid (any strictly increasing grid starting at 0).
/// Values are copied, never interpolated, so this is exact.
inline StepPath resample(const StepPath& p, const std::vector<double>& grid) {
  std::vector<double> values;
  values.reserve(grid.size());
  std::size_t k = 0;
  for (double t : grid) {
    while (k + 1 < p.size() && p.times()[k + 1] <= t) ++k;
    values.push_back(p.values()[k]);
  }
  return StepPath(grid, std::move(values));
}

inline bool same_grid(const StepPath& p, const StepPath& q) {
  return p.grid() == q.grid() || p.times() == q.times();
}

/// Pointwise sum of two paths on an identical grid.
inline StepPath add(const StepPath& p, const StepPath& q) {
  if (!same_grid(p, q)) {
    throw std::invalid_argument("add: paths must share one grid");
  }
  std::vector<double> values(p.size());
  for (std::size_t k = 0; k < p.size(); ++k) {
    values[k] = p.values()[k] + q.values()[k];
  }
  return StepPath(p.grid(), std::move(values));
}

inline StepPath sub(const StepPath& p, const StepPath& q) {
  if (!same_grid(p, q)) {
    throw std::invalid_argument("sub: paths must share one grid");
  }
  std::vector<double> values(p.size());
  for (std::size_t k = 0; k < p.size(); ++k) {
    values[k] = p.values()[k] - q.values()[k];
  }
  return StepPath(p.grid(), std::move(values));
}

/// t -> scale * p(t) + offset on the same grid.
inline StepPath affine(const StepPath& p, double scale, double offset) {
  std::vector<double> values(p.size());
  for (std::size_t k = 0; k < p.size(); ++k) {
    values[k] = scale * p.values()[k] + offset;
  }
  return StepPath(p.grid(), std::move(values));
}

/// Uniform (sup-norm) distance on [0, T]. Exact for step paths: the
/// difference is again a step path, so the supremum is attained on the
/// merged grid. Both paths extend as constants if T exceeds their horizons.
inline double uniform_distance(const StepPath& p, const StepPath& q,
                               double T) {
  if (!(T >= 0.0)) {
    throw std::domain_error("uniform_distance: T must be >= 0");
  }
  std::size_t i = 0;
  std::size_t j = 0;
  double vp = p.values()[0];
  double vq = q.values()[0];
  double d = std::abs(vp - vq);
  const double inf = std::numeric_limits<double>::infinity();
  while (true) {
    const double tp = i + 1 < p.size() ? p.times()[i + 1] : inf;
    const double tq = j + 1 < q.size() ? q.times()[j + 1] : inf;
    const double t = std::min(tp, tq);
    if (!(t <= T)) break;
    if (tp == t) vp = p.values()[++i];
    if (tq == t) vq = q.values()[++j];
    d = std::max(d, std::abs(vp - vq));
  }
  return d;
}

/// Oscillation (max minus min) of p over the closed window [t1, t2]. The
/// window may extend past the horizon; the constant extension applies.
inline double oscillation(const StepPath& p, double t1, double t2) {
  if (!(t1 >= 0.0) || !(t2 >= t1) || !std::isfinite(t1) ||
      !std::isfinite(t2)) {
    throw std::domain_error("oscillation: require 0 <= t1 <= t2 < inf");
  }
  std::size_t k = p.index_at(t1);
  double lo = p.values()[k];
  double hi = lo;
  for (++k; k < p.size() && p.times()[k] <= t2; ++k) {
    lo = std::min(lo, p.values()[k]);
    hi = std::max(hi, p.values()[k]);
  }
  return hi - lo;
}

}  // namespace skoromap
