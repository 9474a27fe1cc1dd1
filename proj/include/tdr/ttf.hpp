#pragma once

#include <cstddef>
#include <vector>

namespace tdr {

/// One breakpoint of a periodic piecewise-linear function.
struct TtfPoint {
  double time;   // seconds, in [0, period)
  double value;  // seconds, >= 0
};

/// Departure-time interval. `end` may exceed the period, in which case the
/// interval wraps around (it is interpreted modulo the period). Always
/// begin <= end and end - begin <= period.
struct TimeInterval {
  double begin = 0.0;
  double end = 0.0;

  double length() const { return end - begin; }
};

/// Periodic piecewise-linear travel-time function.
///
/// Between consecutive breakpoints the function interpolates linearly; the
/// last breakpoint connects to the first one shifted by one period, so a
/// single breakpoint is a constant function. Breakpoint times are strictly
/// increasing within [0, period) and values are finite and non-negative.
///
/// The routing algorithms additionally expect the FIFO property (no segment
/// slope below -1, i.e. departing later never yields an earlier arrival);
/// that is checked by is_fifo() and required by the graph builder, not by
/// the constructor.
///
/// Instances are immutable; all operations are pure functions.
class Ttf {
 public:
  Ttf(std::vector<TtfPoint> points, double period);

  static Ttf constant(double value, double period);

  /// Interpolated value at tau mod period. O(log n).
  double eval(double tau) const;

  /// tau + eval(tau). Non-decreasing in tau iff the function is FIFO.
  double arrival(double tau) const { return tau + eval(tau); }

  /// True iff every segment slope (including the wrap segment) is >= -1,
  /// up to a small numerical slack.
  bool is_fifo() const;

  /// Exact extrema; piecewise-linear extrema occur at breakpoints.
  double global_min() const { return min_; }
  double global_max() const { return max_; }

  /// Minimum over departure times in [a, b]; collapses to global_min()
  /// when the window spans a full period.
  double min_on(double a, double b) const;

  /// Integral mean over one period.
  double mean() const;

  bool is_constant() const { return points_.size() == 1; }
  std::size_t size() const { return points_.size(); }
  const std::vector<TtfPoint>& points() const { return points_; }
  double period() const { return period_; }

 private:
  std::vector<TtfPoint> points_;
  double period_;
  double min_;
  double max_;
};

/// Lower/upper sandwich of a travel-time function (both FIFO).
struct BoundPair {
  Ttf lower;
  Ttf upper;
};

/// Chains f (traversed first) with g: tau -> f(tau) + g(tau + f(tau)).
/// Exact for FIFO f. Periods must match.
Ttf link(const Ttf& f, const Ttf& g);

/// Exact pointwise lower envelope min(f, g). Periods must match.
Ttf minimum(const Ttf& f, const Ttf& g);

/// Maximal disjoint departure intervals within one period on which
/// f(tau) < g(tau) holds strictly. Periods must match.
std::vector<TimeInterval> undercut_intervals(const Ttf& f, const Ttf& g);

/// Simplified bounds with lower <= f <= upper, upper <= (1+eps)*f and
/// lower >= f/(1+eps) everywhere. Both bounds are FIFO whenever f is, and
/// never use more breakpoints than f. eps = 0 reproduces f.
BoundPair approximate(const Ttf& f, double epsilon);

/// Componentwise composition helpers for bound arithmetic.
BoundPair link_bounds(const BoundPair& a, const BoundPair& b);
BoundPair min_bounds(const BoundPair& a, const BoundPair& b);

/// Exact (segment-wise, not sampled) check that lower <= upper everywhere.
bool bounds_valid(const BoundPair& b);

}  // namespace tdr
