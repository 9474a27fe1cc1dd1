#include "tdr/ttf.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace tdr {

namespace {

// Breakpoint times closer than this are treated as one breakpoint.
constexpr double kTimeEps = 1e-9;
// Collinearity tolerance for merging redundant breakpoints.
constexpr double kMergeTol = 1e-12;
// Numerical slack for FIFO slope checks.
constexpr double kSlopeSlack = 1e-9;

double wrap(double tau, double period) {
  double r = std::fmod(tau, period);
  if (r < 0) r += period;
  if (r >= period) r = 0;  // fmod can land exactly on period
  return r;
}

// Removes points that lie (within tolerance) on the line through their
// cyclic neighbours. Keeps at least one point; detects constants.
std::vector<TtfPoint> merge_collinear(std::vector<TtfPoint> pts, double period) {
  if (pts.size() <= 1) return pts;

  bool all_equal = true;
  for (const auto& p : pts) {
    if (std::fabs(p.value - pts[0].value) > kMergeTol * std::max(1.0, std::fabs(pts[0].value))) {
      all_equal = false;
      break;
    }
  }
  if (all_equal) return {pts[0]};

  auto redundant = [&](const TtfPoint& a, const TtfPoint& b, const TtfPoint& c) {
    // b redundant if it sits on segment a-c (times unrolled, a.time < b.time < c.time).
    double t = (b.time - a.time) / (c.time - a.time);
    double on_line = a.value + t * (c.value - a.value);
    return std::fabs(b.value - on_line) <= kMergeTol * std::max(1.0, std::fabs(b.value));
  };

  // Linear pass with a stack, then fix up the wrap around the period.
  std::vector<TtfPoint> out;
  out.reserve(pts.size());
  for (const auto& p : pts) {
    while (out.size() >= 2 && redundant(out[out.size() - 2], out.back(), p)) out.pop_back();
    out.push_back(p);
  }
  // Wrap checks: last point against (second-to-last, first+period) and
  // first point against (last-period, second). May cascade a few times.
  bool changed = true;
  while (changed && out.size() >= 3) {
    changed = false;
    TtfPoint first_up{out.front().time + period, out.front().value};
    if (redundant(out[out.size() - 2], out.back(), first_up)) {
      out.pop_back();
      changed = true;
      continue;
    }
    TtfPoint last_down{out[out.size() - 1].time - period, out[out.size() - 1].value};
    if (redundant(last_down, out.front(), out[1])) {
      out.erase(out.begin());
      changed = true;
    }
  }
  if (out.size() == 2) {
    if (std::fabs(out[0].value - out[1].value) <=
        kMergeTol * std::max(1.0, std::fabs(out[0].value))) {
      out.pop_back();
    }
  }
  return out;
}

// Sorts by time, drops near-duplicate times (keeping the first) and merges
// collinear runs. Input times must already be in [0, period).
std::vector<TtfPoint> canonicalize(std::vector<TtfPoint> pts, double period) {
  std::sort(pts.begin(), pts.end(),
            [](const TtfPoint& a, const TtfPoint& b) { return a.time < b.time; });
  std::vector<TtfPoint> dedup;
  dedup.reserve(pts.size());
  for (const auto& p : pts) {
    if (!dedup.empty() && p.time - dedup.back().time <= kTimeEps) continue;
    dedup.push_back(p);
  }
  // A point within kTimeEps of first+period duplicates the first point.
  if (dedup.size() >= 2 && (dedup.front().time + period) - dedup.back().time <= kTimeEps) {
    dedup.pop_back();
  }
  return merge_collinear(std::move(dedup), period);
}

// Walks the unrolled breakpoints of a periodic function in increasing
// real-time order: positions pts[j].time + k*period.
class BreakpointWalker {
 public:
  BreakpointWalker(const std::vector<TtfPoint>& pts, double period)
      : pts_(pts), period_(period) {}

  // Positions the walker at the first breakpoint with position > v.
  void seek_above(double v) {
    offset_ = period_ * std::floor((v - pts_.front().time) / period_) - period_;
    j_ = 0;
    while (pos() <= v) advance();
  }

  double pos() const { return pts_[j_].time + offset_; }
  double value() const { return pts_[j_].value; }

  void advance() {
    if (++j_ == pts_.size()) {
      j_ = 0;
      offset_ += period_;
    }
  }

 private:
  const std::vector<TtfPoint>& pts_;
  double period_;
  std::size_t j_ = 0;
  double offset_ = 0;
};

void require_same_period(const Ttf& f, const Ttf& g) {
  if (f.period() != g.period()) throw std::invalid_argument("ttf: period mismatch");
}

}  // namespace

Ttf::Ttf(std::vector<TtfPoint> points, double period) : points_(std::move(points)), period_(period) {
  if (!(period_ > 0)) throw std::invalid_argument("ttf: period must be positive");
  if (points_.empty()) throw std::invalid_argument("ttf: needs at least one point");
  double prev = -std::numeric_limits<double>::infinity();
  for (const auto& p : points_) {
    if (!std::isfinite(p.time) || !std::isfinite(p.value))
      throw std::invalid_argument("ttf: non-finite point");
    if (p.value < 0) throw std::invalid_argument("ttf: negative value");
    if (p.time < 0 || p.time >= period_) throw std::invalid_argument("ttf: time out of range");
    if (p.time <= prev) throw std::invalid_argument("ttf: times not strictly increasing");
    prev = p.time;
  }
  min_ = std::numeric_limits<double>::infinity();
  max_ = -std::numeric_limits<double>::infinity();
  for (const auto& p : points_) {
    min_ = std::min(min_, p.value);
    max_ = std::max(max_, p.value);
  }
}

Ttf Ttf::constant(double value, double period) { return Ttf({{0.0, value}}, period); }

double Ttf::eval(double tau) const {
  if (points_.size() == 1) return points_[0].value;
  double t = wrap(tau, period_);
  auto it = std::upper_bound(points_.begin(), points_.end(), t,
                             [](double v, const TtfPoint& p) { return v < p.time; });
  if (it == points_.begin() || it == points_.end()) {
    // Wrap segment from the last point to the first point shifted by +period.
    const TtfPoint& a = points_.back();
    const TtfPoint& b = points_.front();
    double x1 = b.time + period_;
    double tt = (it == points_.begin()) ? t + period_ : t;
    return a.value + (b.value - a.value) * ((tt - a.time) / (x1 - a.time));
  }
  const TtfPoint& b = *it;
  const TtfPoint& a = *(it - 1);
  return a.value + (b.value - a.value) * ((t - a.time) / (b.time - a.time));
}

bool Ttf::is_fifo() const {
  if (points_.size() == 1) return true;
  for (std::size_t i = 0; i + 1 < points_.size(); ++i) {
    double dt = points_[i + 1].time - points_[i].time;
    if (points_[i + 1].value - points_[i].value < -(1.0 + kSlopeSlack) * dt) return false;
  }
  double dt = points_.front().time + period_ - points_.back().time;
  if (points_.front().value - points_.back().value < -(1.0 + kSlopeSlack) * dt) return false;
  return true;
}

double Ttf::min_on(double a, double b) const {
  if (b < a) std::swap(a, b);
  if (b - a >= period_ || points_.size() == 1) return min_;
  double m = std::min(eval(a), eval(b));
  BreakpointWalker walk(points_, period_);
  walk.seek_above(a);
  while (walk.pos() < b) {
    m = std::min(m, walk.value());
    walk.advance();
  }
  return m;
}

double Ttf::mean() const {
  if (points_.size() == 1) return points_[0].value;
  double area = 0;
  for (std::size_t i = 0; i + 1 < points_.size(); ++i) {
    area += 0.5 * (points_[i].value + points_[i + 1].value) * (points_[i + 1].time - points_[i].time);
  }
  area += 0.5 * (points_.back().value + points_.front().value) *
          (points_.front().time + period_ - points_.back().time);
  return area / period_;
}

Ttf link(const Ttf& f, const Ttf& g) {
  require_same_period(f, g);
  const double period = f.period();
  const auto& fp = f.points();
  const std::size_t n = fp.size();

  // Candidate departure times: every breakpoint of f plus every departure
  // whose arrival tau + f(tau) crosses a breakpoint of g. Arrivals are
  // non-decreasing for FIFO f, so a single monotone walk over g's unrolled
  // breakpoints covers one full period.
  std::vector<double> taus;
  taus.reserve(n + g.size() + 2);

  BreakpointWalker gwalk(g.points(), period);
  bool gwalk_init = false;

  for (std::size_t i = 0; i < n; ++i) {
    double x0 = fp[i].time;
    double y0 = fp[i].value;
    double x1 = (i + 1 < n) ? fp[i + 1].time : fp[0].time + period;
    double y1 = (i + 1 < n) ? fp[i + 1].value : fp[0].value;

    taus.push_back(x0);

    double a0 = x0 + y0;
    double a1 = x1 + y1;
    if (a1 <= a0) continue;  // flat or non-FIFO arrival: no interior crossings
    if (!gwalk_init) {
      gwalk.seek_above(a0);
      gwalk_init = true;
    } else {
      while (gwalk.pos() <= a0) gwalk.advance();
    }
    double inv_slope = (x1 - x0) / (a1 - a0);
    while (gwalk.pos() < a1) {
      double tau = x0 + (gwalk.pos() - a0) * inv_slope;
      if (tau > x0 && tau < x1) taus.push_back(tau);
      gwalk.advance();
    }
  }

  std::vector<TtfPoint> out;
  out.reserve(taus.size());
  for (double tau : taus) {
    double ft = f.eval(tau);
    out.push_back({wrap(tau, period), ft + g.eval(tau + ft)});
  }
  return Ttf(canonicalize(std::move(out), period), period);
}

namespace {

// Shared sweep over the merged breakpoint grid of f and g. Visits every
// maximal sub-interval [a, b] of one period on which both functions are
// linear, handing the endpoint values to the callback.
template <typename Fn>
void sweep_linear_pieces(const Ttf& f, const Ttf& g, Fn&& piece) {
  const double period = f.period();
  std::vector<double> xs;
  xs.reserve(f.size() + g.size());
  for (const auto& p : f.points()) xs.push_back(p.time);
  for (const auto& p : g.points()) xs.push_back(p.time);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end(),
                       [](double a, double b) { return b - a <= kTimeEps; }),
           xs.end());
  if (xs.size() >= 2 && (xs.front() + period) - xs.back() <= kTimeEps) xs.pop_back();

  const std::size_t m = xs.size();
  std::vector<double> fv(m), gv(m);
  for (std::size_t i = 0; i < m; ++i) {
    fv[i] = f.eval(xs[i]);
    gv[i] = g.eval(xs[i]);
  }
  for (std::size_t i = 0; i < m; ++i) {
    std::size_t j = (i + 1 == m) ? 0 : i + 1;
    double b = (i + 1 == m) ? xs[0] + period : xs[j];
    piece(xs[i], b, fv[i], gv[i], fv[j], gv[j]);
  }
}

}  // namespace

Ttf minimum(const Ttf& f, const Ttf& g) {
  require_same_period(f, g);
  if (f.global_max() <= g.global_min()) return f;
  if (g.global_max() <= f.global_min()) return g;

  const double period = f.period();
  std::vector<TtfPoint> out;
  out.reserve(f.size() + g.size());
  sweep_linear_pieces(f, g, [&](double a, double b, double fa, double ga, double fb, double gb) {
    out.push_back({wrap(a, period), std::min(fa, ga)});
    double da = fa - ga;
    double db = fb - gb;
    if ((da < 0 && db > 0) || (da > 0 && db < 0)) {
      double t = da / (da - db);
      double x = a + t * (b - a);
      double v = fa + t * (fb - fa);
      if (x > a + kTimeEps && x < b - kTimeEps) out.push_back({wrap(x, period), v});
    }
  });
  return Ttf(canonicalize(std::move(out), period), period);
}

std::vector<TimeInterval> undercut_intervals(const Ttf& f, const Ttf& g) {
  require_same_period(f, g);
  if (f.global_min() >= g.global_max()) return {};
  const double period = f.period();

  // Collect sub-intervals (in unrolled time over one period) where f < g.
  struct Span {
    double begin, end;
    bool open_begin_at_zero_diff;  // diff == 0 exactly at begin
  };
  std::vector<TimeInterval> raw;
  bool full = true;
  sweep_linear_pieces(f, g, [&](double a, double b, double fa, double ga, double fb, double gb) {
    double da = fa - ga;
    double db = fb - gb;
    if (da < 0 && db < 0) {
      raw.push_back({a, b});
    } else if (da < 0 && db >= 0) {
      double t = da / (da - db);  // crossing (db > 0) or endpoint touch (db == 0)
      raw.push_back({a, a + t * (b - a)});
      full = false;
    } else if (da >= 0 && db < 0) {
      double t = da / (da - db);
      raw.push_back({a + t * (b - a), b});
      full = false;
    } else {
      full = false;
    }
  });
  if (raw.empty()) return {};
  if (full) return {TimeInterval{0.0, period}};

  // Merge intervals sharing an endpoint where the difference stays strictly
  // negative through the junction; zero-touch junctions stay distinct since
  // the undercut set is open.
  auto negative_at = [&](double x) { return f.eval(x) - g.eval(x) < 0; };
  std::vector<TimeInterval> merged;
  for (const auto& iv : raw) {
    if (!merged.empty() && iv.begin - merged.back().end <= kTimeEps && negative_at(iv.begin)) {
      merged.back().end = iv.end;
    } else {
      merged.push_back(iv);
    }
  }
  // Wrap: last interval may continue into the first one (shifted by period).
  if (merged.size() >= 2) {
    double wrap_gap = (merged.front().begin + period) - merged.back().end;
    if (wrap_gap <= kTimeEps && negative_at(merged.front().begin)) {
      merged.back().end = merged.front().end + period;
      merged.erase(merged.begin());
    }
  }
  // Normalize into [0, period) starts.
  for (auto& iv : merged) {
    if (iv.begin >= period) {
      iv.begin -= period;
      iv.end -= period;
    }
  }
  std::sort(merged.begin(), merged.end(),
            [](const TimeInterval& a, const TimeInterval& b) { return a.begin < b.begin; });
  return merged;
}

namespace {

// Greedy one-sided corridor simplification. Anchors lie on f itself, so the
// result keeps FIFO (secant slopes of a FIFO function are >= -1) and never
// gains breakpoints. Gates give the corridor the segment must pass through
// at every skipped breakpoint.
Ttf greedy_corridor(const Ttf& f, double lo_factor, double hi_factor) {
  const auto& fp = f.points();
  const std::size_t n = fp.size();
  const double period = f.period();
  if (n == 1) return f;

  auto px = [&](std::size_t i) { return i < n ? fp[i].time : fp[0].time + period; };
  auto py = [&](std::size_t i) { return i < n ? fp[i].value : fp[0].value; };

  std::vector<TtfPoint> anchors;
  anchors.push_back(fp[0]);
  std::size_t a = 0;
  double cone_lo = -std::numeric_limits<double>::infinity();
  double cone_hi = std::numeric_limits<double>::infinity();

  std::size_t j = 1;
  while (j <= n) {
    double dx = px(j) - px(a);
    double s = (py(j) - py(a)) / dx;
    double slack = kMergeTol * std::max(1.0, std::fabs(py(j))) / dx;
    if (s >= cone_lo - slack && s <= cone_hi + slack) {
      if (j < n) {
        cone_lo = std::max(cone_lo, (py(j) * lo_factor - py(a)) / dx);
        cone_hi = std::min(cone_hi, (py(j) * hi_factor - py(a)) / dx);
      }
      ++j;
    } else {
      a = j - 1;
      anchors.push_back(fp[a]);
      cone_lo = -std::numeric_limits<double>::infinity();
      cone_hi = std::numeric_limits<double>::infinity();
    }
  }
  return Ttf(canonicalize(std::move(anchors), period), period);
}

}  // namespace

BoundPair approximate(const Ttf& f, double epsilon) {
  if (epsilon < 0) throw std::invalid_argument("approximate: negative epsilon");
  if (epsilon == 0 || f.is_constant()) return {f, f};
  double inv = 1.0 / (1.0 + epsilon);
  // Upper bound: anchors on f, corridor [f, (1+eps) f].
  Ttf upper = greedy_corridor(f, 1.0, 1.0 + epsilon);
  // Lower bound: anchors on f, corridor [f/(1+eps), f].
  Ttf lower = greedy_corridor(f, inv, 1.0);
  return {std::move(lower), std::move(upper)};
}

BoundPair link_bounds(const BoundPair& a, const BoundPair& b) {
  return {link(a.lower, b.lower), link(a.upper, b.upper)};
}

BoundPair min_bounds(const BoundPair& a, const BoundPair& b) {
  return {minimum(a.lower, b.lower), minimum(a.upper, b.upper)};
}

bool bounds_valid(const BoundPair& b) {
  // lower <= upper everywhere iff upper never strictly undercuts lower.
  // Crossing points of the two envelopes carry rounding noise, so violations
  // count only when they have real width or depth.
  for (const TimeInterval& iv : undercut_intervals(b.upper, b.lower)) {
    for (double x : {iv.begin, 0.5 * (iv.begin + iv.end), iv.end}) {
      double depth = b.lower.eval(x) - b.upper.eval(x);
      if (depth > 1e-9 * std::max(1.0, b.lower.eval(x))) return false;
    }
  }
  return true;
}

}  // namespace tdr
