#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "tdr/graph.hpp"
#include "tdr/rng.hpp"
#include "tdr/ttf.hpp"

namespace tdr::test {

/// Random FIFO travel-time function, independent of the production
/// generator: descents are clamped by construction and verified.
inline Ttf random_fifo_ttf(SplitMix64& rng, double period, std::uint32_t max_points = 8,
                           double base_lo = 20.0, double base_hi = 200.0) {
  const auto k = static_cast<std::uint32_t>(rng.range(1, max_points));
  const double base = rng.uniform(base_lo, base_hi);
  if (k == 1) return Ttf::constant(base, period);
  std::vector<TtfPoint> pts(k);
  const double slot = period / k;
  for (std::uint32_t i = 0; i < k; ++i) {
    pts[i].time = (i + 0.1 + 0.8 * rng.uniform()) * slot;
    pts[i].value = base * (1.0 + 0.6 * (2.0 * rng.uniform() - 1.0));
  }
  for (int round = 0; round < 10; ++round) {
    bool changed = false;
    for (std::uint32_t i = 0; i < k; ++i) {
      const std::uint32_t j = (i + 1) % k;
      const double dt = (j == 0 ? pts[j].time + period : pts[j].time) - pts[i].time;
      const double floor_v = pts[i].value - 0.999 * dt;
      if (pts[j].value < floor_v) {
        pts[j].value = floor_v;
        changed = true;
      }
    }
    if (!changed) break;
  }
  Ttf f(std::move(pts), period);
  REQUIRE(f.is_fifo());
  return f;
}

/// Semantic equality on a shared sample grid plus both breakpoint sets.
inline bool ttf_close(const Ttf& a, const Ttf& b, double tol = 1e-9) {
  if (a.period() != b.period()) return false;
  std::vector<double> taus;
  for (const auto& p : a.points()) taus.push_back(p.time);
  for (const auto& p : b.points()) taus.push_back(p.time);
  for (int i = 0; i < 257; ++i) taus.push_back(a.period() * i / 257.0);
  for (double tau : taus) {
    if (std::fabs(a.eval(tau) - b.eval(tau)) > tol) return false;
  }
  return true;
}

/// True iff tau lies in one of the (possibly wrapping) intervals, mod period.
inline bool in_intervals(const std::vector<TimeInterval>& ivs, double tau, double period) {
  double t = std::fmod(tau, period);
  if (t < 0) t += period;
  for (const auto& iv : ivs) {
    if (t >= iv.begin && t <= iv.end) return true;
    if (iv.end > period && t + period >= iv.begin && t + period <= iv.end) return true;
  }
  return false;
}

inline Ttf make_ttf(std::vector<TtfPoint> pts, double period) {
  return Ttf(std::move(pts), period);
}

}  // namespace tdr::test
