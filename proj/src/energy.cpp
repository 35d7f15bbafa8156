#include "hierhmc/energy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hierhmc {

void EnergyTracker::observe(EnergyPoint point) {
  const double dv = std::abs(point.potential - start_.potential);
  const double dt = std::abs(point.kinetic - start_.kinetic);
  const double dh = std::abs(point.hamiltonian() - start_.hamiltonian());
  if (!std::isfinite(dv) || !std::isfinite(dt) || !std::isfinite(dh)) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    extremes_ = {inf, inf, inf};
    return;
  }
  extremes_.max_delta_v = std::max(extremes_.max_delta_v, dv);
  extremes_.max_delta_t = std::max(extremes_.max_delta_t, dt);
  extremes_.max_abs_delta_h = std::max(extremes_.max_abs_delta_h, dh);
}

std::vector<EnergyDelta> energy_deltas(std::span<const EnergyPoint> trace) {
  std::vector<EnergyDelta> out;
  if (trace.empty()) return out;
  out.reserve(trace.size());
  const EnergyPoint& start = trace.front();
  for (const auto& point : trace) {
    out.push_back({point.potential - start.potential, point.kinetic - start.kinetic,
                   point.hamiltonian() - start.hamiltonian()});
  }
  return out;
}

EnergyExtremes energy_stats(std::span<const EnergyPoint> trace) {
  if (trace.empty()) return {};
  EnergyTracker tracker(trace.front());
  for (const auto& point : trace.subspan(1)) tracker.observe(point);
  return tracker.extremes();
}

}  // namespace hierhmc
