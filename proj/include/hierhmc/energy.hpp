#pragma once

#include <span>
#include <vector>

namespace hierhmc {

/// Kinetic and potential energy at one point of a trajectory.
struct EnergyPoint {
  double kinetic;
  double potential;

  double hamiltonian() const { return kinetic + potential; }
};

/// Largest excursions of V, T and H from the trajectory start.
struct EnergyExtremes {
  double max_delta_v = 0.0;
  double max_delta_t = 0.0;
  double max_abs_delta_h = 0.0;
};

/// Running version of `energy_stats`, fed one point at a time by the
/// samplers.
class EnergyTracker {
 public:
  explicit EnergyTracker(EnergyPoint start) : start_(start) {}

  void observe(EnergyPoint point);
  const EnergyExtremes& extremes() const { return extremes_; }
  const EnergyPoint& start() const { return start_; }

 private:
  EnergyPoint start_;
  EnergyExtremes extremes_;
};

/// Signed changes relative to the trajectory start at one point.
struct EnergyDelta {
  double delta_v;
  double delta_t;
  double delta_h;
};

std::vector<EnergyDelta> energy_deltas(std::span<const EnergyPoint> trace);

/// Extremes of |V - V0|, |T - T0| and |H - H0| over a trace whose first
/// element is the trajectory start. Empty traces give zeros.
EnergyExtremes energy_stats(std::span<const EnergyPoint> trace);

}  // namespace hierhmc
