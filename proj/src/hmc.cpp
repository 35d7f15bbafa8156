#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "hierhmc/samplers.hpp"

namespace hierhmc {

bool leapfrog_step(PhasePoint& z, double eps, const TargetModel& model, const EuclideanMetric& metric) {
  z.p += 0.5 * eps * z.grad;
  z.q += eps * metric.velocity(z.p);
  z.logp = model.log_density_gradient(z.q, z.grad);
  if (!std::isfinite(z.logp) || !z.grad.allFinite()) return false;
  z.p += 0.5 * eps * z.grad;
  return true;
}

double euclidean_hamiltonian(const Vec& q, const Vec& p, const TargetModel& model,
                             const EuclideanMetric& metric) {
  return metric.kinetic(p) - model.log_density(q);
}

TransitionStats ehmc_transition(ChainState& state, double eps, int steps, const TargetModel& model,
                                const EuclideanMetric& metric, RngStream& rng) {
  if (steps < 1) throw std::invalid_argument("ehmc_transition: step count must be at least 1");
  if (!(eps > 0.0)) throw std::invalid_argument("ehmc_transition: step size must be positive");

  TransitionStats stats;
  PhasePoint z{state.q(), metric.sample_momentum(rng), state.logp(), state.grad()};
  const EnergyPoint start{metric.kinetic(z.p), -z.logp};
  const double h0 = start.hamiltonian();
  EnergyTracker tracker(start);

  double h = h0;
  for (int s = 0; s < steps; ++s) {
    const bool finite = leapfrog_step(z, eps, model, metric);
    ++stats.n_steps;
    if (!finite) {
      stats.divergent = true;
      break;
    }
    const EnergyPoint point{metric.kinetic(z.p), -z.logp};
    tracker.observe(point);
    h = point.hamiltonian();
    if (!std::isfinite(h) || h - h0 > kMaxEnergyError) {
      stats.divergent = true;
      break;
    }
  }
  stats.n_evals = stats.n_steps;
  stats.max_delta_v = tracker.extremes().max_delta_v;
  stats.max_delta_t = tracker.extremes().max_delta_t;
  stats.max_abs_delta_h = tracker.extremes().max_abs_delta_h;

  if (stats.divergent) {
    stats.accept_stat = 0.0;
    stats.energy = h0;
    return stats;
  }
  const double log_ratio = h0 - h;
  stats.accept_stat = log_ratio >= 0.0 ? 1.0 : std::exp(log_ratio);
  if (std::log(rng.uniform()) < log_ratio) {
    state.assign(std::move(z.q), z.logp, std::move(z.grad));
    stats.accepted = true;
    stats.energy = h;
  } else {
    stats.energy = h0;
  }
  return stats;
}

}  // namespace hierhmc
