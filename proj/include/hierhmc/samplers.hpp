#pragma once

#include "hierhmc/chain.hpp"
#include "hierhmc/energy.hpp"
#include "hierhmc/metric.hpp"
#include "hierhmc/model.hpp"
#include "hierhmc/random.hpp"

namespace hierhmc {

// Metropolis kernels -------------------------------------------------------

/// Random-walk Metropolis: proposes q + scale .* z with z ~ N(0, I).
/// Proposals with a non-finite log density are rejected.
TransitionStats rwm_transition(ChainState& state, const Vec& scale, const TargetModel& model,
                               RngStream& rng);

/// One Metropolis-within-Gibbs sweep: a one-dimensional random-walk update
/// of every coordinate in order. The acceptance statistic is the mean of the
/// per-coordinate acceptance probabilities.
TransitionStats mwg_sweep(ChainState& state, const Vec& scales, const TargetModel& model,
                          RngStream& rng);

// Euclidean Hamiltonian dynamics --------------------------------------------

/// Position, momentum and the cached log density and gradient at q.
struct PhasePoint {
  Vec q;
  Vec p;
  double logp = 0.0;
  Vec grad;
};

/// One leapfrog step: half momentum kick, full drift along Sigma^{-1} p,
/// half kick. Returns false when the new log density or gradient is not
/// finite.
bool leapfrog_step(PhasePoint& z, double eps, const TargetModel& model, const EuclideanMetric& metric);

/// H = p' Sigma^{-1} p / 2 - log pi(q).
double euclidean_hamiltonian(const Vec& q, const Vec& p, const TargetModel& model,
                             const EuclideanMetric& metric);

/// Static-length HMC: fresh momentum, `steps` leapfrog steps, Metropolis
/// correction on the energy error. Trajectories whose energy error exceeds
/// kMaxEnergyError (or become non-finite) stop early and are rejected.
TransitionStats ehmc_transition(ChainState& state, double eps, int steps, const TargetModel& model,
                                const EuclideanMetric& metric, RngStream& rng);

/// No-U-Turn transition with slice sampling: the trajectory doubles in a
/// random direction until a U-turn, a divergence or `max_depth` doublings,
/// and the next state is drawn uniformly from the slice-valid states.
TransitionStats nuts_transition(ChainState& state, double eps, int max_depth, const TargetModel& model,
                                const EuclideanMetric& metric, RngStream& rng);

}  // namespace hierhmc
