#pragma once

#include <limits>

#include "hierhmc/linalg.hpp"
#include "hierhmc/model.hpp"

namespace hierhmc {

/// Per-transition sampler output.
struct TransitionStats {
  double accept_stat = 1.0;
  double step_size = std::numeric_limits<double>::quiet_NaN();
  int n_steps = 0;
  int tree_depth = -1;
  bool divergent = false;
  bool accepted = false;
  /// Hamiltonian at the returned state; NaN for Metropolis kernels.
  double energy = std::numeric_limits<double>::quiet_NaN();
  /// Extremes along the trajectory relative to its start.
  double max_delta_v = 0.0;
  double max_delta_t = 0.0;
  double max_abs_delta_h = 0.0;
  /// Density or gradient evaluations spent on this transition.
  long n_evals = 0;
  /// Metropolis proposals rejected because the log density was not finite.
  int nonfinite_proposals = 0;
};

/// Current position with its cached log density and gradient. The cache is
/// only ever replaced together with the position.
class ChainState {
 public:
  ChainState(const TargetModel& model, Vec q);
  ChainState(Vec q, double logp, Vec grad);

  const Vec& q() const { return q_; }
  double logp() const { return logp_; }
  const Vec& grad() const { return grad_; }
  Eigen::Index dim() const { return q_.size(); }

  void assign(Vec q, double logp, Vec grad);
  void assign(const TargetModel& model, Vec q);

 private:
  Vec q_;
  double logp_;
  Vec grad_;
};

/// Energy threshold past which a trajectory counts as divergent.
inline constexpr double kMaxEnergyError = 1000.0;

}  // namespace hierhmc
