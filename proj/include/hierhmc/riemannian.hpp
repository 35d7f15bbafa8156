#pragma once

#include "hierhmc/chain.hpp"
#include "hierhmc/energy.hpp"
#include "hierhmc/model.hpp"
#include "hierhmc/random.hpp"

namespace hierhmc {

/// lambda * coth(alpha * lambda), with the lambda -> 0 limit 1 / alpha.
double softabs(double lambda, double alpha);
/// d/d lambda of `softabs`.
double softabs_derivative(double lambda, double alpha);

/// SoftAbs metric Sigma(q) = Q diag(softabs(lambda)) Q' built from the
/// Hessian of the potential V = -log pi.
struct MetricDecomposition {
  Vec eigenvalues;
  Vec regularized;
  Matrix vectors;
  double log_det = 0.0;
  double alpha = 0.0;

  /// Sigma^{-1} p.
  Vec velocity(const Vec& p) const;
  /// p' Sigma^{-1} p / 2.
  double quadratic_kinetic(const Vec& p) const;
  /// Draw from N(0, Sigma).
  Vec sample_momentum(RngStream& rng) const;
  Matrix metric() const;
  /// Divided differences of softabs over eigenvalue pairs; the diagonal holds
  /// softabs_derivative.
  Matrix divided_differences() const;
};

MetricDecomposition softabs_metric(const SymMatrix& potential_hessian, double alpha);

struct RiemannianSettings {
  double alpha = 1e6;
  double fp_tol = 1e-10;
  int fp_max = 100;
};

/// Everything the generalized leapfrog needs at one position: log density,
/// gradient, the SoftAbs metric and the momentum-independent part of dH/dq.
class RiemannianGeometry {
 public:
  RiemannianGeometry(const TargetModel& model, Vec q, double alpha);

  const Vec& q() const { return q_; }
  double logp() const { return logp_; }
  const Vec& grad() const { return grad_; }
  const MetricDecomposition& metric() const { return metric_; }
  bool finite() const { return finite_; }

  /// T(p | q) = p' Sigma^{-1} p / 2 + log|Sigma| / 2.
  double kinetic(const Vec& p) const;
  double potential() const { return -logp_; }
  double hamiltonian(const Vec& p) const { return kinetic(p) + potential(); }

  /// dH/dq at this position for momentum p.
  Vec dh_dq(const Vec& p) const;

 private:
  Vec q_;
  double logp_ = 0.0;
  Vec grad_;
  MetricDecomposition metric_;
  Tensor3 potential_third_;
  Matrix divided_;
  Vec position_force_;
  bool finite_ = true;
};

/// H = p' Sigma(q)^{-1} p / 2 + log|Sigma(q)| / 2 - log pi(q).
double rmhmc_hamiltonian(const Vec& q, const Vec& p, const TargetModel& model, double alpha);

struct GeneralizedLeapfrogResult {
  Vec q;
  Vec p;
  bool converged = false;
  long n_evals = 0;
};

/// Implicit half step in p, implicit full step in q with averaged
/// velocities, explicit half step in p. Fixed-point iterations stop when
/// successive iterates agree to fp_tol in the max norm.
GeneralizedLeapfrogResult generalized_leapfrog_step(const Vec& q, const Vec& p, double eps,
                                                    const TargetModel& model,
                                                    const RiemannianSettings& settings);

/// Same step on a cached geometry; `geometry` and `p` are replaced by their
/// values at the end of the step. Returns false (leaving the inputs in an
/// unspecified state) when a fixed point fails to converge or a value is
/// not finite.
bool generalized_leapfrog_step(RiemannianGeometry& geometry, Vec& p, double eps,
                               const TargetModel& model, const RiemannianSettings& settings,
                               long& n_evals);

/// Riemannian HMC transition with a fixed number of generalized leapfrog
/// steps. Non-convergent or divergent trajectories are rejected and
/// flagged.
TransitionStats rmhmc_transition(ChainState& state, double eps, int steps, const TargetModel& model,
                                 const RiemannianSettings& settings, RngStream& rng);

}  // namespace hierhmc
