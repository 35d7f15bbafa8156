#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hierhmc/samplers.hpp"

namespace hierhmc {

ChainState::ChainState(const TargetModel& model, Vec q) { assign(model, std::move(q)); }

ChainState::ChainState(Vec q, double logp, Vec grad) { assign(std::move(q), logp, std::move(grad)); }

void ChainState::assign(Vec q, double logp, Vec grad) {
  if (q.size() != grad.size()) throw std::invalid_argument("ChainState: gradient size mismatch");
  q_ = std::move(q);
  logp_ = logp;
  grad_ = std::move(grad);
}

void ChainState::assign(const TargetModel& model, Vec q) {
  Vec grad;
  const double logp = model.log_density_gradient(q, grad);
  if (!std::isfinite(logp) || !grad.allFinite()) {
    throw std::domain_error("ChainState: log density or gradient not finite at position");
  }
  assign(std::move(q), logp, std::move(grad));
}

namespace {

void check_scales(const Vec& scale, Eigen::Index dim) {
  if (scale.size() != dim) throw std::invalid_argument("proposal scale has wrong dimension");
  if (!(scale.array() > 0.0).all()) throw std::invalid_argument("proposal scales must be positive");
}

double metropolis_probability(double log_ratio) {
  if (std::isnan(log_ratio)) return 0.0;
  return log_ratio >= 0.0 ? 1.0 : std::exp(log_ratio);
}

}  // namespace

TransitionStats rwm_transition(ChainState& state, const Vec& scale, const TargetModel& model,
                               RngStream& rng) {
  check_scales(scale, state.dim());
  TransitionStats stats;
  stats.n_steps = 1;
  stats.n_evals = 1;

  Vec proposal = state.q() + scale.cwiseProduct(rng.normal_vector(state.dim()));
  Vec grad;
  const double logp = model.log_density_gradient(proposal, grad);
  const bool finite = std::isfinite(logp) && grad.allFinite();
  const double log_ratio = finite ? logp - state.logp() : -std::numeric_limits<double>::infinity();

  stats.accept_stat = metropolis_probability(log_ratio);
  if (finite && std::log(rng.uniform()) < log_ratio) {
    stats.max_delta_v = std::abs(logp - state.logp());
    state.assign(std::move(proposal), logp, std::move(grad));
    stats.accepted = true;
  }
  if (!finite) stats.nonfinite_proposals = 1;
  return stats;
}

TransitionStats mwg_sweep(ChainState& state, const Vec& scales, const TargetModel& model, RngStream& rng) {
  check_scales(scales, state.dim());
  TransitionStats stats;
  const Eigen::Index d = state.dim();
  stats.n_steps = static_cast<int>(d);
  stats.n_evals = d;

  Vec q = state.q();
  double logp = state.logp();
  double accept_sum = 0.0;
  bool moved = false;
  for (Eigen::Index i = 0; i < d; ++i) {
    const double old = q(i);
    q(i) = old + scales(i) * rng.normal();
    const double candidate = model.log_density(q);
    const double log_ratio =
        std::isfinite(candidate) ? candidate - logp : -std::numeric_limits<double>::infinity();
    accept_sum += metropolis_probability(log_ratio);
    if (!std::isfinite(candidate)) ++stats.nonfinite_proposals;
    if (std::isfinite(candidate) && std::log(rng.uniform()) < log_ratio) {
      logp = candidate;
      moved = true;
    } else {
      q(i) = old;
    }
  }
  stats.accept_stat = accept_sum / static_cast<double>(d);
  stats.accepted = moved;
  if (moved) {
    stats.max_delta_v = std::abs(logp - state.logp());
    state.assign(model, std::move(q));
  }
  return stats;
}

}  // namespace hierhmc
