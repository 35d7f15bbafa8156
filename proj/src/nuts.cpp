#include <cmath>
#include <limits>
#include <stdexcept>

#include "hierhmc/samplers.hpp"

namespace hierhmc {

namespace {

struct Subtree {
  PhasePoint minus;
  PhasePoint plus;
  PhasePoint proposal;
  double proposal_energy = 0.0;
  long n_valid = 0;
  bool keep_going = true;
  bool divergent = false;
  double sum_accept = 0.0;
  long n_accept = 0;
};

bool no_u_turn(const PhasePoint& minus, const PhasePoint& plus, const EuclideanMetric& metric) {
  const Vec span = plus.q - minus.q;
  return span.dot(metric.velocity(minus.p)) >= 0.0 && span.dot(metric.velocity(plus.p)) >= 0.0;
}

// Recursive tree doubling of the slice-sampling No-U-Turn sampler.
class TreeBuilder {
 public:
  TreeBuilder(const TargetModel& model, const EuclideanMetric& metric, RngStream& rng, double eps,
              double log_slice, double h0, EnergyTracker& tracker)
      : model_(model),
        metric_(metric),
        rng_(rng),
        eps_(eps),
        log_slice_(log_slice),
        h0_(h0),
        tracker_(tracker) {}

  int n_steps() const { return n_steps_; }

  Subtree build(const PhasePoint& start, int direction, int depth) {
    if (depth == 0) return leaf(start, direction);

    Subtree tree = build(start, direction, depth - 1);
    if (!tree.keep_going) return tree;

    Subtree outer = build(direction > 0 ? tree.plus : tree.minus, direction, depth - 1);
    if (direction > 0) {
      tree.plus = std::move(outer.plus);
    } else {
      tree.minus = std::move(outer.minus);
    }
    const long total = tree.n_valid + outer.n_valid;
    if (outer.n_valid > 0 &&
        rng_.uniform() < static_cast<double>(outer.n_valid) / static_cast<double>(total)) {
      tree.proposal = std::move(outer.proposal);
      tree.proposal_energy = outer.proposal_energy;
    }
    tree.n_valid = total;
    tree.sum_accept += outer.sum_accept;
    tree.n_accept += outer.n_accept;
    tree.divergent = tree.divergent || outer.divergent;
    tree.keep_going = outer.keep_going && no_u_turn(tree.minus, tree.plus, metric_);
    return tree;
  }

 private:
  Subtree leaf(const PhasePoint& start, int direction) {
    Subtree tree;
    PhasePoint z = start;
    const bool finite = leapfrog_step(z, direction * eps_, model_, metric_);
    ++n_steps_;
    double h = std::numeric_limits<double>::infinity();
    if (finite) {
      const EnergyPoint point{metric_.kinetic(z.p), -z.logp};
      h = point.hamiltonian();
      tracker_.observe(point);
    }
    if (!std::isfinite(h)) h = std::numeric_limits<double>::infinity();

    tree.n_valid = log_slice_ <= -h ? 1 : 0;
    tree.divergent = !(log_slice_ - kMaxEnergyError < -h);
    tree.keep_going = !tree.divergent;
    tree.sum_accept = std::isfinite(h) ? std::min(1.0, std::exp(h0_ - h)) : 0.0;
    tree.n_accept = 1;
    tree.proposal_energy = h;
    tree.minus = z;
    tree.plus = z;
    tree.proposal = std::move(z);
    return tree;
  }

  const TargetModel& model_;
  const EuclideanMetric& metric_;
  RngStream& rng_;
  double eps_;
  double log_slice_;
  double h0_;
  EnergyTracker& tracker_;
  int n_steps_ = 0;
};

}  // namespace

TransitionStats nuts_transition(ChainState& state, double eps, int max_depth, const TargetModel& model,
                                const EuclideanMetric& metric, RngStream& rng) {
  if (max_depth < 1) throw std::invalid_argument("nuts_transition: max_depth must be at least 1");
  if (!(eps > 0.0)) throw std::invalid_argument("nuts_transition: step size must be positive");

  PhasePoint z0{state.q(), metric.sample_momentum(rng), state.logp(), state.grad()};
  const EnergyPoint start{metric.kinetic(z0.p), -z0.logp};
  const double h0 = start.hamiltonian();
  EnergyTracker tracker(start);
  const double log_slice = std::log(rng.uniform()) - h0;

  TreeBuilder builder(model, metric, rng, eps, log_slice, h0, tracker);
  PhasePoint minus = z0;
  PhasePoint plus = z0;
  PhasePoint chosen = std::move(z0);
  double chosen_energy = h0;
  long n_valid = 1;
  bool keep_going = true;
  bool divergent = false;
  double sum_accept = 0.0;
  long n_accept = 0;
  int depth = 0;

  while (keep_going && depth < max_depth) {
    const int direction = rng.uniform() < 0.5 ? -1 : 1;
    Subtree tree = builder.build(direction > 0 ? plus : minus, direction, depth);
    if (direction > 0) {
      plus = std::move(tree.plus);
    } else {
      minus = std::move(tree.minus);
    }
    if (tree.keep_going && tree.n_valid > 0 &&
        rng.uniform() < static_cast<double>(tree.n_valid) / static_cast<double>(n_valid)) {
      chosen = std::move(tree.proposal);
      chosen_energy = tree.proposal_energy;
    }
    n_valid += tree.n_valid;
    sum_accept += tree.sum_accept;
    n_accept += tree.n_accept;
    divergent = divergent || tree.divergent;
    keep_going = tree.keep_going && no_u_turn(minus, plus, metric);
    ++depth;
  }

  TransitionStats stats;
  stats.tree_depth = depth;
  stats.n_steps = builder.n_steps();
  stats.n_evals = stats.n_steps;
  stats.divergent = divergent;
  stats.accept_stat = n_accept > 0 ? sum_accept / static_cast<double>(n_accept) : 0.0;
  stats.energy = chosen_energy;
  stats.max_delta_v = tracker.extremes().max_delta_v;
  stats.max_delta_t = tracker.extremes().max_delta_t;
  stats.max_abs_delta_h = tracker.extremes().max_abs_delta_h;
  stats.accepted = chosen.q != state.q();
  if (stats.accepted) state.assign(std::move(chosen.q), chosen.logp, std::move(chosen.grad));
  return stats;
}

}  // namespace hierhmc
