#include "hierhmc/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <future>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "hierhmc/adaptation.hpp"
#include "hierhmc/samplers.hpp"

namespace hierhmc {

std::optional<SamplerKind> parse_sampler_kind(std::string_view name) {
  if (name == "rwm") return SamplerKind::rwm;
  if (name == "mwg") return SamplerKind::mwg;
  if (name == "ehmc" || name == "hmc" || name == "static") return SamplerKind::ehmc;
  if (name == "nuts") return SamplerKind::nuts;
  if (name == "rmhmc") return SamplerKind::rmhmc;
  return std::nullopt;
}

std::string to_string(SamplerKind kind) {
  switch (kind) {
    case SamplerKind::rwm: return "rwm";
    case SamplerKind::mwg: return "mwg";
    case SamplerKind::ehmc: return "ehmc";
    case SamplerKind::nuts: return "nuts";
    case SamplerKind::rmhmc: return "rmhmc";
  }
  return "unknown";
}

std::optional<MetricKind> parse_metric_kind(std::string_view name) {
  if (name == "unit") return MetricKind::unit;
  if (name == "diag" || name == "diagonal") return MetricKind::diag;
  return std::nullopt;
}

std::string to_string(MetricKind kind) { return kind == MetricKind::unit ? "unit" : "diag"; }

bool is_hamiltonian(SamplerKind kind) {
  return kind == SamplerKind::ehmc || kind == SamplerKind::nuts || kind == SamplerKind::rmhmc;
}

int effective_steps(const SamplerSettings& sampler, double eps) {
  if (sampler.steps > 0) return sampler.steps;
  if (sampler.kind != SamplerKind::rmhmc) return 10;
  constexpr int kMaxAutoSteps = 1000;
  const double l = std::round(2.0 * std::numbers::pi / eps);
  return l >= kMaxAutoSteps || !std::isfinite(l) ? kMaxAutoSteps : std::max(1, static_cast<int>(l));
}

void check_compatible(const TargetModel& model, const SamplerSettings& sampler) {
  if (sampler.kind == SamplerKind::rmhmc && !model.has_third_derivatives()) {
    throw ModelError("sampler rmhmc needs third derivatives, which model '" + model.name() + "' does not provide");
  }
  if ((sampler.kind == SamplerKind::rwm || sampler.kind == SamplerKind::mwg) && sampler.scales.size() != 0 &&
      sampler.scales.size() != model.dim()) {
    throw std::invalid_argument("proposal scales have " + std::to_string(sampler.scales.size()) +
                                " entries, model has dimension " + std::to_string(model.dim()));
  }
}

namespace {

struct ChainRun {
  DrawMatrix draws;
  DrawMatrix unconstrained;
  DrawMatrix warmup;
  ChainOutcome outcome;
};

Vec initial_point(const TargetModel& model, const RunSettings& run, std::size_t chain, RngStream& rng) {
  if (!run.inits.empty()) {
    const Vec& init = run.inits[chain % run.inits.size()];
    if (init.size() != model.dim()) throw std::invalid_argument("initial point has the wrong dimension");
    return init;
  }
  constexpr int kMaxTries = 100;
  Vec grad;
  for (int attempt = 0; attempt < kMaxTries; ++attempt) {
    Vec q(model.dim());
    for (Eigen::Index i = 0; i < q.size(); ++i) q(i) = rng.uniform(-run.init_radius, run.init_radius);
    const double logp = model.log_density_gradient(q, grad);
    if (std::isfinite(logp) && grad.allFinite()) return q;
  }
  throw std::runtime_error("no finite initial point found in " + std::to_string(kMaxTries) + " attempts");
}

ChainRun run_chain(const TargetModel& model, const SamplerSettings& sampler, const RunSettings& run,
                   std::size_t chain_index) {
  RngStream rng(run.seed, chain_index);
  const Eigen::Index dim = model.dim();
  const std::vector<std::string> names = model.parameter_names();

  ChainRun out{DrawMatrix(model.output_names()), DrawMatrix(names), DrawMatrix(model.output_names()), {}};
  out.draws.add_chain();
  out.unconstrained.add_chain();
  out.warmup.add_chain();

  ChainState state(model, initial_point(model, run, chain_index, rng));
  long evals = 1;

  EuclideanMetric metric = EuclideanMetric::unit(dim);
  const bool hamiltonian = is_hamiltonian(sampler.kind);
  const bool adapt_step = hamiltonian && sampler.adapt && run.warmup > 0;
  const bool adapt_metric = adapt_step && sampler.kind != SamplerKind::rmhmc && sampler.metric == MetricKind::diag;

  double eps = sampler.step_size;
  if (hamiltonian && !(eps > 0.0)) {
    eps = sampler.kind == SamplerKind::rmhmc ? 0.1 : initial_step_size(state, 1.0, model, metric, rng, evals);
  }
  DualAveragingState da = DualAveragingState::start(hamiltonian ? eps : 1.0, sampler.adapt_delta);
  const WarmupSchedule schedule = WarmupSchedule::make(adapt_metric ? run.warmup : 0);
  DrawMatrix window(names);
  window.add_chain();

  Vec scales = sampler.scales.size() == 0 ? Vec::Ones(dim) : sampler.scales;
  scales *= sampler.scale;

  const int total = run.warmup + run.samples;
  for (int it = 0; it < total; ++it) {
    const bool warm = it < run.warmup;
    const int steps = effective_steps(sampler, eps);
    TransitionStats stats;
    switch (sampler.kind) {
      case SamplerKind::rwm: stats = rwm_transition(state, scales, model, rng); break;
      case SamplerKind::mwg: stats = mwg_sweep(state, scales, model, rng); break;
      case SamplerKind::ehmc: stats = ehmc_transition(state, eps, steps, model, metric, rng); break;
      case SamplerKind::nuts: stats = nuts_transition(state, eps, sampler.max_depth, model, metric, rng); break;
      case SamplerKind::rmhmc: stats = rmhmc_transition(state, eps, steps, model, sampler.riemannian, rng); break;
    }
    stats.step_size = hamiltonian ? eps : sampler.scale;
    evals += stats.n_evals;
    if (!(stats.accept_stat >= 0.0)) stats.accept_stat = 0.0;

    if (warm && adapt_step) {
      da = dual_averaging_update(da, std::min(1.0, stats.accept_stat));
      eps = da.step_size();
      if (adapt_metric && schedule.in_slow_window(it)) window.append(0, state.q(), {});
      if (adapt_metric && schedule.ends_slow_window(it)) {
        metric = estimate_diag_metric(window);
        window = DrawMatrix(names);
        window.add_chain();
        eps = initial_step_size(state, eps, model, metric, rng, evals);
        da = DualAveragingState::start(eps, sampler.adapt_delta);
      }
      if (it == run.warmup - 1) eps = da.final_step_size();
    }

    const DrawStats draw{state.logp(), stats};
    if (warm) {
      if (run.save_warmup && it % run.thin == 0) out.warmup.append(0, model.constrain(state.q()), draw);
      if (it == run.warmup - 1) out.outcome.warmup_evals = evals;
      continue;
    }
    if ((it - run.warmup) % run.thin != 0) continue;
    out.draws.append(0, model.constrain(state.q()), draw);
    out.unconstrained.append(0, state.q(), draw);
  }

  out.outcome.step_size = hamiltonian ? eps : sampler.scale;
  out.outcome.inverse_metric = metric.inverse_diagonal();
  out.outcome.n_evals = evals;
  out.outcome.stability_bound = std::numeric_limits<double>::quiet_NaN();
  if (sampler.kind == SamplerKind::nuts || sampler.kind == SamplerKind::ehmc) {
    try {
      out.outcome.stability_bound = stability_bound(metric, -model.hessian(state.q()));
    } catch (const std::exception&) {
      // Hessian unavailable or not finite at the final state.
    }
  }
  return out;
}

}  // namespace

RunResult run_chains(const TargetModel& model, const SamplerSettings& sampler, const RunSettings& run) {
  if (run.chains < 1) throw std::invalid_argument("chains must be at least 1");
  if (run.warmup < 0) throw std::invalid_argument("warmup must be non-negative");
  if (run.samples < 0) throw std::invalid_argument("samples must be non-negative");
  if (run.thin < 1) throw std::invalid_argument("thin must be at least 1");
  check_compatible(model, sampler);

  const auto start = std::chrono::steady_clock::now();
  std::vector<ChainRun> runs;
  if (run.parallel && run.chains > 1) {
    std::vector<std::future<ChainRun>> futures;
    for (int c = 0; c < run.chains; ++c) {
      futures.push_back(std::async(std::launch::async, run_chain, std::cref(model), std::cref(sampler),
                                   std::cref(run), static_cast<std::size_t>(c)));
    }
    for (auto& f : futures) runs.push_back(f.get());
  } else {
    for (int c = 0; c < run.chains; ++c) runs.push_back(run_chain(model, sampler, run, static_cast<std::size_t>(c)));
  }
  const auto stop = std::chrono::steady_clock::now();

  RunResult result;
  result.draws = DrawMatrix(model.output_names());
  result.unconstrained = DrawMatrix(model.parameter_names());
  result.warmup = DrawMatrix(model.output_names());
  for (auto& r : runs) {
    result.draws.append_chains(r.draws);
    result.unconstrained.append_chains(r.unconstrained);
    result.warmup.append_chains(r.warmup);
    result.total_evals += r.outcome.n_evals;
    result.chains.push_back(std::move(r.outcome));
  }
  result.wall_time = std::chrono::duration<double>(stop - start).count();
  return result;
}

}  // namespace hierhmc
