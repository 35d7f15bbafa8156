#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hierhmc/draws.hpp"
#include "hierhmc/metric.hpp"
#include "hierhmc/model.hpp"
#include "hierhmc/riemannian.hpp"

namespace hierhmc {

enum class SamplerKind { rwm, mwg, ehmc, nuts, rmhmc };
enum class MetricKind { unit, diag };

std::optional<SamplerKind> parse_sampler_kind(std::string_view name);
std::string to_string(SamplerKind kind);
std::optional<MetricKind> parse_metric_kind(std::string_view name);
std::string to_string(MetricKind kind);

bool is_hamiltonian(SamplerKind kind);

struct SamplerSettings {
  SamplerKind kind = SamplerKind::nuts;
  /// Initial (or, without adaptation, fixed) step size. Zero selects the
  /// doubling heuristic for Euclidean samplers and 0.1 for rmhmc.
  double step_size = 0.0;
  bool adapt = true;
  double adapt_delta = 0.8;
  /// Leapfrog steps for ehmc and rmhmc; zero picks 10 for ehmc and, for
  /// rmhmc, round(2 pi / eps) at the current step size.
  int steps = 0;
  int max_depth = 10;
  MetricKind metric = MetricKind::unit;
  /// Per-coordinate proposal scales for rwm / mwg; empty means all ones.
  Vec scales;
  /// Multiplier applied to the proposal scales.
  double scale = 1.0;
  RiemannianSettings riemannian;
};

/// The step count a sampler uses at step size `eps`.
int effective_steps(const SamplerSettings& sampler, double eps);

struct RunSettings {
  int chains = 4;
  int warmup = 1000;
  int samples = 1000;
  int thin = 1;
  std::uint64_t seed = 1;
  bool save_warmup = false;
  /// Chains start at uniform(-init_radius, init_radius) per coordinate
  /// unless `inits` is non-empty, in which case chain c starts at
  /// inits[c % inits.size()].
  double init_radius = 2.0;
  std::vector<Vec> inits;
  bool parallel = true;
};

struct ChainOutcome {
  double step_size = 0.0;
  /// Diagonal of Sigma^{-1} after warmup (ones for the unit metric).
  Vec inverse_metric;
  long n_evals = 0;
  long warmup_evals = 0;
  /// stability_bound at the final state, NaN when not applicable.
  double stability_bound = 0.0;
};

struct RunResult {
  /// Post-warmup constrained draws.
  DrawMatrix draws;
  /// Post-warmup unconstrained draws.
  DrawMatrix unconstrained;
  /// Constrained warmup draws when requested.
  DrawMatrix warmup;
  std::vector<ChainOutcome> chains;
  long total_evals = 0;
  /// Seconds, warmup included, output excluded.
  double wall_time = 0.0;
};

/// Runs every chain with its own stream RngStream(seed, chain). HMC
/// samplers adapt the step size by dual averaging during warmup; nuts and
/// ehmc with the diagonal metric also re-estimate the metric at the end of
/// each slow window.
RunResult run_chains(const TargetModel& model, const SamplerSettings& sampler, const RunSettings& run);

/// Throws ModelError when `sampler` cannot run on `model`.
void check_compatible(const TargetModel& model, const SamplerSettings& sampler);

}  // namespace hierhmc
