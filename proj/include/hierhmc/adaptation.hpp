#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "hierhmc/chain.hpp"
#include "hierhmc/draws.hpp"
#include "hierhmc/metric.hpp"
#include "hierhmc/model.hpp"
#include "hierhmc/random.hpp"
#include "hierhmc/runner.hpp"

namespace hierhmc {

/// Primal-dual averaging of log step size toward a target acceptance.
struct DualAveragingState {
  double delta = 0.8;
  long t = 0;
  double h_bar = 0.0;
  double log_eps = 0.0;
  double log_eps_bar = 0.0;
  double gamma = 0.05;
  double t0 = 10.0;
  double kappa = 0.75;
  double mu = 0.0;

  /// Fresh state around `eps0`, with mu = log(10 eps0).
  static DualAveragingState start(double eps0, double delta);

  double step_size() const;
  /// The averaged step size used once adaptation stops.
  double final_step_size() const;
};

/// One update with an observed acceptance statistic in [0, 1].
DualAveragingState dual_averaging_update(DualAveragingState s, double observed_accept);

/// Warmup split into an initial fast buffer, doubling slow windows for
/// metric estimation and a terminal fast buffer.
struct WarmupSchedule {
  int total = 0;
  int init_buffer = 0;
  int term_buffer = 0;
  std::vector<int> slow_windows;

  /// 15% / 75% / 10% split with slow windows starting at `base_window`
  /// iterations and doubling; the last window absorbs the remainder.
  static WarmupSchedule make(int total, int base_window = 25);

  /// True when warmup iteration `iter` (0-based) ends a slow window.
  bool ends_slow_window(int iter) const;
  /// True when iteration `iter` lies inside a slow window.
  bool in_slow_window(int iter) const;
};

/// Diagonal metric from unconstrained warmup draws: sample variances shrunk
/// toward one with weight n / (n + 5). Fewer than 10 draws gives the unit
/// metric and a warning on `warnings` (if non-null).
EuclideanMetric estimate_diag_metric(const DrawMatrix& draws, std::ostream* warnings = nullptr);

/// Largest stable leapfrog step size for the local quadratic approximation:
/// 2 / sqrt(lambda_max) of the metric-scaled potential Hessian. Infinite
/// when no direction has positive curvature.
double stability_bound(const EuclideanMetric& metric, const SymMatrix& potential_hessian);

/// Doubles or halves `eps0` until the one-step acceptance crosses 0.8.
/// Adds the evaluations spent to `n_evals`.
double initial_step_size(const ChainState& state, double eps0, const TargetModel& model,
                         const EuclideanMetric& metric, RngStream& rng, long& n_evals);

struct ScanRow {
  double delta = 0.0;
  double achieved_accept = 0.0;
  long n_divergent = 0;
  double rhat_v = 0.0;
  double mean_v = 0.0;
  double sd_v = 0.0;
  double stepsize = 0.0;
  std::string error;
};

struct ScanSettings {
  int chains = 4;
  int warmup = 1000;
  int samples = 1000;
  int max_depth = 10;
  MetricKind metric = MetricKind::unit;
  std::uint64_t seed = 1;
};

/// One NUTS run with adapted step size per target acceptance.
/// The monitored parameter is the model's slowest one. A failing cell is
/// recorded with its error and the scan continues.
std::vector<ScanRow> relaxation_scan(const TargetModel& model, const std::vector<double>& deltas,
                                     const ScanSettings& settings);

void write_scan_csv(std::ostream& out, const std::vector<ScanRow>& rows);

}  // namespace hierhmc
