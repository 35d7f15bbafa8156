#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "hierhmc/draws.hpp"
#include "hierhmc/model.hpp"

namespace hierhmc {

/// Split potential scale reduction. Every chain is cut in half (the middle
/// draw of an odd-length chain is dropped) and the 2C halves are compared
/// through R = sqrt((N' - 1) / N' + B / (N' W)). Returns NaN when the
/// within-sequence variance is zero. Requires at least 4 draws per chain.
double split_rhat(const ChainSamples& chains);

/// Multi-chain effective sample size from autocorrelations truncated with
/// Geyer's initial positive and initial monotone sequence rules. Capped at
/// the total draw count; NaN when the draws have zero variance. Requires at
/// least 4 draws per chain.
double ess(const ChainSamples& chains);

/// Sample autocovariance of one chain at lags 0..N-1 (biased, divisor N).
std::vector<double> autocovariance(const std::vector<double>& x);

struct SummaryRow {
  std::string name;
  double mean = 0.0;
  double sd = 0.0;
  double q05 = 0.0;
  double q50 = 0.0;
  double q95 = 0.0;
  double ess = 0.0;
  double rhat = 0.0;
  /// Monte Carlo standard error of the mean, sd / sqrt(ESS).
  double mcse = 0.0;
  double time_per_ess = 0.0;
  double ess_per_eval = 0.0;
};

struct Summary {
  std::vector<SummaryRow> rows;
  long divergent = 0;
  long total_evals = 0;
  double wall_time = 0.0;
  double mean_accept_stat = 0.0;
  std::size_t chains = 0;
  std::size_t draws_per_chain = 0;

  /// Throws std::out_of_range for unknown names.
  const SummaryRow& row(std::string_view name) const;
};

/// Per-parameter summary. `total_evals` of zero means "count the evaluations
/// recorded in the draws".
Summary summarize(const DrawMatrix& draws, double wall_time, long total_evals = 0);

SummaryRow summarize_parameter(const std::string& name, const ChainSamples& chains);

void print_summary(std::ostream& out, const Summary& summary);
void write_summary_csv(std::ostream& out, const Summary& summary);

/// Formats a diagnostic, printing "n/a" for the NaN sentinel.
std::string format_diagnostic(double value, int precision = 4);

/// One point of a curvature field: eigenpairs of sqrt|H| restricted to a
/// two-coordinate slice, larger magnitude first.
struct CurvaturePoint {
  double x = 0.0;
  double y = 0.0;
  double magnitude1 = 0.0;
  double vec1x = 0.0;
  double vec1y = 0.0;
  double magnitude2 = 0.0;
  double vec2x = 0.0;
  double vec2y = 0.0;
};

struct CurvatureSlice {
  Vec base;
  Eigen::Index x_index = 0;
  Eigen::Index y_index = 1;
  std::vector<double> xs;
  std::vector<double> ys;
};

/// Eigendecomposition of the log-density Hessian's 2 x 2 block over the
/// slice coordinates at every grid point, magnitudes sqrt(|lambda|).
std::vector<CurvaturePoint> curvature_field(const TargetModel& model, const CurvatureSlice& slice);

void write_curvature_csv(std::ostream& out, const std::vector<CurvaturePoint>& points);

}  // namespace hierhmc
