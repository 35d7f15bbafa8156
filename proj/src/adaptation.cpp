#include "hierhmc/adaptation.hpp"

#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "hierhmc/diagnostics.hpp"
#include "hierhmc/runner.hpp"
#include "hierhmc/samplers.hpp"

namespace hierhmc {

DualAveragingState DualAveragingState::start(double eps0, double delta) {
  if (!(eps0 > 0.0) || !std::isfinite(eps0)) throw std::invalid_argument("dual averaging: eps0 must be positive");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("dual averaging: delta must lie in (0, 1)");
  DualAveragingState s;
  s.delta = delta;
  s.log_eps = std::log(eps0);
  s.mu = std::log(10.0 * eps0);
  return s;
}

double DualAveragingState::step_size() const { return std::exp(log_eps); }

double DualAveragingState::final_step_size() const { return std::exp(t == 0 ? log_eps : log_eps_bar); }

DualAveragingState dual_averaging_update(DualAveragingState s, double observed_accept) {
  if (!(observed_accept >= 0.0 && observed_accept <= 1.0)) {
    throw std::invalid_argument("dual averaging: acceptance statistic outside [0, 1]");
  }
  s.t += 1;
  const double t = static_cast<double>(s.t);
  const double eta = 1.0 / (t + s.t0);
  s.h_bar = (1.0 - eta) * s.h_bar + eta * (s.delta - observed_accept);
  s.log_eps = s.mu - std::sqrt(t) / s.gamma * s.h_bar;
  const double w = std::pow(t, -s.kappa);
  s.log_eps_bar = w * s.log_eps + (1.0 - w) * s.log_eps_bar;
  return s;
}

WarmupSchedule WarmupSchedule::make(int total, int base_window) {
  if (total < 0) throw std::invalid_argument("warmup schedule: negative warmup");
  if (base_window < 1) throw std::invalid_argument("warmup schedule: base window must be positive");
  WarmupSchedule s;
  s.total = total;
  s.init_buffer = static_cast<int>(0.15 * total);
  s.term_buffer = static_cast<int>(0.10 * total);
  int remaining = total - s.init_buffer - s.term_buffer;
  int window = base_window;
  while (remaining > 0) {
    if (remaining < 3 * window) {
      s.slow_windows.push_back(remaining);
      break;
    }
    s.slow_windows.push_back(window);
    remaining -= window;
    window *= 2;
  }
  return s;
}

bool WarmupSchedule::ends_slow_window(int iter) const {
  int end = init_buffer;
  for (int w : slow_windows) {
    end += w;
    if (iter == end - 1) return true;
  }
  return false;
}

bool WarmupSchedule::in_slow_window(int iter) const {
  int slow = 0;
  for (int w : slow_windows) slow += w;
  return iter >= init_buffer && iter < init_buffer + slow;
}

EuclideanMetric estimate_diag_metric(const DrawMatrix& draws, std::ostream* warnings) {
  const auto dim = static_cast<Eigen::Index>(draws.dim());
  const std::size_t n = draws.total_draws();
  if (n < 10) {
    if (warnings) *warnings << "warning: " << n << " draws are too few to estimate a metric; using the unit metric\n";
    return EuclideanMetric::unit(dim);
  }
  Vec mean = Vec::Zero(dim);
  Vec m2 = Vec::Zero(dim);
  std::size_t count = 0;
  for (std::size_t c = 0; c < draws.chains(); ++c) {
    for (std::size_t i = 0; i < draws.chain_length(c); ++i) {
      ++count;
      for (Eigen::Index k = 0; k < dim; ++k) {
        const double x = draws.value(c, i, static_cast<std::size_t>(k));
        const double delta = x - mean(k);
        mean(k) += delta / static_cast<double>(count);
        m2(k) += delta * (x - mean(k));
      }
    }
  }
  const double nd = static_cast<double>(n);
  const Vec variance = m2 / (nd - 1.0);
  const double w = nd / (nd + 5.0);
  return EuclideanMetric::diagonal((w * variance.array() + (1.0 - w)).matrix());
}

double stability_bound(const EuclideanMetric& metric, const SymMatrix& potential_hessian) {
  if (metric.dim() != potential_hessian.dim()) throw std::invalid_argument("stability_bound: dimension mismatch");
  Matrix scaled;
  if (metric.kind() == EuclideanMetric::Kind::dense) {
    const auto chol = cholesky(metric.inverse());
    if (!chol) throw std::invalid_argument("stability_bound: metric is not positive definite");
    scaled = chol->transpose() * potential_hessian.matrix() * *chol;
  } else {
    const Vec root = metric.inverse_diagonal().cwiseSqrt();
    scaled = root.asDiagonal() * potential_hessian.matrix() * root.asDiagonal();
  }
  const EigenPair eig = eigh(SymMatrix(scaled), "stability bound");
  const double lambda_max = eig.values.maxCoeff();
  if (!(lambda_max > 0.0)) return std::numeric_limits<double>::infinity();
  return 2.0 / std::sqrt(lambda_max);
}

double initial_step_size(const ChainState& state, double eps0, const TargetModel& model,
                         const EuclideanMetric& metric, RngStream& rng, long& n_evals) {
  constexpr double kLogTarget = -0.22314355131420976;  // log 0.8
  constexpr int kMaxTries = 60;

  auto energy_change = [&](double eps) {
    PhasePoint z{state.q(), metric.sample_momentum(rng), state.logp(), state.grad()};
    const double h0 = metric.kinetic(z.p) - z.logp;
    const bool ok = leapfrog_step(z, eps, model, metric);
    ++n_evals;
    if (!ok) return -std::numeric_limits<double>::infinity();
    const double delta = h0 - (metric.kinetic(z.p) - z.logp);
    return std::isfinite(delta) ? delta : -std::numeric_limits<double>::infinity();
  };

  double eps = eps0;
  const int direction = energy_change(eps) > kLogTarget ? 1 : -1;
  for (int i = 0; i < kMaxTries; ++i) {
    const double next = direction == 1 ? 2.0 * eps : 0.5 * eps;
    const double delta = energy_change(next);
    if (direction == 1 && !(delta > kLogTarget)) break;
    eps = next;
    if (direction == -1 && delta > kLogTarget) break;
  }
  return eps;
}

std::vector<ScanRow> relaxation_scan(const TargetModel& model, const std::vector<double>& deltas,
                                     const ScanSettings& settings) {
  for (std::size_t i = 1; i < deltas.size(); ++i) {
    if (!(deltas[i] > deltas[i - 1])) throw std::invalid_argument("relaxation_scan: deltas must be ascending");
  }
  const std::string monitored = model.slowest_parameter();
  std::vector<ScanRow> rows;
  for (double delta : deltas) {
    ScanRow row;
    row.delta = delta;
    try {
      SamplerSettings sampler;
      sampler.kind = SamplerKind::nuts;
      sampler.adapt_delta = delta;
      sampler.max_depth = settings.max_depth;
      sampler.metric = settings.metric;
      RunSettings run;
      run.chains = settings.chains;
      run.warmup = settings.warmup;
      run.samples = settings.samples;
      run.seed = settings.seed;
      const RunResult result = run_chains(model, sampler, run);
      const SummaryRow v = summarize_parameter(monitored, result.draws.parameter(monitored));
      row.achieved_accept = result.draws.mean_accept_stat();
      row.n_divergent = result.draws.divergent_count();
      row.rhat_v = v.rhat;
      row.mean_v = v.mean;
      row.sd_v = v.sd;
      double eps = 0.0;
      for (const auto& c : result.chains) eps += c.step_size;
      row.stepsize = eps / static_cast<double>(result.chains.size());
    } catch (const std::exception& e) {
      const double nan = std::numeric_limits<double>::quiet_NaN();
      row.achieved_accept = row.rhat_v = row.mean_v = row.sd_v = row.stepsize = nan;
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_scan_csv(std::ostream& out, const std::vector<ScanRow>& rows) {
  out << "delta,achieved_accept,n_divergent,rhat_v,mean_v,sd_v,stepsize\n";
  out << std::setprecision(17);
  auto field = [&](double v) {
    out << ',';
    if (!std::isnan(v)) out << v;
  };
  for (const auto& r : rows) {
    out << r.delta;
    field(r.achieved_accept);
    out << ',' << r.n_divergent;
    field(r.rhat_v);
    field(r.mean_v);
    field(r.sd_v);
    field(r.stepsize);
    out << '\n';
  }
}

}  // namespace hierhmc
