#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>

#include "hierhmc/experiments.hpp"

namespace hierhmc {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double pooled_sd(const ChainSamples& chains) {
  double sum = 0.0;
  double sq = 0.0;
  std::size_t n = 0;
  for (const auto& c : chains) {
    for (double x : c) {
      sum += x;
      sq += x * x;
      ++n;
    }
  }
  if (n < 2) return kNaN;
  const double mean = sum / static_cast<double>(n);
  return std::sqrt(std::max(0.0, (sq - static_cast<double>(n) * mean * mean) / static_cast<double>(n - 1)));
}

CompareRow row_for(const RunResult& result, const TargetModel& model, SamplerKind kind, double step) {
  RunRecord record;
  record.config.sampler.kind = kind;
  record.model_name = model.name();
  record.slowest_parameter = model.slowest_parameter();
  record.result = result;
  record.summary = summarize(result.draws, result.wall_time, result.total_evals);
  CompareRow row = compare_row(record);
  if (!is_hamiltonian(kind)) row.step_size = step;
  return row;
}

std::string describe(const Moments& m) {
  std::ostringstream out;
  out << std::setprecision(4) << "mean " << m.mean << " (se " << m.se_mean << "), sd " << m.sd << " (se " << m.se_sd
      << ")";
  return out.str();
}

}  // namespace

BenchmarkSettings BenchmarkSettings::desk() { return {}; }

BenchmarkSettings BenchmarkSettings::full() {
  BenchmarkSettings s;
  s.groups = 800;
  s.warmup = 5000;
  s.samples = 25000;
  s.rwm_iterations = 500000;
  s.max_depth = 20;
  return s;
}

Moments moments_of(const ChainSamples& chains) {
  const SummaryRow row = summarize_parameter("x", chains);
  Moments m;
  m.mean = row.mean;
  m.sd = row.sd;
  const double ess = std::isfinite(row.ess) && row.ess > 0.0 ? row.ess : 1.0;
  m.se_mean = row.sd / std::sqrt(ess);
  m.se_sd = row.sd / std::sqrt(2.0 * ess);
  return m;
}

bool consistent(const Moments& row, const Moments& baseline, double tolerance) {
  const double mean_limit = tolerance * std::hypot(row.se_mean, baseline.se_mean);
  const double sd_limit = tolerance * std::hypot(row.se_sd, baseline.se_sd);
  return std::abs(row.mean - baseline.mean) <= mean_limit && std::abs(row.sd - baseline.sd) <= sd_limit;
}

BenchmarkResult run_benchmark(const BenchmarkSettings& settings, std::ostream* log) {
  const auto start = std::chrono::steady_clock::now();
  RngStream data_rng(settings.data_seed, 0);
  const OneWayNormalData data = generate_pseudodata(settings.mu, settings.tau, settings.sigma, settings.groups, data_rng);
  const OneWayNormalCP cp(data);
  const OneWayNormalNCP ncp(data);
  const int groups = data.groups();

  RunSettings run;
  run.chains = settings.chains;
  run.warmup = settings.warmup;
  run.samples = settings.samples;
  run.seed = settings.seed;

  SamplerSettings base_sampler;
  base_sampler.kind = SamplerKind::nuts;
  base_sampler.metric = MetricKind::diag;
  base_sampler.adapt_delta = settings.baseline_delta;
  base_sampler.max_depth = settings.max_depth;
  const RunResult baseline = run_chains(ncp, base_sampler, run);

  BenchmarkResult result;
  result.baseline = row_for(baseline, ncp, SamplerKind::nuts, 0.0);
  result.baseline.algorithm = "baseline";
  result.baseline_tau = moments_of(baseline.draws.parameter("tau"));
  if (log) *log << "baseline NCP nuts delta " << settings.baseline_delta << ": tau " << describe(result.baseline_tau) << '\n';

  // Marginal sds of both parameterizations from the baseline draws.
  Vec ncp_sd(groups + 2);
  Vec cp_sd(groups + 2);
  for (Eigen::Index k = 0; k < groups + 2; ++k) ncp_sd(k) = pooled_sd(baseline.unconstrained.parameter(static_cast<std::size_t>(k)));
  cp_sd(0) = ncp_sd(0);
  cp_sd(1) = ncp_sd(1);
  for (int j = 0; j < groups; ++j) cp_sd(j + 2) = pooled_sd(baseline.draws.parameter("theta." + std::to_string(j + 1)));

  // Chains of the random-walk samplers start at baseline draws.
  auto starts = [&](bool centered) {
    std::vector<Vec> inits;
    const std::size_t last = baseline.draws.draws() - 1;
    for (std::size_t c = 0; c < baseline.draws.chains(); ++c) {
      Vec q(groups + 2);
      q(0) = baseline.unconstrained.value(c, last, 0);
      q(1) = baseline.unconstrained.value(c, last, 1);
      for (int j = 0; j < groups; ++j) {
        q(j + 2) = centered ? baseline.draws.value(c, last, static_cast<std::size_t>(2 + groups + j))
                            : baseline.unconstrained.value(c, last, static_cast<std::size_t>(j + 2));
      }
      inits.push_back(q);
    }
    return inits;
  };

  for (const bool centered : {true, false}) {
    const TargetModel& model = centered ? static_cast<const TargetModel&>(cp) : static_cast<const TargetModel&>(ncp);
    const Vec& sds = centered ? cp_sd : ncp_sd;
    const std::string param = centered ? "CP" : "NCP";

    for (const SamplerKind kind : {SamplerKind::rwm, SamplerKind::mwg, SamplerKind::nuts}) {
      std::vector<double> grid;
      if (kind == SamplerKind::rwm) grid = settings.rwm_multipliers;
      if (kind == SamplerKind::mwg) grid = settings.mwg_multipliers;
      if (kind == SamplerKind::nuts) grid = settings.nuts_deltas;

      std::optional<BenchmarkCandidate> best;
      for (double setting : grid) {
        SamplerSettings sampler;
        sampler.kind = kind;
        sampler.metric = MetricKind::diag;
        RunSettings cell = run;
        if (kind == SamplerKind::nuts) {
          sampler.adapt_delta = setting;
          sampler.max_depth = settings.max_depth;
        } else {
          sampler.scales = sds;
          sampler.scale = kind == SamplerKind::rwm ? setting * 2.38 / std::sqrt(static_cast<double>(model.dim())) : setting;
          cell.inits = starts(centered);
          if (kind == SamplerKind::rwm) {
            cell.thin = std::max(1, settings.rwm_iterations / std::max(1, settings.samples));
            cell.samples = cell.thin * settings.samples;
            cell.warmup = settings.rwm_iterations / 5;
          }
        }
        const RunResult r = run_chains(model, sampler, cell);
        BenchmarkCandidate candidate;
        candidate.setting = setting;
        candidate.row = row_for(r, model, kind, setting);
        candidate.tau = moments_of(r.draws.parameter("tau"));
        candidate.consistent = consistent(candidate.tau, result.baseline_tau);
        if (log) {
          *log << param << ' ' << to_string(kind) << (kind == SamplerKind::nuts ? " delta " : " scale ") << setting
               << ": ESS/eval " << format_diagnostic(candidate.row.ess_per_eval) << ", tau " << describe(candidate.tau)
               << (candidate.consistent ? "" : " [inconsistent]") << '\n';
        }
        if (!candidate.consistent) {
          std::ostringstream why;
          why << "excluded " << param << ' ' << to_string(kind) << (kind == SamplerKind::nuts ? " delta=" : " scale=")
              << setting << ": tau " << describe(candidate.tau) << " vs baseline " << describe(result.baseline_tau);
          result.exclusions.push_back(why.str());
        } else if (!best || candidate.row.ess_per_eval > best->row.ess_per_eval) {
          best = candidate;
        }
        result.candidates.push_back(candidate);
      }
      if (best) {
        result.rows.push_back(best->row);
      } else {
        result.missing.push_back(param + ' ' + to_string(kind));
      }
    }
  }
  result.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

std::vector<CrossoverCell> crossover_sweep(const CrossoverSettings& settings) {
  std::vector<CrossoverCell> cells;
  for (std::size_t s = 0; s < settings.sigmas.size(); ++s) {
    const double sigma = settings.sigmas[s];
    for (int k = 0; k < settings.seeds; ++k) {
      const std::uint64_t seed = settings.seed + static_cast<std::uint64_t>(k);
      RngStream data_rng(seed, 1000 + s);
      const OneWayNormalData data = generate_pseudodata(settings.mu, settings.tau, sigma, settings.groups, data_rng);
      SamplerSettings sampler;
      sampler.kind = SamplerKind::nuts;
      sampler.metric = MetricKind::diag;
      sampler.adapt_delta = settings.adapt_delta;
      RunSettings run;
      run.chains = settings.chains;
      run.warmup = settings.warmup;
      run.samples = settings.samples;
      run.seed = seed;

      auto efficiency = [&](const TargetModel& model) {
        const RunResult r = run_chains(model, sampler, run);
        const SummaryRow tau = summarize_parameter("tau", r.draws.parameter("tau"));
        return tau.ess / static_cast<double>(r.total_evals);
      };
      CrossoverCell cell;
      cell.sigma = sigma;
      cell.seed = seed;
      cell.cp_ess_per_eval = efficiency(OneWayNormalCP(data));
      cell.ncp_ess_per_eval = efficiency(OneWayNormalNCP(data));
      cells.push_back(cell);
    }
  }
  return cells;
}

std::vector<double> crossover_medians(const std::vector<CrossoverCell>& cells, const std::vector<double>& sigmas) {
  std::vector<double> medians;
  for (double sigma : sigmas) {
    std::vector<double> ratios;
    for (const auto& c : cells) {
      if (c.sigma == sigma) ratios.push_back(c.ratio());
    }
    if (ratios.empty()) {
      medians.push_back(kNaN);
      continue;
    }
    std::sort(ratios.begin(), ratios.end());
    const std::size_t n = ratios.size();
    medians.push_back(n % 2 == 1 ? ratios[n / 2] : 0.5 * (ratios[n / 2 - 1] + ratios[n / 2]));
  }
  return medians;
}

void write_crossover_csv(std::ostream& out, const std::vector<CrossoverCell>& cells) {
  out << "sigma,seed,cp_ess_per_eval,ncp_ess_per_eval,ratio\n";
  out << std::setprecision(17);
  for (const auto& c : cells) {
    out << c.sigma << ',' << c.seed << ',' << c.cp_ess_per_eval << ',' << c.ncp_ess_per_eval << ',' << c.ratio()
        << '\n';
  }
}

namespace {

std::vector<double> ranks(const std::vector<double>& x) {
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> r(x.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && x[order[j + 1]] == x[order[i]]) ++j;
    const double average = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) r[order[k]] = average;
    i = j + 1;
  }
  return r;
}

}  // namespace

double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("spearman: need two equal-length samples");
  const std::vector<double> rx = ranks(x);
  const std::vector<double> ry = ranks(y);
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return kNaN;
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace hierhmc
