#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>

#include "hierhmc/experiments.hpp"

namespace hierhmc {

namespace {

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  return out;
}

// Analytic marginal sds of the funnel: v ~ N(0, 3^2), Var(theta) = E[exp(v)].
Vec funnel_marginal_sds(int n) {
  Vec sds = Vec::Constant(n + 1, std::exp(9.0 / 4.0));
  sds(n) = 3.0;
  return sds;
}

void funnel_explore(const PresetOptions& options, std::ostream& report) {
  const int n = FunnelModel::kRandomWalkSize;
  const int samples = options.full ? 25000 : 2500;
  for (const SamplerKind kind : {SamplerKind::rwm, SamplerKind::mwg, SamplerKind::nuts}) {
    ExperimentConfig config;
    config.model.id = "funnel";
    config.model.n = n;
    config.sampler.kind = kind;
    config.sampler.metric = MetricKind::unit;
    config.run.samples = samples;
    config.run.seed = options.seed;
    if (kind == SamplerKind::nuts) {
      config.run.warmup = 1000;
    } else {
      config.run.warmup = 0;
      config.sampler.scales = funnel_marginal_sds(n);
      config.sampler.scale = kind == SamplerKind::rwm ? 2.38 / std::sqrt(n + 1.0) : 2.4;
    }
    config.output = (options.output_dir / ("funnel_" + to_string(kind))).string();
    const RunRecord record = run_experiment(config);
    write_run_outputs(record, config.output);
    const SummaryRow& v = record.summary.row("v");
    double min_v = v.q05;
    for (const auto& chain : record.result.draws.parameter("v")) {
      min_v = std::min(min_v, *std::min_element(chain.begin(), chain.end()));
    }
    report << to_string(kind) << ": mean(v) " << format_diagnostic(v.mean) << ", sd(v) " << format_diagnostic(v.sd)
           << ", min(v) " << format_diagnostic(min_v) << ", R-hat(v) " << format_diagnostic(v.rhat) << ", ESS(v) "
           << format_diagnostic(v.ess) << ", divergent " << record.summary.divergent << '\n';
  }
  report << "Draws written to " << options.output_dir.string() << "/funnel_*_chain*.csv\n";
}

void stepsize_scan(const PresetOptions& options, std::ostream& report) {
  const FunnelModel model(FunnelModel::kScanSize);
  ScanSettings settings;
  settings.seed = options.seed;
  settings.warmup = options.full ? 10000 : 2000;
  settings.samples = options.full ? 100000 : 10000;
  const std::vector<double> deltas{0.651, 0.8, 0.9, 0.95, 0.99, 0.999};
  const auto rows = relaxation_scan(model, deltas, settings);
  auto out = open_output(options.output_dir / "stepsize_scan.csv");
  write_scan_csv(out, rows);
  report << std::setw(8) << "delta" << std::setw(10) << "accept" << std::setw(10) << "diverg" << std::setw(10)
         << "rhat(v)" << std::setw(10) << "mean(v)" << std::setw(10) << "sd(v)" << std::setw(12) << "stepsize\n";
  for (const auto& r : rows) {
    report << std::setw(8) << r.delta << std::setw(10) << format_diagnostic(r.achieved_accept, 3) << std::setw(10)
           << r.n_divergent << std::setw(10) << format_diagnostic(r.rhat_v, 4) << std::setw(10)
           << format_diagnostic(r.mean_v, 3) << std::setw(10) << format_diagnostic(r.sd_v, 3) << std::setw(11)
           << format_diagnostic(r.stepsize, 3);
    if (!r.error.empty()) report << "  error: " << r.error;
    report << '\n';
  }
}

void energy_trace(const PresetOptions& options, std::ostream& report) {
  auto out = open_output(options.output_dir / "energy_trace.csv");
  out << "sampler,n,chain,iter,max_delta_v,max_delta_t,max_abs_delta_h,accepted,divergent,v\n";
  out << std::setprecision(17);

  struct Case {
    SamplerKind kind;
    int n;
  };
  for (const Case c : {Case{SamplerKind::nuts, FunnelModel::kRandomWalkSize}, Case{SamplerKind::rmhmc, 10}}) {
    const FunnelModel model(c.n);
    SamplerSettings sampler;
    sampler.kind = c.kind;
    sampler.metric = MetricKind::unit;
    RunSettings run;
    run.seed = options.seed;
    run.warmup = 500;
    run.samples = options.full ? 10000 : 1000;
    const RunResult result = run_chains(model, sampler, run);
    const auto v = result.draws.parameter("v");
    std::vector<double> dv;
    for (std::size_t ch = 0; ch < result.draws.chains(); ++ch) {
      for (std::size_t i = 0; i < result.draws.chain_length(ch); ++i) {
        const TransitionStats& t = result.draws.stats(ch, i).transition;
        dv.push_back(t.max_delta_v);
        out << to_string(c.kind) << ',' << c.n << ',' << ch + 1 << ',' << i + 1 << ',' << t.max_delta_v << ','
            << t.max_delta_t << ',' << t.max_abs_delta_h << ',' << (t.accepted ? 1 : 0) << ','
            << (t.divergent ? 1 : 0) << ',' << v[ch][i] << '\n';
      }
    }
    std::sort(dv.begin(), dv.end());
    const double d = static_cast<double>(model.dim());
    const double p90 = dv[static_cast<std::size_t>(0.9 * static_cast<double>(dv.size() - 1))];
    const auto big = std::count_if(dv.begin(), dv.end(), [&](double x) { return x > 2.5 * d; });
    report << to_string(c.kind) << " on funnel d=" << model.dim() << ": median max dV "
           << format_diagnostic(dv[dv.size() / 2]) << ", 90th percentile " << format_diagnostic(p90) << " (d/2 = "
           << d / 2.0 << "), share above 5 d/2: " << format_diagnostic(static_cast<double>(big) / dv.size(), 3)
           << '\n';
  }
}

void param_crossover(const PresetOptions& options, std::ostream& report) {
  CrossoverSettings settings;
  settings.seed = options.seed;
  settings.seeds = options.seeds.value_or(options.full ? 50 : 8);
  if (options.full) settings.samples = 10000;
  const auto cells = crossover_sweep(settings);
  auto out = open_output(options.output_dir / "param_crossover.csv");
  write_crossover_csv(out, cells);
  const auto medians = crossover_medians(cells, settings.sigmas);
  report << "sigma  median NCP/CP ESS(tau)/eval\n";
  for (std::size_t i = 0; i < medians.size(); ++i) {
    report << std::setw(5) << settings.sigmas[i] << "  " << format_diagnostic(medians[i]) << '\n';
  }
  report << "Spearman(sigma, ratio) = " << format_diagnostic(spearman(settings.sigmas, medians), 3) << '\n';
}

void oneway_benchmark(const PresetOptions& options, std::ostream& report) {
  BenchmarkSettings settings = options.full ? BenchmarkSettings::full() : BenchmarkSettings::desk();
  settings.seed = options.seed;
  const BenchmarkResult result = run_benchmark(settings, &report);
  for (const auto& e : result.exclusions) report << e << '\n';
  for (const auto& m : result.missing) report << "no consistent setting for " << m << '\n';
  std::vector<CompareRow> rows{result.baseline};
  rows.insert(rows.end(), result.rows.begin(), result.rows.end());
  print_compare_table(report, rows);
  auto out = open_output(options.output_dir / "oneway_benchmark.csv");
  write_compare_csv(out, rows);
}

void curvature(const PresetOptions& options, std::ostream& report) {
  const FunnelModel model(FunnelModel::kDefaultSize);
  CurvatureSlice slice;
  slice.base = Vec::Zero(model.dim());
  slice.x_index = 0;
  slice.y_index = model.dim() - 1;
  const int points = options.full ? 81 : 21;
  for (int i = 0; i < points; ++i) {
    slice.xs.push_back(-10.0 + 20.0 * i / (points - 1));
    slice.ys.push_back(-8.0 + 16.0 * i / (points - 1));
  }
  const auto field = curvature_field(model, slice);
  auto out = open_output(options.output_dir / "curvature_field.csv");
  write_curvature_csv(out, field);
  report << "curvature field over (theta.1, v): " << field.size() << " points written\n";
}

}  // namespace

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names{"funnel-explore", "stepsize-scan",    "energy-trace",
                                              "param-crossover", "oneway-benchmark", "curvature-field"};
  return names;
}

void run_preset(const std::string& name, const PresetOptions& options, std::ostream& report) {
  if (std::find(preset_names().begin(), preset_names().end(), name) == preset_names().end()) {
    throw ConfigError("preset", "unknown preset '" + name + "'");
  }
  std::filesystem::create_directories(options.output_dir);
  if (name == "funnel-explore") funnel_explore(options, report);
  if (name == "stepsize-scan") stepsize_scan(options, report);
  if (name == "energy-trace") energy_trace(options, report);
  if (name == "param-crossover") param_crossover(options, report);
  if (name == "oneway-benchmark") oneway_benchmark(options, report);
  if (name == "curvature-field") curvature(options, report);
}

}  // namespace hierhmc
