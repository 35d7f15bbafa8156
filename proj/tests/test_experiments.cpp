#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "hierhmc/experiments.hpp"

using namespace hierhmc;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("hierhmc_exp_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string config_error_key(const std::vector<std::string>& args) {
  try {
    parse_config(args);
  } catch (const ConfigError& e) {
    return e.key();
  }
  return "<none>";
}

int cli(const std::string& args) {
  const std::string cmd = std::string("\"") + HIERHMC_CLI + "\" " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

ExperimentConfig small_funnel() {
  ExperimentConfig c;
  c.model.id = "funnel";
  c.model.n = 3;
  c.run.chains = 2;
  c.run.warmup = 150;
  c.run.samples = 100;
  c.run.seed = 11;
  return c;
}

class NoThirdDerivatives final : public TargetModel {
 public:
  std::string name() const override { return "plain"; }
  Eigen::Index dim() const override { return 1; }
  std::vector<std::string> parameter_names() const override { return {"x"}; }
  double log_density(const Vec& q) const override { return -0.5 * q.squaredNorm(); }
  double log_density_gradient(const Vec& q, Vec& g) const override {
    g = -q;
    return log_density(q);
  }
  SymMatrix hessian(const Vec&) const override { return SymMatrix::diagonal(-Vec::Ones(1)); }
};

}  // namespace

TEST(ParseConfig, HappyPath) {
  const ExperimentConfig c = parse_config({"--model", "funnel", "--n", "10", "--sampler", "rmhmc", "--steps", "5",
                                           "--seed", "3", "--adapt_delta", "0.9", "--metric", "diag", "--output",
                                           "x/y"});
  EXPECT_EQ(c.model.id, "funnel");
  EXPECT_EQ(c.model.n, 10);
  EXPECT_EQ(c.sampler.kind, SamplerKind::rmhmc);
  EXPECT_EQ(c.sampler.steps, 5);
  EXPECT_EQ(c.run.seed, 3u);
  EXPECT_DOUBLE_EQ(c.sampler.adapt_delta, 0.9);
  EXPECT_EQ(c.sampler.metric, MetricKind::diag);
  EXPECT_EQ(c.output, "x/y");
  EXPECT_TRUE(c.sampler.adapt);
  EXPECT_FALSE(parse_config({"--no-adapt"}).sampler.adapt);
}

TEST(ParseConfig, DefaultsAreValid) {
  const ExperimentConfig c = parse_config({});
  EXPECT_EQ(c.model.id, "funnel");
  EXPECT_EQ(c.sampler.metric, MetricKind::unit);
  EXPECT_NO_THROW(validate(c));
  EXPECT_EQ(effective_steps(c.sampler, 0.1), 10);
}

TEST(EffectiveSteps, RiemannianDefaultSpansTwoPi) {
  SamplerSettings s;
  s.kind = SamplerKind::rmhmc;
  EXPECT_EQ(effective_steps(s, 0.28), 22);
  EXPECT_EQ(effective_steps(s, 10.0), 1);
  EXPECT_EQ(effective_steps(s, 1e-9), 1000);
  s.steps = 7;
  EXPECT_EQ(effective_steps(s, 0.28), 7);
}

TEST(ParseConfig, ErrorsNameTheKey) {
  EXPECT_EQ(config_error_key({"--thin", "0"}), "thin");
  EXPECT_EQ(config_error_key({"--seed", "abc"}), "seed");
  EXPECT_EQ(config_error_key({"--adapt-delta", "1.5"}), "adapt-delta");
  EXPECT_EQ(config_error_key({"--sampler", "gibbs2"}), "sampler");
  EXPECT_EQ(config_error_key({"--chains", "2x"}), "chains");
  EXPECT_EQ(config_error_key({"--model", "oneway-cp", "--data", "/nonexistent/file.txt"}), "data");
  EXPECT_EQ(config_error_key({"--model", "nope"}), "model");
  EXPECT_NE(config_error_key({"--bogus", "1"}), "<none>");
}

TEST(ParseConfig, FlagsOverrideConfigFile) {
  const fs::path dir = scratch("config");
  std::ofstream(dir / "run.cfg") << "seed=7\nsamples=123\nsampler=ehmc\n";
  const ExperimentConfig c = parse_config({"--config", (dir / "run.cfg").string(), "--seed", "9"});
  EXPECT_EQ(c.run.seed, 9u);
  EXPECT_EQ(c.run.samples, 123);
  EXPECT_EQ(c.sampler.kind, SamplerKind::ehmc);
  std::ofstream(dir / "bad.cfg") << "sede=7\n";
  EXPECT_THROW(parse_config({"--config", (dir / "bad.cfg").string()}), ConfigError);
  fs::remove_all(dir);
}

TEST(ParseConfig, ConfigJsonRecordsSettings) {
  const nlohmann::json j = config_to_json(parse_config({"--sampler", "rwm", "--scale", "0.3"}));
  EXPECT_EQ(j.at("sampler"), "rwm");
  EXPECT_DOUBLE_EQ(j.at("scale").get<double>(), 0.3);
}

TEST(Preflight, RiemannianNeedsThirdDerivatives) {
  SamplerSettings s;
  s.kind = SamplerKind::rmhmc;
  EXPECT_THROW(check_compatible(NoThirdDerivatives(), s), ModelError);
  s.kind = SamplerKind::nuts;
  EXPECT_NO_THROW(check_compatible(NoThirdDerivatives(), s));
  s.kind = SamplerKind::rwm;
  s.scales = Vec::Ones(3);
  EXPECT_THROW(check_compatible(NoThirdDerivatives(), s), std::invalid_argument);
}

TEST(DrawsCsv, HeaderAndRoundTrip) {
  const RunRecord record = run_experiment(small_funnel());
  const DrawMatrix& draws = record.result.draws;
  std::stringstream csv;
  write_draws_csv(csv, draws, 1, 2, CsvLayout{SamplerKind::nuts, 150, 1});
  std::string header;
  std::getline(std::stringstream(csv.str()), header);
  EXPECT_EQ(header, std::string(kCsvStatColumns) + ",theta.1,theta.2,theta.3,v");
  const DrawMatrix back = read_draws_csv(csv);
  ASSERT_EQ(back.chains(), 1u);
  ASSERT_EQ(back.draws(), draws.chain_length(1));
  for (std::size_t i = 0; i < back.draws(); ++i) {
    for (std::size_t k = 0; k < draws.dim(); ++k) ASSERT_EQ(back.value(0, i, k), draws.value(1, i, k));
    ASSERT_EQ(back.stats(0, i).lp, draws.stats(1, i).lp);
    ASSERT_EQ(back.stats(0, i).transition.accept_stat, draws.stats(1, i).transition.accept_stat);
    ASSERT_EQ(back.stats(0, i).transition.divergent, draws.stats(1, i).transition.divergent);
  }
}

TEST(DrawsCsv, MetropolisLeavesHamiltonianColumnsEmpty) {
  ExperimentConfig c = small_funnel();
  c.sampler.kind = SamplerKind::rwm;
  c.run.chains = 1;
  const RunRecord record = run_experiment(c);
  std::stringstream csv;
  write_draws_csv(csv, record.result.draws, 0, 1, CsvLayout{SamplerKind::rwm, 150, 1});
  std::string line;
  std::getline(csv, line);
  std::getline(csv, line);
  // chain,iter,lp,accept,stepsize then four empty fields.
  std::vector<std::string> fields;
  std::stringstream ss(line);
  for (std::string f; std::getline(ss, f, ',');) fields.push_back(f);
  ASSERT_GE(fields.size(), 9u);
  EXPECT_EQ(fields[0], "1");
  EXPECT_EQ(fields[1], "1");
  for (int i = 5; i < 9; ++i) EXPECT_TRUE(fields[static_cast<std::size_t>(i)].empty()) << i;
}

TEST(DrawsCsv, ThinnedWarmupIterationNumbers) {
  ExperimentConfig c = small_funnel();
  c.run.chains = 1;
  c.run.warmup = 20;
  c.run.samples = 10;
  c.run.thin = 5;
  c.run.save_warmup = true;
  const RunRecord record = run_experiment(c);
  ASSERT_EQ(record.result.draws.draws(), 2u);
  ASSERT_EQ(record.result.warmup.draws(), 4u);
  std::stringstream csv;
  write_draws_csv(csv, record.result.draws, 0, 1, CsvLayout{SamplerKind::nuts, 20, 5}, &record.result.warmup);
  std::vector<std::string> iters;
  std::string line;
  std::getline(csv, line);
  while (std::getline(csv, line)) {
    const auto a = line.find(',');
    iters.push_back(line.substr(a + 1, line.find(',', a + 1) - a - 1));
  }
  EXPECT_EQ(iters, (std::vector<std::string>{"-20", "-15", "-10", "-5", "1", "6"}));
  std::stringstream again(csv.str());
  EXPECT_EQ(read_draws_csv(again).draws(), 2u);
}

TEST(DrawsCsv, EmptyChainWritesHeaderOnly) {
  DrawMatrix draws({"a", "b"});
  draws.add_chain();
  std::stringstream csv;
  write_draws_csv(csv, draws, 0, 1, CsvLayout{});
  EXPECT_EQ(csv.str(), std::string(kCsvStatColumns) + ",a,b\n");
}

TEST(DrawsCsv, RejectsForeignFiles) {
  std::stringstream bad("x,y\n1,2\n");
  EXPECT_THROW(read_draws_csv(bad), std::runtime_error);
  std::stringstream empty;
  EXPECT_THROW(read_draws_csv(empty), std::runtime_error);
}

TEST(RunOutputs, DeterministicFiles) {
  const fs::path dir = scratch("determinism");
  ExperimentConfig c = small_funnel();
  const auto a = write_run_outputs(run_experiment(c), (dir / "a").string());
  const auto b = write_run_outputs(run_experiment(c), (dir / "b").string());
  ASSERT_EQ(a.size(), 3u);
  for (std::size_t i = 0; i < 2; ++i) EXPECT_EQ(slurp(a[i]), slurp(b[i]));
  EXPECT_TRUE(fs::exists(dir / "a_chain1.csv"));
  EXPECT_TRUE(fs::exists(dir / "a_chain2.csv"));
  std::ifstream in(dir / "a_run.json");
  const nlohmann::json record = nlohmann::json::parse(in);
  EXPECT_EQ(record.at("config").at("seed"), 11);
  const CompareRow from_file = compare_row(record);
  const CompareRow direct = compare_row(run_experiment(c));
  EXPECT_EQ(from_file.algorithm, direct.algorithm);
  EXPECT_EQ(from_file.parameter, "v");
  EXPECT_DOUBLE_EQ(from_file.ess_per_eval, direct.ess_per_eval);
  fs::remove_all(dir);
}

TEST(RunOutputs, ParallelAndSequentialAgree) {
  ExperimentConfig c = small_funnel();
  const RunRecord a = run_experiment(c);
  c.run.parallel = false;
  const RunRecord b = run_experiment(c);
  for (std::size_t ch = 0; ch < 2; ++ch)
    for (std::size_t i = 0; i < a.result.draws.chain_length(ch); ++i)
      ASSERT_EQ(a.result.draws.value(ch, i, 3), b.result.draws.value(ch, i, 3));
}

TEST(RunOutputs, EveryModelAndSamplerRuns) {
  for (const auto& id : model_ids()) {
    for (const SamplerKind kind :
         {SamplerKind::rwm, SamplerKind::mwg, SamplerKind::ehmc, SamplerKind::nuts, SamplerKind::rmhmc}) {
      ExperimentConfig c;
      c.model.id = id;
      c.model.n = 3;
      c.model.groups = 4;
      c.sampler.kind = kind;
      c.run.chains = 1;
      c.run.warmup = 40;
      c.run.samples = 20;
      const RunRecord r = run_experiment(c);
      EXPECT_EQ(r.result.draws.draws(), 20u) << id << " " << to_string(kind);
      EXPECT_GT(r.result.total_evals, 0);
    }
  }
}

TEST(Compare, SingleRowTable) {
  CompareRow row{"nuts", "NCP", 0.3, 0.91, 1.5, 0.002, 0.01, "tau"};
  std::ostringstream table, csv;
  print_compare_table(table, {row});
  write_compare_csv(csv, {row});
  EXPECT_NE(table.str().find("NCP"), std::string::npos);
  const std::string text = csv.str();
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 2);
}

TEST(Spearman, RankCorrelation) {
  EXPECT_DOUBLE_EQ(spearman({1, 2, 3, 4}, {10, 20, 30, 40}), 1.0);
  EXPECT_DOUBLE_EQ(spearman({1, 2, 3, 4}, {4, 3, 2, 1}), -1.0);
  EXPECT_NEAR(spearman({1, 2, 3, 4, 5}, {1, 100, 3, 4, 5}), 0.4, 1e-15);
  // Ties take averaged ranks: x ranks (1.5, 1.5, 3), y ranks (1, 2, 3).
  EXPECT_NEAR(spearman({1, 1, 2}, {1, 2, 3}), 0.8660254037844386, 1e-12);
}

TEST(Benchmark, ConsistencyGate) {
  const Moments base{3.0, 1.0, 0.05, 0.04};
  EXPECT_TRUE(consistent({3.1, 1.05, 0.05, 0.04}, base));
  EXPECT_FALSE(consistent({3.5, 1.0, 0.05, 0.04}, base));
  EXPECT_FALSE(consistent({3.0, 0.6, 0.05, 0.04}, base));
  const Moments m = moments_of({{1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0}});
  EXPECT_DOUBLE_EQ(m.mean, 4.5);
  EXPECT_NEAR(m.sd, std::sqrt(6.0), 1e-12);
}

TEST(Crossover, MediansPerSigma) {
  const std::vector<CrossoverCell> cells{{1.0, 1, 1.0, 2.0}, {1.0, 2, 1.0, 4.0}, {1.0, 3, 1.0, 3.0},
                                         {2.0, 1, 2.0, 2.0}, {2.0, 2, 1.0, 3.0}};
  const auto med = crossover_medians(cells, {1.0, 2.0});
  ASSERT_EQ(med.size(), 2u);
  EXPECT_DOUBLE_EQ(med[0], 3.0);
  EXPECT_DOUBLE_EQ(med[1], 2.0);
}

TEST(Presets, UnknownNameIsConfigError) {
  std::ostringstream report;
  EXPECT_THROW(run_preset("nope", PresetOptions{}, report), ConfigError);
  EXPECT_EQ(preset_names().size(), 6u);
}

TEST(Presets, CurvatureFieldWritesCsv) {
  const fs::path dir = scratch("preset");
  std::ostringstream report;
  run_preset("curvature-field", PresetOptions{dir, 1, false, std::nullopt}, report);
  EXPECT_TRUE(fs::exists(dir / "curvature_field.csv"));
  fs::remove_all(dir);
}

TEST(Cli, ExitCodes) {
  const fs::path dir = scratch("cli");
  const std::string out = (dir / "r").string();
  EXPECT_EQ(cli(""), 2);
  EXPECT_EQ(cli("frobnicate"), 2);
  EXPECT_EQ(cli("run --help"), 0);
  EXPECT_EQ(cli("run --thin 0"), 2);
  EXPECT_EQ(cli("run --bogus 1"), 2);
  EXPECT_EQ(cli("preset nope"), 2);
  EXPECT_EQ(cli("generate-data --J 12 --output " + (dir / "d.txt").string()), 0);
  EXPECT_EQ(cli("run --model oneway-ncp --data " + (dir / "d.txt").string() +
                " --chains 2 --warmup 100 --samples 50 --output " + out),
            0);
  EXPECT_EQ(cli("summarize " + out + "_chain1.csv " + out + "_chain2.csv --csv " + (dir / "s.csv").string()), 0);
  EXPECT_TRUE(fs::exists(dir / "s.csv"));
  EXPECT_EQ(cli("compare " + out + "_run.json"), 0);
  EXPECT_EQ(cli("summarize " + (dir / "missing.csv").string()), 3);
  std::ofstream(dir / "broken.json") << "{ not json";
  EXPECT_EQ(cli("compare " + (dir / "broken.json").string()), 3);
  std::ofstream(dir / "bad.txt") << "J 3\ny 1 2\nsigma 1 1 1\n";
  EXPECT_EQ(cli("run --model oneway-cp --data " + (dir / "bad.txt").string() + " --output " + out), 4);
  fs::remove_all(dir);
}
