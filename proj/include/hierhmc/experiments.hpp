#pragma once

#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "hierhmc/adaptation.hpp"
#include "hierhmc/diagnostics.hpp"
#include "hierhmc/models.hpp"
#include "hierhmc/runner.hpp"

namespace hierhmc {

/// Invalid configuration; `key()` names the offending setting.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& message)
      : std::runtime_error(key + ": " + message), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

/// Model id plus its parameters. One-way models read `data` when set and
/// otherwise simulate J groups from (mu, tau, sigma) with `data_seed`.
struct ModelSpec {
  std::string id = "funnel";
  int n = FunnelModel::kDefaultSize;
  int groups = 200;
  std::string data;
  double mu = 8.0;
  double tau = 3.0;
  double sigma = 10.0;
  std::uint64_t data_seed = 48383823;
};

struct ExperimentConfig {
  ModelSpec model;
  SamplerSettings sampler;
  RunSettings run;
  /// Output prefix: draws go to <output>_chain<k>.csv, the record to
  /// <output>_run.json.
  std::string output = "output";
};

const std::vector<std::string>& model_ids();

std::unique_ptr<TargetModel> make_model(const ModelSpec& spec);

/// Checks bounds and file references; throws ConfigError.
void validate(const ExperimentConfig& config);

/// Parses the arguments of `run` (without the subcommand itself). A
/// `--config FILE` of key=value lines supplies defaults that flags
/// override. Throws ConfigError.
ExperimentConfig parse_config(const std::vector<std::string>& args);

/// Option reference for `run`.
std::string run_help();

nlohmann::json config_to_json(const ExperimentConfig& config);

struct RunRecord {
  ExperimentConfig config;
  std::string model_name;
  std::string slowest_parameter;
  RunResult result;
  Summary summary;
};

/// Pre-flight check, chains, summary. Writes nothing.
RunRecord run_experiment(const ExperimentConfig& config);

/// Writes <prefix>_chain<k>.csv for every chain and <prefix>_run.json.
/// Returns the paths written.
std::vector<std::filesystem::path> write_run_outputs(const RunRecord& record, const std::string& prefix);

nlohmann::json record_to_json(const RunRecord& record);

// Draw files ----------------------------------------------------------------

inline constexpr const char* kCsvStatColumns =
    "chain,iter,lp__,accept_stat__,stepsize__,int_steps__,treedepth__,divergent__,energy__";

struct CsvLayout {
  SamplerKind sampler = SamplerKind::nuts;
  int warmup = 0;
  int thin = 1;
};

/// Writes one chain (1-based `chain_id` in the file). Warmup draws, when
/// given, come first with negative iteration numbers.
void write_draws_csv(std::ostream& out, const DrawMatrix& draws, std::size_t chain, int chain_id,
                     const CsvLayout& layout, const DrawMatrix* warmup = nullptr);

/// Reads post-warmup draws (iter > 0) from one or more files in the format
/// above; chains are keyed by the chain column.
DrawMatrix read_draws_csv(std::istream& in);
DrawMatrix read_draws_csv(const std::vector<std::filesystem::path>& files);

// Comparison table ------------------------------------------------------------

struct CompareRow {
  std::string algorithm;
  std::string parameterization;
  double step_size = 0.0;
  double accept = 0.0;
  double time = 0.0;
  double time_per_ess = 0.0;
  double ess_per_eval = 0.0;
  std::string parameter;
};

CompareRow compare_row(const RunRecord& record);
/// Reads the row stored in a run record file.
CompareRow compare_row(const nlohmann::json& record);
void print_compare_table(std::ostream& out, const std::vector<CompareRow>& rows);
void write_compare_csv(std::ostream& out, const std::vector<CompareRow>& rows);

// Presets -------------------------------------------------------------------

const std::vector<std::string>& preset_names();

struct PresetOptions {
  std::filesystem::path output_dir = "preset-output";
  std::uint64_t seed = 1;
  bool full = false;
  /// Overrides the preset's seed count where it uses several seeds.
  std::optional<int> seeds;
};

/// Runs a preset, writes its files to `output_dir` and prints a report.
/// Throws ConfigError for unknown names.
void run_preset(const std::string& name, const PresetOptions& options, std::ostream& report);

// One-way benchmark -----------------------------------------------------------

struct BenchmarkSettings {
  int groups = 200;
  double mu = 8.0;
  double tau = 3.0;
  double sigma = 10.0;
  std::uint64_t data_seed = 48383823;
  std::uint64_t seed = 1;
  int chains = 4;
  int warmup = 1000;
  int samples = 2500;
  double baseline_delta = 0.99;
  int max_depth = 10;
  /// Iterations per chain for random-walk Metropolis, kept after thinning
  /// down to `samples`.
  int rwm_iterations = 50000;
  std::vector<double> nuts_deltas{0.8, 0.9, 0.95, 0.99};
  /// Multiples of 2.38 / sqrt(d) times the baseline marginal sds.
  std::vector<double> rwm_multipliers{0.5, 1.0, 1.5};
  /// Multiples of the baseline marginal sds.
  std::vector<double> mwg_multipliers{1.0, 1.5, 2.0, 2.5};

  static BenchmarkSettings desk();
  static BenchmarkSettings full();
};

struct Moments {
  double mean = 0.0;
  double sd = 0.0;
  double se_mean = 0.0;
  double se_sd = 0.0;
};

Moments moments_of(const ChainSamples& chains);

/// True when mean and sd agree within `tolerance` combined standard errors.
bool consistent(const Moments& row, const Moments& baseline, double tolerance = 3.0);

struct BenchmarkCandidate {
  CompareRow row;
  Moments tau;
  bool consistent = false;
  double setting = 0.0;
};

struct BenchmarkResult {
  CompareRow baseline;
  Moments baseline_tau;
  /// Chosen rows: CP then NCP, each rwm, mwg, nuts.
  std::vector<CompareRow> rows;
  std::vector<BenchmarkCandidate> candidates;
  std::vector<std::string> exclusions;
  /// Rows with no consistent candidate.
  std::vector<std::string> missing;
  double wall_time = 0.0;
};

BenchmarkResult run_benchmark(const BenchmarkSettings& settings, std::ostream* log = nullptr);

// Parameterization crossover --------------------------------------------------

struct CrossoverSettings {
  int groups = 10;
  double mu = 8.0;
  double tau = 3.0;
  std::vector<double> sigmas{0.5, 1.0, 2.0, 5.0, 10.0, 20.0};
  int seeds = 8;
  std::uint64_t seed = 1;
  int chains = 4;
  int warmup = 1000;
  int samples = 1000;
  double adapt_delta = 0.95;
};

struct CrossoverCell {
  double sigma = 0.0;
  std::uint64_t seed = 0;
  double cp_ess_per_eval = 0.0;
  double ncp_ess_per_eval = 0.0;
  double ratio() const { return ncp_ess_per_eval / cp_ess_per_eval; }
};

std::vector<CrossoverCell> crossover_sweep(const CrossoverSettings& settings);
/// Median NCP / CP ratio per sigma, in sigma order.
std::vector<double> crossover_medians(const std::vector<CrossoverCell>& cells, const std::vector<double>& sigmas);
void write_crossover_csv(std::ostream& out, const std::vector<CrossoverCell>& cells);

double spearman(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace hierhmc
