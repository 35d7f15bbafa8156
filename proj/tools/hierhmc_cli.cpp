// Command-line driver: run, preset, summarize, compare, generate-data.

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hierhmc/experiments.hpp"

namespace {

using namespace hierhmc;

enum ExitCode { kOk = 0, kConfig = 2, kData = 3, kModel = 4, kRuntime = 5 };

const char* kUsage =
    "usage: hierhmc <command> [options]\n"
    "commands:\n"
    "  run            sample one model with one sampler\n"
    "  preset NAME    run a bundled experiment\n"
    "  summarize      summarize draw files\n"
    "  compare        tabulate run records\n"
    "  generate-data  simulate one-way normal data\n"
    "Use 'hierhmc <command> --help' for options.\n";

std::vector<std::string> rest(int argc, char** argv) { return {argv + 2, argv + argc}; }

int run_command(const std::vector<std::string>& args) {
  for (const auto& a : args) {
    if (a == "--help" || a == "-h") {
      std::cout << run_help();
      return kOk;
    }
  }
  const ExperimentConfig config = parse_config(args);
  const RunRecord record = run_experiment(config);
  const auto files = write_run_outputs(record, config.output);
  print_summary(std::cout, record.summary);
  std::cout << '\n';
  print_compare_table(std::cout, {compare_row(record)});
  for (const auto& f : files) std::cout << "wrote " << f.string() << '\n';
  return kOk;
}

int preset_command(int argc, char** argv) {
  CLI::App app("Run a bundled experiment", "hierhmc preset");
  std::string name;
  PresetOptions options;
  std::string output_dir = options.output_dir.string();
  int seeds = 0;
  app.add_option("name", name, "preset name")->required();
  app.add_option("--output-dir,--output_dir", output_dir, "directory for outputs");
  app.add_option("--seed", options.seed, "random seed");
  app.add_option("--seeds", seeds, "number of seeds for multi-seed presets");
  app.add_flag("--full", options.full, "full-size settings");
  try {
    app.parse(argc - 1, argv + 1);
  } catch (const CLI::CallForHelp&) {
    std::cout << app.help();
    std::cout << "presets:";
    for (const auto& p : preset_names()) std::cout << ' ' << p;
    std::cout << '\n';
    return kOk;
  } catch (const CLI::ParseError& e) {
    throw ConfigError("preset", e.what());
  }
  options.output_dir = output_dir;
  if (seeds > 0) options.seeds = seeds;
  run_preset(name, options, std::cout);
  return kOk;
}

int summarize_command(int argc, char** argv) {
  CLI::App app("Summarize draw files", "hierhmc summarize");
  std::vector<std::string> files;
  std::string csv;
  double wall_time = 0.0;
  app.add_option("files", files, "draw CSV files")->required();
  app.add_option("--csv", csv, "also write the summary as CSV");
  app.add_option("--wall-time,--wall_time", wall_time, "seconds to use for time/ESS");
  try {
    app.parse(argc - 1, argv + 1);
  } catch (const CLI::CallForHelp&) {
    std::cout << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    throw ConfigError("summarize", e.what());
  }
  std::vector<std::filesystem::path> paths(files.begin(), files.end());
  const DrawMatrix draws = read_draws_csv(paths);
  if (draws.empty()) throw std::runtime_error("no post-warmup draws in the given files");
  const Summary summary = summarize(draws, wall_time);
  print_summary(std::cout, summary);
  if (!csv.empty()) {
    std::ofstream out(csv);
    if (!out) throw std::runtime_error("cannot write '" + csv + "'");
    write_summary_csv(out, summary);
  }
  return kOk;
}

int compare_command(int argc, char** argv) {
  CLI::App app("Tabulate run records", "hierhmc compare");
  std::vector<std::string> files;
  std::string csv;
  app.add_option("records", files, "<prefix>_run.json files")->required();
  app.add_option("--csv", csv, "also write the table as CSV");
  try {
    app.parse(argc - 1, argv + 1);
  } catch (const CLI::CallForHelp&) {
    std::cout << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    throw ConfigError("compare", e.what());
  }
  std::vector<CompareRow> rows;
  for (const auto& f : files) {
    std::ifstream in(f);
    if (!in) throw std::runtime_error("cannot read '" + f + "'");
    rows.push_back(compare_row(nlohmann::json::parse(in)));
  }
  print_compare_table(std::cout, rows);
  if (!csv.empty()) {
    std::ofstream out(csv);
    if (!out) throw std::runtime_error("cannot write '" + csv + "'");
    write_compare_csv(out, rows);
  }
  return kOk;
}

int generate_command(int argc, char** argv) {
  CLI::App app("Simulate one-way normal data", "hierhmc generate-data");
  double mu = 8.0;
  double tau = 3.0;
  double sigma = 10.0;
  int groups = 800;
  std::uint64_t seed = 48383823;
  std::string output;
  std::string format = "text";
  app.add_option("--mu", mu, "population mean");
  app.add_option("--tau", tau, "population sd")->check(CLI::NonNegativeNumber);
  app.add_option("--sigma", sigma, "measurement sd")->check(CLI::PositiveNumber);
  app.add_option("--J", groups, "number of groups")->check(CLI::PositiveNumber);
  app.add_option("--seed", seed, "random seed");
  app.add_option("--output", output, "output file")->required();
  app.add_option("--format", format, "text | json")->check(CLI::IsMember({"text", "json"}));
  try {
    app.parse(argc - 1, argv + 1);
  } catch (const CLI::CallForHelp&) {
    std::cout << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    throw ConfigError("generate-data", e.what());
  }
  RngStream rng(seed, 0);
  const OneWayNormalData data = generate_pseudodata(mu, tau, sigma, groups, rng);
  if (format == "json") {
    write_dataset_json(data, output);
  } else {
    write_dataset_text(data, output);
  }
  std::cout << "wrote " << groups << " groups to " << output << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << kUsage;
    return kConfig;
  }
  const std::string command = argv[1];
  try {
    if (command == "run") return run_command(rest(argc, argv));
    if (command == "preset") return preset_command(argc, argv);
    if (command == "summarize") return summarize_command(argc, argv);
    if (command == "compare") return compare_command(argc, argv);
    if (command == "generate-data") return generate_command(argc, argv);
    if (command == "--help" || command == "-h" || command == "help") {
      std::cout << kUsage;
      return kOk;
    }
    std::cerr << "config error: unknown command '" << command << "'\n" << kUsage;
    return kConfig;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const ModelError& e) {
    std::cerr << "model error: " << e.what() << '\n';
    return kModel;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kRuntime;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kData;
  } catch (const std::runtime_error& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntime;
  }
}
