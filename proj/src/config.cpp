#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <map>

#include <CLI11.hpp>

#include "hierhmc/experiments.hpp"

namespace hierhmc {

const std::vector<std::string>& model_ids() {
  static const std::vector<std::string> ids{"funnel", "gaussian", "oneway-cp", "oneway-ncp"};
  return ids;
}

std::unique_ptr<TargetModel> make_model(const ModelSpec& spec) {
  if (spec.id == "funnel") return std::make_unique<FunnelModel>(spec.n);
  if (spec.id == "gaussian") return std::make_unique<GaussianModel>(GaussianModel::standard(spec.n));
  if (spec.id == "oneway-cp" || spec.id == "oneway-ncp") {
    OneWayNormalData data;
    if (!spec.data.empty()) {
      data = read_dataset(spec.data);
    } else {
      RngStream rng(spec.data_seed, 0);
      data = generate_pseudodata(spec.mu, spec.tau, spec.sigma, spec.groups, rng);
    }
    if (spec.id == "oneway-cp") return std::make_unique<OneWayNormalCP>(std::move(data));
    return std::make_unique<OneWayNormalNCP>(std::move(data));
  }
  throw ConfigError("model", "unknown model '" + spec.id + "'");
}

void validate(const ExperimentConfig& config) {
  const auto& m = config.model;
  if (std::find(model_ids().begin(), model_ids().end(), m.id) == model_ids().end()) {
    throw ConfigError("model", "unknown model '" + m.id + "'");
  }
  if (m.n < 1) throw ConfigError("n", "must be at least 1");
  if (m.groups < 1) throw ConfigError("J", "must be at least 1");
  if (!(m.tau >= 0.0)) throw ConfigError("tau", "must be non-negative");
  if (!(m.sigma > 0.0)) throw ConfigError("sigma", "must be positive");
  if (!m.data.empty() && !std::filesystem::is_regular_file(m.data)) {
    throw ConfigError("data", "file '" + m.data + "' does not exist");
  }

  const auto& s = config.sampler;
  if (!(s.step_size >= 0.0) || !std::isfinite(s.step_size)) throw ConfigError("stepsize", "must be non-negative");
  if (!(s.adapt_delta > 0.0 && s.adapt_delta < 1.0)) throw ConfigError("adapt-delta", "must lie in (0, 1)");
  if (s.steps < 0) throw ConfigError("steps", "must be non-negative");
  if (s.max_depth < 1) throw ConfigError("max-depth", "must be at least 1");
  if (!(s.scale > 0.0)) throw ConfigError("scale", "must be positive");
  if (!(s.riemannian.alpha > 0.0)) throw ConfigError("alpha", "must be positive");
  if (!(s.riemannian.fp_tol > 0.0)) throw ConfigError("fp-tol", "must be positive");
  if (s.riemannian.fp_max < 1) throw ConfigError("fp-max", "must be at least 1");

  const auto& r = config.run;
  if (r.chains < 1) throw ConfigError("chains", "must be at least 1");
  if (r.warmup < 0) throw ConfigError("warmup", "must be non-negative");
  if (r.samples < 0) throw ConfigError("samples", "must be non-negative");
  if (r.thin < 1) throw ConfigError("thin", "must be at least 1");
  if (!(r.init_radius > 0.0)) throw ConfigError("init-radius", "must be positive");
  if (config.output.empty()) throw ConfigError("output", "must not be empty");
}

namespace {

template <typename T>
T parse_number(const std::string& key, const std::string& text) {
  T value{};
  const char* first = text.data();
  const char* last = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || text.empty()) {
    throw ConfigError(key, "malformed number '" + text + "'");
  }
  return value;
}

// Long option names with an underscore alias for config files.
std::string option_names(const std::string& key) {
  std::string names = "--" + key;
  std::string underscored = key;
  std::replace(underscored.begin(), underscored.end(), '-', '_');
  if (underscored != key) names += ",--" + underscored;
  return names;
}

std::string offending_key(const std::string& message) {
  // CLI11 messages mention the key after the last space or as --key.
  const auto dash = message.find("--");
  if (dash != std::string::npos) {
    const auto end = message.find_first_of(" =:", dash);
    return message.substr(dash + 2, end == std::string::npos ? std::string::npos : end - dash - 2);
  }
  const auto space = message.find_last_of(' ');
  return space == std::string::npos ? message : message.substr(space + 1);
}

}  // namespace

namespace {

struct RunOptions {
  CLI::App app{"Sample one model with one sampler", "hierhmc run"};
  std::map<std::string, std::string> values;
  bool no_adapt = false;
  bool save_warmup = false;

  RunOptions() {
    app.allow_config_extras(CLI::config_extras_mode::error);
    app.set_config("--config", "", "key=value file with default settings");
    const std::vector<std::pair<std::string, std::string>> keys{
        {"model", "funnel | gaussian | oneway-cp | oneway-ncp"},
        {"n", "funnel latent count or gaussian dimension"},
        {"J", "groups of simulated one-way data"},
        {"data", "one-way data file"},
        {"mu", "simulated data: population mean"},
        {"tau", "simulated data: population sd"},
        {"sigma", "simulated data: measurement sd"},
        {"data-seed", "simulated data: seed"},
        {"sampler", "rwm | mwg | ehmc | nuts | rmhmc"},
        {"stepsize", "initial or fixed step size (0: heuristic)"},
        {"adapt-delta", "target acceptance statistic"},
        {"steps", "leapfrog steps for ehmc and rmhmc (0: sampler default)"},
        {"max-depth", "NUTS tree depth limit"},
        {"metric", "unit | diag"},
        {"scale", "proposal scale multiplier for rwm and mwg"},
        {"alpha", "SoftAbs sharpness"},
        {"fp-tol", "fixed-point tolerance"},
        {"fp-max", "fixed-point iteration limit"},
        {"chains", "number of chains"},
        {"warmup", "warmup iterations per chain"},
        {"samples", "sampling iterations per chain"},
        {"thin", "keep every thin-th draw"},
        {"seed", "random seed"},
        {"init-radius", "initial points drawn from uniform(-r, r)"},
        {"output", "output prefix"},
    };
    for (const auto& [key, help] : keys) {
      std::string& slot = values[key];
      app.add_option(option_names(key), slot, help);
    }
    app.add_flag(option_names("no-adapt"), no_adapt, "keep the step size fixed");
    app.add_flag(option_names("save-warmup"), save_warmup, "write warmup draws");
  }
};

}  // namespace

std::string run_help() {
  RunOptions options;
  return options.app.help();
}

ExperimentConfig parse_config(const std::vector<std::string>& args) {
  RunOptions options;
  auto& app = options.app;
  auto& values = options.values;
  std::vector<std::string> argv_storage{"run"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_storage) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ConfigError& e) {
    throw ConfigError(offending_key(e.what()), std::string("unknown or malformed key: ") + e.what());
  } catch (const CLI::ParseError& e) {
    throw ConfigError(offending_key(e.what()), e.what());
  }

  ExperimentConfig config;
  auto set = [&](const std::string& key, auto& target) {
    const std::string& text = values.at(key);
    if (text.empty()) return;
    using T = std::decay_t<decltype(target)>;
    if constexpr (std::is_same_v<T, std::string>) {
      target = text;
    } else {
      target = parse_number<T>(key, text);
    }
  };
  set("model", config.model.id);
  set("n", config.model.n);
  set("J", config.model.groups);
  set("data", config.model.data);
  set("mu", config.model.mu);
  set("tau", config.model.tau);
  set("sigma", config.model.sigma);
  set("data-seed", config.model.data_seed);
  if (const auto& name = values.at("sampler"); !name.empty()) {
    const auto kind = parse_sampler_kind(name);
    if (!kind) throw ConfigError("sampler", "unknown sampler '" + name + "'");
    config.sampler.kind = *kind;
  }
  set("stepsize", config.sampler.step_size);
  set("adapt-delta", config.sampler.adapt_delta);
  set("steps", config.sampler.steps);
  set("max-depth", config.sampler.max_depth);
  if (const auto& name = values.at("metric"); !name.empty()) {
    const auto kind = parse_metric_kind(name);
    if (!kind) throw ConfigError("metric", "unknown metric '" + name + "'");
    config.sampler.metric = *kind;
  }
  set("scale", config.sampler.scale);
  set("alpha", config.sampler.riemannian.alpha);
  set("fp-tol", config.sampler.riemannian.fp_tol);
  set("fp-max", config.sampler.riemannian.fp_max);
  set("chains", config.run.chains);
  set("warmup", config.run.warmup);
  set("samples", config.run.samples);
  set("thin", config.run.thin);
  set("seed", config.run.seed);
  set("init-radius", config.run.init_radius);
  set("output", config.output);
  config.sampler.adapt = !options.no_adapt;
  config.run.save_warmup = options.save_warmup;

  validate(config);
  return config;
}

nlohmann::json config_to_json(const ExperimentConfig& config) {
  const auto& m = config.model;
  const auto& s = config.sampler;
  const auto& r = config.run;
  nlohmann::json j;
  j["model"] = m.id;
  j["n"] = m.n;
  j["J"] = m.groups;
  j["data"] = m.data;
  j["mu"] = m.mu;
  j["tau"] = m.tau;
  j["sigma"] = m.sigma;
  j["data_seed"] = m.data_seed;
  j["sampler"] = to_string(s.kind);
  j["stepsize"] = s.step_size;
  j["adapt"] = s.adapt;
  j["adapt_delta"] = s.adapt_delta;
  j["steps"] = s.steps;
  j["max_depth"] = s.max_depth;
  j["metric"] = to_string(s.metric);
  j["scale"] = s.scale;
  j["alpha"] = s.riemannian.alpha;
  j["fp_tol"] = s.riemannian.fp_tol;
  j["fp_max"] = s.riemannian.fp_max;
  j["chains"] = r.chains;
  j["warmup"] = r.warmup;
  j["samples"] = r.samples;
  j["thin"] = r.thin;
  j["seed"] = r.seed;
  j["save_warmup"] = r.save_warmup;
  j["init_radius"] = r.init_radius;
  j["output"] = config.output;
  return j;
}

}  // namespace hierhmc
