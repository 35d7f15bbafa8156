#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

#include "hierhmc/experiments.hpp"

namespace hierhmc {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string parameterization_of(const std::string& model_name) {
  if (model_name == "oneway-cp") return "CP";
  if (model_name == "oneway-ncp") return "NCP";
  return model_name;
}

double json_number(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return kNaN;
  return j.at(key).get<double>();
}

nlohmann::json number_or_null(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }

void write_number(std::ostream& out, double v) {
  if (!std::isnan(v)) out << v;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

double parse_field(const std::string& text, double fallback) {
  if (text.empty()) return fallback;
  std::size_t used = 0;
  const double v = std::stod(text, &used);
  if (used != text.size()) throw std::runtime_error("malformed number '" + text + "' in draws file");
  return v;
}

}  // namespace

RunRecord run_experiment(const ExperimentConfig& config) {
  validate(config);
  const auto model = make_model(config.model);
  check_compatible(*model, config.sampler);
  RunRecord record;
  record.config = config;
  record.model_name = model->name();
  record.slowest_parameter = model->slowest_parameter();
  record.result = run_chains(*model, config.sampler, config.run);
  record.summary = summarize(record.result.draws, record.result.wall_time, record.result.total_evals);
  return record;
}

nlohmann::json record_to_json(const RunRecord& record) {
  nlohmann::json j;
  j["config"] = config_to_json(record.config);
  j["model"] = record.model_name;
  j["wall_time"] = record.result.wall_time;
  j["wall_time_note"] = "includes warmup, excludes output";
  j["total_evals"] = record.result.total_evals;
  nlohmann::json chains = nlohmann::json::array();
  for (const auto& c : record.result.chains) {
    nlohmann::json cj;
    cj["step_size"] = c.step_size;
    cj["inverse_metric"] = std::vector<double>(c.inverse_metric.data(), c.inverse_metric.data() + c.inverse_metric.size());
    cj["n_evals"] = c.n_evals;
    cj["warmup_evals"] = c.warmup_evals;
    cj["stability_bound"] = number_or_null(c.stability_bound);
    chains.push_back(cj);
  }
  j["chains"] = chains;
  j["divergent"] = record.summary.divergent;
  j["mean_accept_stat"] = number_or_null(record.summary.mean_accept_stat);
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : record.summary.rows) {
    rows.push_back({{"name", r.name},
                    {"mean", number_or_null(r.mean)},
                    {"sd", number_or_null(r.sd)},
                    {"q5", number_or_null(r.q05)},
                    {"q50", number_or_null(r.q50)},
                    {"q95", number_or_null(r.q95)},
                    {"ess", number_or_null(r.ess)},
                    {"rhat", number_or_null(r.rhat)}});
  }
  j["summary"] = rows;
  const CompareRow c = compare_row(record);
  j["compare"] = {{"algorithm", c.algorithm},
                  {"parameterization", c.parameterization},
                  {"step_size", number_or_null(c.step_size)},
                  {"accept", number_or_null(c.accept)},
                  {"time", number_or_null(c.time)},
                  {"time_per_ess", number_or_null(c.time_per_ess)},
                  {"ess_per_eval", number_or_null(c.ess_per_eval)},
                  {"parameter", c.parameter}};
  return j;
}

std::vector<std::filesystem::path> write_run_outputs(const RunRecord& record, const std::string& prefix) {
  const std::filesystem::path base(prefix);
  if (base.has_parent_path()) std::filesystem::create_directories(base.parent_path());
  std::vector<std::filesystem::path> written;
  const CsvLayout layout{record.config.sampler.kind, record.config.run.warmup, record.config.run.thin};
  const auto& draws = record.result.draws;
  for (std::size_t c = 0; c < draws.chains(); ++c) {
    const std::filesystem::path path = prefix + "_chain" + std::to_string(c + 1) + ".csv";
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    write_draws_csv(out, draws, c, static_cast<int>(c + 1), layout,
                    record.config.run.save_warmup ? &record.result.warmup : nullptr);
    written.push_back(path);
  }
  const std::filesystem::path json_path = prefix + "_run.json";
  nlohmann::json j = record_to_json(record);
  nlohmann::json files = nlohmann::json::array();
  for (const auto& p : written) files.push_back(p.filename().string());
  j["files"] = files;
  std::ofstream out(json_path);
  if (!out) throw std::runtime_error("cannot write '" + json_path.string() + "'");
  out << j.dump(2) << '\n';
  written.push_back(json_path);
  return written;
}

void write_draws_csv(std::ostream& out, const DrawMatrix& draws, std::size_t chain, int chain_id,
                     const CsvLayout& layout, const DrawMatrix* warmup) {
  out << kCsvStatColumns;
  for (const auto& name : draws.names()) out << ',' << name;
  out << '\n';
  out << std::setprecision(17);

  const bool hamiltonian = is_hamiltonian(layout.sampler);
  auto row = [&](const DrawMatrix& m, std::size_t i, long iter) {
    const DrawStats& s = m.stats(chain, i);
    const TransitionStats& t = s.transition;
    out << chain_id << ',' << iter << ',';
    write_number(out, s.lp);
    out << ',';
    write_number(out, t.accept_stat);
    out << ',';
    write_number(out, t.step_size);
    out << ',';
    if (hamiltonian) out << t.n_steps;
    out << ',';
    if (layout.sampler == SamplerKind::nuts) out << t.tree_depth;
    out << ',';
    if (hamiltonian) out << (t.divergent ? 1 : 0);
    out << ',';
    if (hamiltonian) write_number(out, t.energy);
    for (std::size_t k = 0; k < m.dim(); ++k) {
      out << ',';
      write_number(out, m.value(chain, i, k));
    }
    out << '\n';
  };

  if (warmup && chain < warmup->chains()) {
    for (std::size_t i = 0; i < warmup->chain_length(chain); ++i) {
      row(*warmup, i, static_cast<long>(i) * layout.thin - layout.warmup);
    }
  }
  if (chain < draws.chains()) {
    for (std::size_t i = 0; i < draws.chain_length(chain); ++i) row(draws, i, static_cast<long>(i) * layout.thin + 1);
  }
}

DrawMatrix read_draws_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("draws file is empty");
  const std::string prefix = std::string(kCsvStatColumns);
  if (line.rfind(prefix, 0) != 0) throw std::runtime_error("draws file header does not start with the statistic columns");
  std::vector<std::string> names = split_csv_line(line);
  const std::size_t n_stats = split_csv_line(prefix).size();
  names.erase(names.begin(), names.begin() + static_cast<std::ptrdiff_t>(n_stats));

  DrawMatrix draws(names);
  std::map<long, std::size_t> chain_index;
  Vec values(static_cast<Eigen::Index>(names.size()));
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != n_stats + names.size()) throw std::runtime_error("draws file row has the wrong field count");
    const long iter = std::stol(fields[1]);
    if (iter <= 0) continue;
    const long id = std::stol(fields[0]);
    auto it = chain_index.find(id);
    if (it == chain_index.end()) it = chain_index.emplace(id, draws.add_chain()).first;

    DrawStats s;
    s.lp = parse_field(fields[2], kNaN);
    s.transition.accept_stat = parse_field(fields[3], kNaN);
    s.transition.step_size = parse_field(fields[4], kNaN);
    s.transition.n_steps = static_cast<int>(parse_field(fields[5], 0.0));
    s.transition.tree_depth = static_cast<int>(parse_field(fields[6], -1.0));
    s.transition.divergent = parse_field(fields[7], 0.0) != 0.0;
    s.transition.energy = parse_field(fields[8], kNaN);
    for (std::size_t k = 0; k < names.size(); ++k) {
      values(static_cast<Eigen::Index>(k)) = parse_field(fields[n_stats + k], kNaN);
    }
    draws.append(it->second, values, s);
  }
  return draws;
}

DrawMatrix read_draws_csv(const std::vector<std::filesystem::path>& files) {
  DrawMatrix all;
  for (const auto& path : files) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read '" + path.string() + "'");
    all.append_chains(read_draws_csv(in));
  }
  return all;
}

CompareRow compare_row(const RunRecord& record) {
  CompareRow row;
  row.algorithm = to_string(record.config.sampler.kind);
  row.parameterization = parameterization_of(record.model_name);
  row.parameter = record.slowest_parameter;
  double eps = 0.0;
  for (const auto& c : record.result.chains) eps += c.step_size;
  row.step_size = record.result.chains.empty() ? kNaN : eps / static_cast<double>(record.result.chains.size());
  row.accept = record.summary.mean_accept_stat;
  row.time = record.result.wall_time;
  row.time_per_ess = kNaN;
  row.ess_per_eval = kNaN;
  for (const auto& r : record.summary.rows) {
    if (r.name == row.parameter) {
      row.time_per_ess = r.time_per_ess;
      row.ess_per_eval = r.ess_per_eval;
    }
  }
  return row;
}

CompareRow compare_row(const nlohmann::json& record) {
  if (!record.contains("compare")) throw std::runtime_error("run record has no comparison entry");
  const auto& c = record.at("compare");
  CompareRow row;
  row.algorithm = c.at("algorithm").get<std::string>();
  row.parameterization = c.at("parameterization").get<std::string>();
  row.parameter = c.at("parameter").get<std::string>();
  row.step_size = json_number(c, "step_size");
  row.accept = json_number(c, "accept");
  row.time = json_number(c, "time");
  row.time_per_ess = json_number(c, "time_per_ess");
  row.ess_per_eval = json_number(c, "ess_per_eval");
  return row;
}

void print_compare_table(std::ostream& out, const std::vector<CompareRow>& rows) {
  out << std::left << std::setw(11) << "Algorithm" << std::setw(18) << "Parameterization" << std::right
      << std::setw(11) << "Step Size" << std::setw(9) << "Accept" << std::setw(11) << "Time (s)" << std::setw(14)
      << "Time/ESS (s)" << std::setw(13) << "ESS/eval" << "  Param\n";
  for (const auto& r : rows) {
    out << std::left << std::setw(11) << r.algorithm << std::setw(18) << r.parameterization << std::right
        << std::setw(11) << format_diagnostic(r.step_size, 3) << std::setw(9) << format_diagnostic(r.accept, 3)
        << std::setw(11) << format_diagnostic(r.time, 3) << std::setw(14) << format_diagnostic(r.time_per_ess, 3)
        << std::setw(13) << format_diagnostic(r.ess_per_eval, 3) << "  " << r.parameter << '\n';
  }
  out << "Time includes warmup and excludes output. ESS/eval counts density or gradient evaluations.\n";
}

void write_compare_csv(std::ostream& out, const std::vector<CompareRow>& rows) {
  out << "algorithm,parameterization,step_size,accept,time,time_per_ess,ess_per_eval,parameter\n";
  out << std::setprecision(17);
  for (const auto& r : rows) {
    out << r.algorithm << ',' << r.parameterization;
    for (double v : {r.step_size, r.accept, r.time, r.time_per_ess, r.ess_per_eval}) {
      out << ',';
      write_number(out, v);
    }
    out << ',' << r.parameter << '\n';
  }
}

}  // namespace hierhmc
