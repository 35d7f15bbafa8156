#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "hierhmc/models.hpp"

namespace hierhmc {

void OneWayNormalData::validate() const {
  if (y.empty()) throw ModelError("one-way normal data: J must be at least 1");
  if (y.size() != sigma.size()) {
    throw ModelError("one-way normal data: y and sigma lengths differ");
  }
  for (double s : sigma) {
    if (!(s > 0.0) || !std::isfinite(s)) throw ModelError("one-way normal data: sigma must be positive");
  }
  for (double v : y) {
    if (!std::isfinite(v)) throw ModelError("one-way normal data: y must be finite");
  }
}

OneWayNormalData generate_pseudodata(double mu, double tau, double sigma, int groups, RngStream& rng) {
  if (groups < 1) throw ModelError("generate_pseudodata: J must be at least 1");
  if (tau < 0.0) throw ModelError("generate_pseudodata: tau must be non-negative");
  if (!(sigma > 0.0)) throw ModelError("generate_pseudodata: sigma must be positive");
  OneWayNormalData data;
  data.y.reserve(static_cast<std::size_t>(groups));
  data.sigma.assign(static_cast<std::size_t>(groups), sigma);
  for (int i = 0; i < groups; ++i) {
    const double theta = tau == 0.0 ? mu : rng.normal(mu, tau);
    data.y.push_back(rng.normal(theta, sigma));
  }
  return data;
}

namespace {

void write_row(std::ostream& out, const char* key, const std::vector<double>& values) {
  out << key;
  for (std::size_t i = 0; i < values.size(); ++i) {
    out << ((i % 8 == 0 && i > 0) ? "\n " : " ") << values[i];
  }
  out << '\n';
}

OneWayNormalData parse_text(std::istream& in, const std::string& origin) {
  OneWayNormalData data;
  long declared = -1;
  std::vector<double>* target = nullptr;
  std::string token;
  while (in >> token) {
    if (token == "J") {
      if (!(in >> declared)) throw ModelError(origin + ": malformed value for key 'J'");
      target = nullptr;
    } else if (token == "y") {
      target = &data.y;
    } else if (token == "sigma") {
      target = &data.sigma;
    } else {
      if (!target) throw ModelError(origin + ": unexpected token '" + token + "'");
      std::size_t used = 0;
      double value = 0.0;
      try {
        value = std::stod(token, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != token.size()) throw ModelError(origin + ": unknown key or bad number '" + token + "'");
      target->push_back(value);
    }
  }
  if (declared < 0) throw ModelError(origin + ": missing key 'J'");
  if (static_cast<long>(data.y.size()) != declared) {
    throw ModelError(origin + ": expected " + std::to_string(declared) + " values for 'y'");
  }
  if (static_cast<long>(data.sigma.size()) != declared) {
    throw ModelError(origin + ": expected " + std::to_string(declared) + " values for 'sigma'");
  }
  return data;
}

}  // namespace

void write_dataset_text(const OneWayNormalData& data, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write dataset " + path.string());
  out << std::setprecision(17);
  out << "J " << data.groups() << '\n';
  write_row(out, "y", data.y);
  write_row(out, "sigma", data.sigma);
}

void write_dataset_json(const OneWayNormalData& data, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write dataset " + path.string());
  nlohmann::json j;
  j["J"] = data.groups();
  j["y"] = data.y;
  j["sigma"] = data.sigma;
  out << j.dump(2) << '\n';
}

OneWayNormalData read_dataset(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read dataset " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  const auto first = text.find_first_not_of(" \t\r\n");

  OneWayNormalData data;
  if (first != std::string::npos && text[first] == '{') {
    try {
      const auto j = nlohmann::json::parse(text);
      data.y = j.at("y").get<std::vector<double>>();
      data.sigma = j.at("sigma").get<std::vector<double>>();
      if (j.at("J").get<long>() != static_cast<long>(data.y.size())) {
        throw ModelError(path.string() + ": 'J' disagrees with length of 'y'");
      }
    } catch (const nlohmann::json::exception& e) {
      throw ModelError(path.string() + ": " + e.what());
    }
  } else {
    std::istringstream stream(text);
    data = parse_text(stream, path.string());
  }
  data.validate();
  return data;
}

}  // namespace hierhmc
