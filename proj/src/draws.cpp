#include "hierhmc/draws.hpp"

#include <algorithm>
#include <stdexcept>

namespace hierhmc {

std::size_t DrawMatrix::draws() const {
  if (chains_.empty()) return 0;
  const std::size_t n = chains_.front().stats.size();
  for (const auto& chain : chains_) {
    if (chain.stats.size() != n) throw std::logic_error("DrawMatrix: chains have different lengths");
  }
  return n;
}

std::size_t DrawMatrix::total_draws() const {
  std::size_t total = 0;
  for (const auto& chain : chains_) total += chain.stats.size();
  return total;
}

std::size_t DrawMatrix::add_chain() {
  chains_.emplace_back();
  return chains_.size() - 1;
}

void DrawMatrix::append(std::size_t chain, const Vec& values, const DrawStats& stats) {
  if (static_cast<std::size_t>(values.size()) != dim()) {
    throw std::invalid_argument("DrawMatrix: draw has " + std::to_string(values.size()) +
                                " values, expected " + std::to_string(dim()));
  }
  auto& c = chains_.at(chain);
  c.values.insert(c.values.end(), values.data(), values.data() + values.size());
  c.stats.push_back(stats);
}

void DrawMatrix::append_chains(const DrawMatrix& other) {
  if (names_.empty() && chains_.empty()) names_ = other.names_;
  if (other.names_ != names_) throw std::invalid_argument("DrawMatrix: parameter names differ");
  chains_.insert(chains_.end(), other.chains_.begin(), other.chains_.end());
}

std::optional<std::size_t> DrawMatrix::index_of(std::string_view name) const {
  const auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - names_.begin());
}

ChainSamples DrawMatrix::parameter(std::size_t param) const {
  if (param >= dim()) throw std::out_of_range("DrawMatrix: parameter index out of range");
  ChainSamples out(chains_.size());
  for (std::size_t c = 0; c < chains_.size(); ++c) {
    const std::size_t n = chains_[c].stats.size();
    out[c].resize(n);
    for (std::size_t i = 0; i < n; ++i) out[c][i] = chains_[c].values[i * dim() + param];
  }
  return out;
}

ChainSamples DrawMatrix::parameter(std::string_view name) const {
  const auto index = index_of(name);
  if (!index) throw std::out_of_range("DrawMatrix: no parameter named '" + std::string(name) + "'");
  return parameter(*index);
}

long DrawMatrix::divergent_count() const {
  long count = 0;
  for (const auto& chain : chains_) {
    for (const auto& s : chain.stats) count += s.transition.divergent ? 1 : 0;
  }
  return count;
}

long DrawMatrix::total_evals() const {
  long total = 0;
  for (const auto& chain : chains_) {
    for (const auto& s : chain.stats) total += s.transition.n_evals;
  }
  return total;
}

double DrawMatrix::mean_accept_stat() const {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& chain : chains_) {
    for (const auto& s : chain.stats) {
      sum += s.transition.accept_stat;
      ++n;
    }
  }
  return n == 0 ? std::numeric_limits<double>::quiet_NaN() : sum / static_cast<double>(n);
}

}  // namespace hierhmc
