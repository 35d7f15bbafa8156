#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hierhmc/chain.hpp"
#include "hierhmc/linalg.hpp"

namespace hierhmc {

/// Draws of one parameter: outer index chain, inner index iteration.
using ChainSamples = std::vector<std::vector<double>>;

/// Sampler bookkeeping attached to each draw.
struct DrawStats {
  double lp = 0.0;
  TransitionStats transition;
};

/// Ordered draws from one or more chains plus per-draw sampler statistics.
class DrawMatrix {
 public:
  DrawMatrix() = default;
  explicit DrawMatrix(std::vector<std::string> names) : names_(std::move(names)) {}

  const std::vector<std::string>& names() const { return names_; }
  std::size_t dim() const { return names_.size(); }
  std::size_t chains() const { return chains_.size(); }
  /// Draws per chain; throws std::logic_error if chains differ in length.
  std::size_t draws() const;
  std::size_t total_draws() const;
  bool empty() const { return total_draws() == 0; }

  /// Starts a new chain and returns its index.
  std::size_t add_chain();
  void append(std::size_t chain, const Vec& values, const DrawStats& stats);
  /// Appends every chain of `other`, which must have the same names.
  void append_chains(const DrawMatrix& other);

  double value(std::size_t chain, std::size_t draw, std::size_t param) const {
    return chains_[chain].values[draw * dim() + param];
  }
  const DrawStats& stats(std::size_t chain, std::size_t draw) const { return chains_[chain].stats[draw]; }
  std::size_t chain_length(std::size_t chain) const { return chains_[chain].stats.size(); }

  std::optional<std::size_t> index_of(std::string_view name) const;
  ChainSamples parameter(std::size_t param) const;
  /// Throws std::out_of_range for an unknown name.
  ChainSamples parameter(std::string_view name) const;

  long divergent_count() const;
  long total_evals() const;
  double mean_accept_stat() const;

 private:
  struct Chain {
    std::vector<double> values;
    std::vector<DrawStats> stats;
  };
  std::vector<std::string> names_;
  std::vector<Chain> chains_;
};

}  // namespace hierhmc
