#pragma once

#include <array>
#include <cstdint>
#include <limits>

#include "hierhmc/linalg.hpp"

namespace hierhmc {

/// Seeded pseudo-random stream.
///
/// The generator is xoshiro256** (Blackman & Vigna); its 256-bit state is
/// filled from a SplitMix64 sequence whose start is derived from
/// `(seed, stream)`, so equal pairs reproduce the same sequence on every
/// platform and different stream ids give decorrelated sequences. Uniforms
/// take the top 53 bits; normals use the Box-Muller transform and cache the
/// second variate of each pair.
///
/// A stream is single-owner state. Give every chain its own stream.
class RngStream {
 public:
  using result_type = std::uint64_t;

  RngStream(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()() { return next_u64(); }

  std::uint64_t next_u64();

  /// Uniform on the open interval (0, 1).
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double normal();
  double normal(double mean, double sd) { return mean + sd * normal(); }
  Vec normal_vector(Eigen::Index dim);

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::array<std::uint64_t, 4> s_{};
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

}  // namespace hierhmc
