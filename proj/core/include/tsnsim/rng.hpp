#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <string_view>

namespace tsnsim {

/// Portable xoshiro256** generator. Each component owns one stream keyed by
/// (seed, stream name), so adding a component never shifts another's draws.
/// Distribution transforms are implemented here instead of <random> because
/// the standard distributions are implementation-defined.
class Rng {
 public:
  using result_type = std::uint64_t;

  Rng(std::uint64_t seed, std::string_view stream);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()() { return next_u64(); }

  std::uint64_t next_u64();
  /// Uniform in [0, 1) with 53 bits of resolution.
  double uniform01();
  /// Uniform integer in [lo, hi], inclusive; unbiased.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);
  double normal(double mean, double stddev);
  double exponential(double mean);
  /// Log-normal parameterised by the mean and stddev of the variate itself.
  double lognormal_from_moments(double mean, double stddev);
  bool bernoulli(double p);

  /// Deterministic seed derivation for retries and sub-runs.
  static std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t salt);
  static std::uint64_t hash_name(std::string_view name);

 private:
  std::array<std::uint64_t, 4> s_{};
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace tsnsim
