#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <variant>

#include "cachelab/kv_config.hpp"
#include "cachelab/trace.hpp"

namespace cachelab {

struct LogNormalSizes {
  double mu = 9.0;  // of ln(bytes)
  double sigma = 1.5;
};

struct TwoClassSizes {
  std::uint64_t small_bytes = 1 << 10;
  std::uint64_t large_bytes = 1 << 20;
  double large_fraction = 0.1;
};

using SizeModel = std::variant<LogNormalSizes, TwoClassSizes>;

// Zipf-popularity workload with a 24-hour sinusoidal request rate.
struct SyntheticConfig {
  std::uint64_t object_count = 10000;
  double zipf_exponent = 0.8;
  SizeModel size_model = LogNormalSizes{};
  std::uint64_t requests_per_day = 100000;
  std::uint64_t days = 1;
  // Relative swing of the hourly request rate, in [0, 1).
  double diurnal_amplitude = 0.0;
  std::uint64_t seed = 1;

  // Throws ConfigError when a field is out of range.
  void validate() const;

  // Keys: object_count, zipf_exponent, size_model (lognormal|two_class),
  // size_mu, size_sigma, small_bytes, large_bytes, large_fraction,
  // requests_per_day, days, diurnal_amplitude, seed.
  static SyntheticConfig from_config(const KeyValueConfig& kv);
  static SyntheticConfig load(const std::filesystem::path& path);
};

// Hour of the daily rate peak; the trough is twelve hours later.
inline constexpr int kDiurnalPeakHour = 16;

// Relative request rate of each hour of the day; sums to 24.
std::array<double, 24> diurnal_profile(double amplitude);

// Keys are decimal popularity ranks starting at 0. Deterministic in the
// config, including the seed.
Trace generate_synthetic(const SyntheticConfig& config);

}  // namespace cachelab
