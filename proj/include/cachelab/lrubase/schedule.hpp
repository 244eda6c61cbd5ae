#pragma once

#include <cstdint>

#include "cachelab/kv_config.hpp"

namespace cachelab {

inline constexpr std::int64_t kSecondsPerHour = 3600;
inline constexpr std::int64_t kSecondsPerDay = 24 * kSecondsPerHour;

// Splits each trace-local day (timestamp 0 is midnight) into equal regions
// starting at begin_hour.
struct TimeRegionSchedule {
  int span_hours = 6;
  int begin_hour = 2;

  // Throws ConfigError unless span divides 24 and begin_hour is in [0, 24).
  void validate() const;
  int regions_per_day() const { return 24 / span_hours; }
  std::int64_t span_seconds() const { return span_hours * kSecondsPerHour; }

  // Region id in [0, regions_per_day()).
  int region_of(std::int64_t timestamp) const;
  // Consecutive region occurrences; instance 0 starts at begin_hour of day 0.
  std::int64_t instance_of(std::int64_t timestamp) const;
  std::int64_t instance_start(std::int64_t instance) const;
  std::int64_t day_of_instance(std::int64_t instance) const;
  int region_of_instance(std::int64_t instance) const;

  static TimeRegionSchedule from_config(const KeyValueConfig& config, const std::string& prefix);
};

}  // namespace cachelab
