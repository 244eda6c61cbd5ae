#include "cachelab/lrubase/schedule.hpp"

#include <string>

#include "cachelab/error.hpp"

namespace cachelab {

namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  const std::int64_t q = a / b;
  return (a % b != 0 && ((a < 0) != (b < 0))) ? q - 1 : q;
}

}  // namespace

void TimeRegionSchedule::validate() const {
  if (span_hours <= 0 || span_hours > 24 || 24 % span_hours != 0) {
    throw ConfigError("time span must divide 24 hours, got " + std::to_string(span_hours));
  }
  if (begin_hour < 0 || begin_hour >= 24) {
    throw ConfigError("begin hour must be in [0, 24), got " + std::to_string(begin_hour));
  }
}

std::int64_t TimeRegionSchedule::instance_of(std::int64_t timestamp) const {
  return floor_div(timestamp - begin_hour * kSecondsPerHour, span_seconds());
}

std::int64_t TimeRegionSchedule::instance_start(std::int64_t instance) const {
  return begin_hour * kSecondsPerHour + instance * span_seconds();
}

std::int64_t TimeRegionSchedule::day_of_instance(std::int64_t instance) const {
  return floor_div(instance, regions_per_day());
}

int TimeRegionSchedule::region_of_instance(std::int64_t instance) const {
  return static_cast<int>(instance - day_of_instance(instance) * regions_per_day());
}

int TimeRegionSchedule::region_of(std::int64_t timestamp) const { return region_of_instance(instance_of(timestamp)); }

TimeRegionSchedule TimeRegionSchedule::from_config(const KeyValueConfig& kv, const std::string& prefix) {
  TimeRegionSchedule s;
  s.span_hours = static_cast<int>(kv.get_int(prefix + "span_hours", s.span_hours));
  s.begin_hour = static_cast<int>(kv.get_int(prefix + "begin_hour", s.begin_hour));
  s.validate();
  return s;
}

}  // namespace cachelab
