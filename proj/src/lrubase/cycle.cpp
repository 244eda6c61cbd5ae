#include <algorithm>
#include <cmath>

#include "cachelab/error.hpp"
#include "cachelab/log.hpp"
#include "cachelab/lrubase/lrubase.hpp"
#include "cachelab/metrics.hpp"
#include "cachelab/policies.hpp"
#include "cachelab/random.hpp"

namespace cachelab {

Counters DayCycleReport::day_counters(std::int64_t day) const {
  Counters c;
  for (const auto& r : regions) {
    if (r.day == day) c += r.counters;
  }
  return c;
}

std::size_t resolve_rear_n(const Trace& prefix, std::uint64_t capacity, const LruBaseConfig& config) {
  if (config.rear_n > 0) return config.rear_n;
  if (prefix.empty()) return config.min_rear_n;
  double fraction = config.rear_fraction;
  if (fraction <= 0.0) {
    try {
      fraction = rear_fraction(eviction_position_ecdf(prefix, capacity), config.rear_quantile);
    } catch (const Error&) {
      fraction = 0.0;  // no replacements in the prefix
    }
  }
  LruPolicy lru(capacity);
  double queue_sum = 0.0;
  for (const auto& r : prefix.requests()) {
    lru.access(r);
    queue_sum += static_cast<double>(lru.object_count());
  }
  const double mean_queue = queue_sum / static_cast<double>(prefix.size());
  const auto n = static_cast<std::size_t>(std::llround(fraction * mean_queue));
  return std::clamp(n, config.min_rear_n, config.max_rear_n);
}

DayCycleReport run_day_cycle(const Trace& trace, std::uint64_t capacity, const LruBaseConfig& input_config,
                             const DayCycleOptions& options) {
  input_config.validate();
  check_capacity(trace, capacity, true);
  const auto& schedule = input_config.schedule;
  const auto reqs = trace.requests();
  DayCycleReport report;
  if (reqs.empty()) return report;

  // N is frozen from the data seen before the first training run: up to the
  // end of the first complete region.
  const auto first_instance = schedule.instance_of(reqs.front().timestamp);
  const auto prefix_end_time = schedule.instance_start(first_instance + 2);
  const auto prefix_len = static_cast<std::size_t>(
      std::lower_bound(reqs.begin(), reqs.end(), prefix_end_time,
                       [](const Request& r, std::int64_t t) { return r.timestamp < t; }) -
      reqs.begin());
  LruBaseConfig config = input_config;
  config.rear_n = resolve_rear_n(trace.slice(0, prefix_len), capacity, input_config);
  report.rear_n = config.rear_n;

  LruBaseCache cache(capacity, config.rear_n, config.top_t, config.warm_replacements);
  std::shared_ptr<const agent::QPolicy> latest;
  Counters window_counters;

  std::size_t begin = 0;
  while (begin < reqs.size()) {
    const auto instance = schedule.instance_of(reqs[begin].timestamp);
    const auto next_start = schedule.instance_start(instance + 1);
    std::size_t end = begin;
    while (end < reqs.size() && reqs[end].timestamp < next_start) ++end;

    RegionReport region;
    region.instance = instance;
    region.day = schedule.day_of_instance(instance);
    region.region = schedule.region_of_instance(instance);
    std::shared_ptr<const agent::QPolicy> decider;
    if (config.agent_enabled) {
      const auto it = report.trained.find(instance - schedule.regions_per_day());
      if (it != report.trained.end()) decider = it->second;
    }
    region.decider_present = decider != nullptr;
    region.decider_generation = decider ? decider->generation : 0;

    // Handoff: the first request of a region is served without a decider.
    cache.set_decider(nullptr);
    const auto agent_before = cache.stats().agent_evictions;
    for (std::size_t i = begin; i < end; ++i) {
      if (i == begin + 1 && decider) cache.set_decider(decider);
      const auto& r = reqs[i];
      const auto outcome = cache.access(r);
      region.counters.record(r.size, outcome.hit);
      if (i >= options.warmup) {
        report.counters.record(r.size, outcome.hit);
        if (options.record_evictions) {
          for (const auto id : outcome.evicted) report.eviction_log.push_back({i, id});
        }
      }
      if (options.window > 0) {
        window_counters.record(r.size, outcome.hit);
        if (window_counters.requests == options.window) {
          report.windows.push_back(window_counters);
          window_counters = {};
        }
      }
    }
    if (end - begin == 1 && decider) cache.set_decider(decider);
    region.agent_evictions = cache.stats().agent_evictions - agent_before;

    // A region is trained once it is known to be complete: it started after
    // the trace did and the trace continues past its end.
    const bool complete = instance != first_instance && end < reqs.size();
    if (config.agent_enabled && complete) {
      const auto window = trace.slice(begin, end);
      auto trained = train_region(window, capacity, latest.get(), config,
                                  derive_seed(config.seed, static_cast<std::uint64_t>(instance)));
      region.train_seconds = trained.seconds;
      region.training_requests = trained.training_requests;
      if (trained.policy) {
        latest = std::make_shared<const agent::QPolicy>(std::move(*trained.policy));
        report.trained[instance] = latest;
      }
    }
    report.regions.push_back(region);
    begin = end;
  }
  if (window_counters.requests > 0) report.windows.push_back(window_counters);
  report.stats = cache.stats();
  return report;
}

}  // namespace cachelab
