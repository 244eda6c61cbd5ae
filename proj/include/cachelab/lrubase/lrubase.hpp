#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "cachelab/agent/dqn.hpp"
#include "cachelab/agent/reward.hpp"
#include "cachelab/counters.hpp"
#include "cachelab/kv_config.hpp"
#include "cachelab/lrubase/cache.hpp"
#include "cachelab/lrubase/schedule.hpp"
#include "cachelab/simulator.hpp"
#include "cachelab/trace.hpp"

namespace cachelab {

struct LruBaseConfig {
  // Explicit rear-section size; 0 derives it from rear_fraction.
  std::size_t rear_n = 0;
  // Share of the average warmup queue length; 0 measures it as the
  // rear_quantile of the Belady-victim position distribution under LRU.
  double rear_fraction = 0.0;
  double rear_quantile = 0.999;
  std::size_t min_rear_n = 4;
  std::size_t max_rear_n = 64;
  std::uint64_t warm_replacements = kDefaultWarmReplacements;
  std::size_t top_t = 1;
  std::size_t hidden = agent::kDefaultHiddenUnits;
  // Passes over each region's training set.
  std::size_t epochs = 1;
  double sampling_rate = 0.01;
  agent::RewardParams reward;
  agent::DqnConfig dqn;
  TimeRegionSchedule schedule;
  // false runs the same machinery as plain LRU.
  bool agent_enabled = true;
  std::uint64_t seed = 1;

  void validate() const;
  // Keys under `lrubase.`: rear_n, rear_fraction, rear_quantile, min_rear_n,
  // max_rear_n, warm_replacements, top_t, hidden, epochs, sampling_rate,
  // alpha, beta, gamma, span_hours, begin_hour, agent_enabled, seed and the
  // DQN settings (replay_capacity, batch_size, discount, epsilon_start,
  // epsilon_end, exploration_fraction, target_sync, learning_rate,
  // train_every).
  static LruBaseConfig from_config(const KeyValueConfig& config);
};

// Min-max bounds of the log-scaled features over a request sequence.
agent::FeatureScaling feature_scaling_for(const Trace& records);

struct RegionTraining {
  // Absent only when there was neither data nor an initial policy.
  std::optional<agent::QPolicy> policy;
  std::size_t training_requests = 0;
  std::uint64_t scaled_capacity = 0;
  std::size_t decisions = 0;
  std::size_t stored_transitions = 0;
  std::size_t gradient_steps = 0;
  double seconds = 0.0;
};

// Trains a policy on a sample of `window` replayed through a scaled-down
// LRU-BaSE cache. Starts from `initial` when given (inheriting its feature
// scaling), otherwise from a seeded random network.
RegionTraining train_region(const Trace& window, std::uint64_t capacity, const agent::QPolicy* initial,
                            const LruBaseConfig& config, std::uint64_t seed);

struct RegionReport {
  std::int64_t instance = 0;
  std::int64_t day = 0;
  int region = 0;
  bool decider_present = false;
  std::uint64_t decider_generation = 0;
  Counters counters;
  std::uint64_t agent_evictions = 0;
  // Training run started at the end of this region, if any.
  double train_seconds = 0.0;
  std::size_t training_requests = 0;
};

struct DayCycleOptions {
  std::uint64_t warmup = 0;
  std::uint64_t window = 0;
  bool record_evictions = false;
};

struct DayCycleReport {
  std::size_t rear_n = 0;
  std::vector<RegionReport> regions;
  // Post-warmup totals.
  Counters counters;
  std::vector<EvictionRecord> eviction_log;
  std::vector<Counters> windows;
  LruBaseStats stats;
  std::map<std::int64_t, std::shared_ptr<const agent::QPolicy>> trained;

  // Sum of region counters for one schedule day.
  Counters day_counters(std::int64_t day) const;
};

// Rear-section size used by run_day_cycle for this trace prefix.
std::size_t resolve_rear_n(const Trace& warmup_prefix, std::uint64_t capacity, const LruBaseConfig& config);

// Replays the trace through one LRU-BaSE cache on simulated time. At each
// region boundary the decider is cleared for one request, then set to the
// policy trained on the same region one day earlier; the region that just
// ended is trained, starting from the most recent trained policy.
DayCycleReport run_day_cycle(const Trace& trace, std::uint64_t capacity, const LruBaseConfig& config,
                             const DayCycleOptions& options = {});

}  // namespace cachelab
