#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cachelab/counters.hpp"
#include "cachelab/policy.hpp"
#include "cachelab/trace.hpp"

namespace cachelab {

struct EvictionRecord {
  // Index of the request whose processing caused the eviction.
  std::size_t position = 0;
  ObjectId id = kNoObject;

  friend bool operator==(const EvictionRecord&, const EvictionRecord&) = default;
};

struct SimulationOptions {
  // Leading requests that change cache state but are not counted.
  std::uint64_t warmup = 0;
  // When false, a trace holding an object larger than the capacity is a
  // configuration error instead of being served as uncached misses.
  bool bypass_oversized = true;
  bool record_evictions = true;
  // When non-zero, per-window counters over disjoint runs of this many
  // requests (warmup requests included, last partial window kept).
  std::uint64_t window = 0;
};

struct SimulationReport {
  std::string policy;
  std::uint64_t capacity = 0;
  // Post-warmup tallies.
  Counters counters;
  // Post-warmup evictions.
  std::vector<EvictionRecord> eviction_log;
  std::vector<Counters> windows;
  double wall_seconds = 0.0;
  std::optional<std::uint64_t> peak_rss_bytes;
};

// Replays the trace through the policy, starting from its current state.
SimulationReport simulate(CachePolicy& policy, const Trace& trace, const SimulationOptions& options = {});

// Validates the capacity against the trace per the bypass setting.
void check_capacity(const Trace& trace, std::uint64_t capacity, bool bypass_oversized);

// High-water resident set size of this process, when the OS reports it.
std::optional<std::uint64_t> peak_rss_bytes();

}  // namespace cachelab
