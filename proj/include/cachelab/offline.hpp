#pragma once

#include <cstdint>
#include <set>
#include <tuple>
#include <vector>

#include "cachelab/next_use.hpp"
#include "cachelab/policy.hpp"
#include "cachelab/random.hpp"
#include "cachelab/simulator.hpp"
#include "cachelab/trace.hpp"

namespace cachelab {

// Future-knowledge eviction: admit on miss, then while over capacity evict
// one of the `top_n` cached objects (the incoming one included) with the
// farthest next use, chosen uniformly. top_n == 1 is Belady's algorithm.
// Ranking ties: never-used-again beats any finite distance, then larger
// size, then older admission. Must be replayed over the trace it was built
// for, from its first request.
class RelaxedBeladyPolicy final : public CachePolicy {
 public:
  RelaxedBeladyPolicy(const Trace& trace, std::uint64_t capacity, std::size_t top_n = 1, std::uint64_t seed = 0);
  std::string name() const override;
  AccessOutcome access(const Request& request) override;
  std::uint64_t occupancy() const override { return bytes_; }
  std::size_t object_count() const override { return ranked_.size(); }
  bool contains(ObjectId id) const override { return id < cached_.size() && cached_[id]; }
  std::vector<CachedObject> contents() const override;

 private:
  // Larger key = evicted first.
  using Key = std::tuple<std::size_t, std::uint64_t, std::uint64_t, ObjectId>;
  Key key_of(ObjectId id) const;

  NextUseIndex next_use_;
  std::size_t top_n_;
  Rng rng_;
  std::size_t position_ = 0;
  std::uint64_t admissions_ = 0;
  std::uint64_t bytes_ = 0;
  std::set<Key> ranked_;
  std::vector<bool> cached_;
  std::vector<std::size_t> upcoming_;
  std::vector<std::uint64_t> size_;
  std::vector<std::uint64_t> admitted_at_;
};

// Evicts the cached object maximizing (distance to next use) x size, where
// an object never used again counts distance (trace length - position + 1).
// Ties: larger size, then older admission.
class BeladySizePolicy final : public CachePolicy {
 public:
  BeladySizePolicy(const Trace& trace, std::uint64_t capacity);
  std::string name() const override { return "belady-size"; }
  AccessOutcome access(const Request& request) override;
  std::uint64_t occupancy() const override { return bytes_; }
  std::size_t object_count() const override { return cached_ids_.size(); }
  bool contains(ObjectId id) const override { return id < slot_.size() && slot_[id] != kAbsent; }
  std::vector<CachedObject> contents() const override;

 private:
  static constexpr std::size_t kAbsent = static_cast<std::size_t>(-1);
  void remove(ObjectId id);

  NextUseIndex next_use_;
  std::size_t trace_length_;
  std::size_t position_ = 0;
  std::uint64_t admissions_ = 0;
  std::uint64_t bytes_ = 0;
  std::vector<ObjectId> cached_ids_;
  std::vector<std::size_t> slot_;
  std::vector<std::size_t> upcoming_;
  std::vector<std::uint64_t> size_;
  std::vector<std::uint64_t> admitted_at_;
};

SimulationReport belady(const Trace& trace, std::uint64_t capacity, const SimulationOptions& options = {});
SimulationReport belady_size(const Trace& trace, std::uint64_t capacity, const SimulationOptions& options = {});
SimulationReport relaxed_topn(const Trace& trace, std::uint64_t capacity, std::size_t n, std::uint64_t seed,
                              const SimulationOptions& options = {});

struct FlatRegionPoint {
  std::size_t n = 0;
  double mean_omr = 0.0;
  double min_omr = 0.0;
  double max_omr = 0.0;
  double stddev_omr = 0.0;
  int repeats = 0;
};

// Runs relaxed_topn `repeats` times per N with derived seeds and reports the
// OMR envelope. N == 1 is deterministic and runs once.
std::vector<FlatRegionPoint> flat_region_experiment(const Trace& trace, std::uint64_t capacity,
                                                    const std::vector<std::size_t>& n_values, int repeats,
                                                    std::uint64_t seed, std::uint64_t warmup = 0);

// `N,mean_omr,min_omr,max_omr` rows.
void write_flat_region_csv(const std::vector<FlatRegionPoint>& points, std::ostream& out);

struct MissBound {
  double omr = 0.0;
  double bmr = 0.0;
  std::uint64_t object_misses = 0;
  double byte_misses = 0.0;
  std::uint64_t requests = 0;
  std::uint64_t bytes_requested = 0;
};

// Interval relaxation lower bound (PFOO-L). Each pair of consecutive requests
// to a key is an interval whose cost is size x (positions spanned); the total
// budget is capacity x trace length. Intervals of objects larger than the
// capacity can never hit and are dropped.
//  - Object bound: intervals taken in ascending cost while the budget lasts.
//  - Byte bound: intervals taken in ascending length, the first one that does
//    not fit taken fractionally (fractional knapsack with value = size).
MissBound pfoo_l(const Trace& trace, std::uint64_t capacity);

enum class MissObjective { kObjectMisses, kByteMisses };

inline constexpr std::size_t kBruteForceMaxRequests = 14;
inline constexpr std::size_t kBruteForceMaxKeys = 6;

// Exact minimum misses (count or bytes) over every admit-then-evict choice
// sequence, the same decision model the online and offline policies use.
// Refuses (ConfigError) traces longer than 14 requests or with more than 6
// distinct keys.
std::uint64_t brute_force_optimal(const Trace& trace, std::uint64_t capacity, MissObjective objective);

}  // namespace cachelab
