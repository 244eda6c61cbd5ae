#pragma once

#include <array>
#include <cstdint>
#include <set>
#include <tuple>
#include <vector>

#include "cachelab/lru_list.hpp"
#include "cachelab/policy.hpp"

namespace cachelab {

// Promote on hit, evict the queue tail.
class LruPolicy : public CachePolicy {
 public:
  explicit LruPolicy(std::uint64_t capacity) : CachePolicy(capacity) {}
  std::string name() const override { return "lru"; }
  AccessOutcome access(const Request& request) override;
  std::uint64_t occupancy() const override { return queue_.bytes(); }
  std::size_t object_count() const override { return queue_.size(); }
  bool contains(ObjectId id) const override { return queue_.contains(id); }
  std::vector<CachedObject> contents() const override;

  const LruList& queue() const { return queue_; }

 protected:
  LruList queue_;
};

// Insertion order only; hits do not reorder.
class FifoPolicy final : public LruPolicy {
 public:
  using LruPolicy::LruPolicy;
  std::string name() const override { return "fifo"; }
  AccessOutcome access(const Request& request) override;
};

// LRU that never admits objects larger than the threshold.
class ThresholdLruPolicy final : public LruPolicy {
 public:
  ThresholdLruPolicy(std::uint64_t capacity, std::uint64_t threshold_bytes);
  std::string name() const override { return "thlru"; }
  AccessOutcome access(const Request& request) override;
  std::uint64_t threshold() const { return threshold_; }

 private:
  std::uint64_t threshold_;
};

// Segmented LRU with equal byte budgets per segment (the first segment also
// takes the division remainder). Misses enter segment 0; a hit moves the
// object to the head of the next higher segment; overflow demotes tails one
// segment down and segment 0 overflow is evicted. Objects larger than one
// segment are not admitted.
class SegmentedLruPolicy final : public CachePolicy {
 public:
  SegmentedLruPolicy(std::uint64_t capacity, int segments);
  std::string name() const override;
  AccessOutcome access(const Request& request) override;
  std::uint64_t occupancy() const override;
  std::size_t object_count() const override;
  bool contains(ObjectId id) const override;
  std::vector<CachedObject> contents() const override;

  int segments() const { return static_cast<int>(segments_.size()); }
  // -1 when not cached.
  int segment_of(ObjectId id) const;
  const LruList& segment(int i) const { return segments_[i]; }
  std::uint64_t segment_capacity(int i) const { return budgets_[i]; }

 private:
  void rebalance_from(int level, AccessOutcome& out);

  std::vector<LruList> segments_;
  std::vector<std::uint64_t> budgets_;
};

// Shared machinery for policies that evict the minimum of a per-object
// priority; equal priorities evict the least recently used object.
class PriorityPolicy : public CachePolicy {
 public:
  using CachePolicy::CachePolicy;
  AccessOutcome access(const Request& request) override;
  std::uint64_t occupancy() const override { return bytes_; }
  std::size_t object_count() const override { return order_.size(); }
  bool contains(ObjectId id) const override { return id < meta_.size() && meta_[id].cached; }
  std::vector<CachedObject> contents() const override;

  // Current priority of a cached object.
  double priority_of(ObjectId id) const { return meta_[id].priority; }

 protected:
  struct Meta {
    bool cached = false;
    std::uint64_t size = 0;
    std::uint64_t frequency = 0;
    std::uint64_t last_tick = 0;
    double priority = 0.0;
    // LRU-K access history (most recent last), bounded to k entries.
    std::vector<std::uint64_t> history;
  };

  // Recomputes meta.priority after an access (frequency/ticks updated).
  virtual void reprioritize(Meta& meta) = 0;
  // Called with the victim before it leaves the cache.
  virtual void on_evict(const Meta& /*victim*/) {}

 private:
  using Key = std::tuple<double, std::uint64_t, ObjectId>;
  Key key_of(ObjectId id) const { return {meta_[id].priority, meta_[id].last_tick, id}; }

  std::set<Key> order_;
  std::vector<Meta> meta_;
  std::uint64_t bytes_ = 0;
  std::uint64_t tick_ = 0;
};

// LFU with dynamic aging: priority = frequency + age; age takes the victim's
// priority on every eviction.
class LfudaPolicy final : public PriorityPolicy {
 public:
  using PriorityPolicy::PriorityPolicy;
  std::string name() const override { return "lfuda"; }
  double age() const { return age_; }

 protected:
  void reprioritize(Meta& meta) override { meta.priority = age_ + static_cast<double>(meta.frequency); }
  void on_evict(const Meta& victim) override { age_ = victim.priority; }

 private:
  double age_ = 0.0;
};

// Greedy-Dual-Size-Frequency: priority = clock + frequency / size; clock takes
// the victim's priority on every eviction.
class GdsfPolicy final : public PriorityPolicy {
 public:
  using PriorityPolicy::PriorityPolicy;
  std::string name() const override { return "gdsf"; }
  double clock() const { return clock_; }

 protected:
  void reprioritize(Meta& meta) override {
    meta.priority = clock_ + static_cast<double>(meta.frequency) / static_cast<double>(meta.size);
  }
  void on_evict(const Meta& victim) override { clock_ = victim.priority; }

 private:
  double clock_ = 0.0;
};

// LRU-K: objects with fewer than k recorded accesses go first (LRU among
// them); otherwise the oldest k-th most recent access is evicted. History is
// kept only while an object is cached.
class LruKPolicy final : public PriorityPolicy {
 public:
  LruKPolicy(std::uint64_t capacity, int k);
  std::string name() const override { return "lruk"; }
  int k() const { return k_; }

 protected:
  void reprioritize(Meta& meta) override;

 private:
  int k_;
};

PolicyPtr make_lru(std::uint64_t capacity);
PolicyPtr make_fifo(std::uint64_t capacity);
PolicyPtr make_s4lru(std::uint64_t capacity, int segments = 4);
PolicyPtr make_lfuda(std::uint64_t capacity);
PolicyPtr make_lruk(std::uint64_t capacity, int k = 2);
PolicyPtr make_gdsf(std::uint64_t capacity);
PolicyPtr make_thlru(std::uint64_t capacity, std::uint64_t threshold_bytes);

}  // namespace cachelab
