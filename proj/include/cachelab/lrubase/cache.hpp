#pragma once

#include <memory>
#include <mutex>
#include <vector>

#include "cachelab/agent/features.hpp"
#include "cachelab/agent/qnetwork.hpp"
#include "cachelab/lru_list.hpp"
#include "cachelab/policy.hpp"

namespace cachelab {

inline constexpr std::uint64_t kDefaultWarmReplacements = 1000;
// Agent rounds per miss before the LRU tail finishes the eviction.
inline constexpr int kMaxAgentRounds = 3;

// Ranks rear-section indices for eviction, best candidate first.
class EvictionAdvisor {
 public:
  virtual ~EvictionAdvisor() = default;
  virtual std::vector<std::size_t> rank(const agent::RearSectionState& state) = 0;
};

// Top-T indices of a published policy's scores.
class PolicyAdvisor final : public EvictionAdvisor {
 public:
  PolicyAdvisor(std::shared_ptr<const agent::QPolicy> policy, std::size_t top_t);
  std::vector<std::size_t> rank(const agent::RearSectionState& state) override;
  const std::shared_ptr<const agent::QPolicy>& policy() const { return policy_; }

 private:
  std::shared_ptr<const agent::QPolicy> policy_;
  std::size_t top_t_;
};

struct LruBaseStats {
  std::uint64_t lru_replacements = 0;
  std::uint64_t agent_rounds = 0;
  std::uint64_t agent_evictions = 0;
  // Evictions the LRU tail made after kMaxAgentRounds agent rounds.
  std::uint64_t guard_evictions = 0;
};

// LRU queue whose miss-time victims come from an advisor looking at the N
// tail-most objects. Without an advisor, or until `warm_replacements` LRU
// evictions have happened, it is exactly LRU.
class LruBaseCache final : public CachePolicy {
 public:
  LruBaseCache(std::uint64_t capacity, std::size_t rear_n, std::size_t top_t = 1,
               std::uint64_t warm_replacements = kDefaultWarmReplacements);

  std::string name() const override { return "lru-base"; }
  AccessOutcome access(const Request& request) override;
  std::uint64_t occupancy() const override { return queue_.bytes(); }
  std::size_t object_count() const override { return queue_.size(); }
  bool contains(ObjectId id) const override { return queue_.contains(id); }
  std::vector<CachedObject> contents() const override;

  // Publishes a trained policy (nullptr clears it). Swaps are atomic with
  // respect to access().
  void set_decider(std::shared_ptr<const agent::QPolicy> policy);
  std::shared_ptr<const agent::QPolicy> decider() const;
  // Non-owning advisor that takes precedence over the decider; used by the
  // trainer and by tests.
  void set_advisor(EvictionAdvisor* advisor);

  bool agent_ready() const;
  std::size_t rear_n() const { return rear_n_; }
  std::size_t top_t() const { return top_t_; }
  const LruBaseStats& stats() const { return stats_; }
  const LruList& queue() const { return queue_; }
  // Rear section as the advisor would see it now, excluding `skip`.
  agent::RearSectionState rear_state(ObjectId skip = kNoObject) const;

 private:
  void touch(const Request& request);
  bool over_capacity() const { return queue_.bytes() > capacity(); }
  void evict(ObjectId id, AccessOutcome& out);

  LruList queue_;
  std::vector<agent::ObjectStats> objects_;
  std::size_t rear_n_;
  std::size_t top_t_;
  std::uint64_t warm_replacements_;
  agent::Clock clock_;
  LruBaseStats stats_;

  mutable std::mutex decider_mutex_;
  std::shared_ptr<PolicyAdvisor> decider_;
  EvictionAdvisor* advisor_ = nullptr;
};

}  // namespace cachelab
