#include "cachelab/lrubase/cache.hpp"

#include "cachelab/agent/actions.hpp"
#include "cachelab/error.hpp"

namespace cachelab {

PolicyAdvisor::PolicyAdvisor(std::shared_ptr<const agent::QPolicy> policy, std::size_t top_t)
    : policy_(std::move(policy)), top_t_(top_t) {
  if (!policy_) throw ConfigError("PolicyAdvisor: null policy");
  if (top_t_ == 0) throw ConfigError("top_T must be at least 1");
}

std::vector<std::size_t> PolicyAdvisor::rank(const agent::RearSectionState& state) {
  return agent::top_t_actions(agent::forward(*policy_, state), top_t_);
}

LruBaseCache::LruBaseCache(std::uint64_t capacity, std::size_t rear_n, std::size_t top_t,
                           std::uint64_t warm_replacements)
    : CachePolicy(capacity), rear_n_(rear_n), top_t_(top_t), warm_replacements_(warm_replacements) {
  if (rear_n == 0) throw ConfigError("lru-base: rear section size N must be at least 1");
  if (top_t == 0) throw ConfigError("lru-base: top_T must be at least 1");
}

std::vector<CachedObject> LruBaseCache::contents() const { return {queue_.rbegin(), queue_.rend()}; }

void LruBaseCache::set_decider(std::shared_ptr<const agent::QPolicy> policy) {
  std::shared_ptr<PolicyAdvisor> next;
  if (policy) {
    if (policy->rear_n != rear_n_) {
      throw ConfigError("lru-base: policy has N=" + std::to_string(policy->rear_n) + ", cache uses N=" +
                        std::to_string(rear_n_));
    }
    next = std::make_shared<PolicyAdvisor>(std::move(policy), top_t_);
  }
  std::lock_guard lock(decider_mutex_);
  decider_ = std::move(next);
}

std::shared_ptr<const agent::QPolicy> LruBaseCache::decider() const {
  std::lock_guard lock(decider_mutex_);
  return decider_ ? decider_->policy() : nullptr;
}

void LruBaseCache::set_advisor(EvictionAdvisor* advisor) { advisor_ = advisor; }

bool LruBaseCache::agent_ready() const {
  if (stats_.lru_replacements < warm_replacements_) return false;
  if (advisor_ != nullptr) return true;
  std::lock_guard lock(decider_mutex_);
  return decider_ != nullptr;
}

void LruBaseCache::touch(const Request& request) {
  if (request.id >= objects_.size()) objects_.resize(std::max<std::size_t>(request.id + 1, objects_.size() * 2));
  auto& s = objects_[request.id];
  if (s.id == kNoObject) {
    s.id = request.id;
  } else {
    s.has_previous = true;
    s.previous_index = s.last_index;
    s.previous_time = s.last_time;
  }
  s.size = request.size;
  s.last_index = clock_.index;
  s.last_time = clock_.time;
}

agent::RearSectionState LruBaseCache::rear_state(ObjectId skip) const {
  std::vector<agent::ObjectStats> tail;
  tail.reserve(rear_n_);
  for (auto it = queue_.rbegin(); it != queue_.rend() && tail.size() < rear_n_; ++it) {
    if (it->id == skip) continue;
    tail.push_back(objects_[it->id]);
  }
  return agent::extract_features(tail, rear_n_, clock_);
}

void LruBaseCache::evict(ObjectId id, AccessOutcome& out) {
  queue_.erase(id);
  out.evicted.push_back(id);
}

AccessOutcome LruBaseCache::access(const Request& request) {
  clock_.time = request.timestamp;
  AccessOutcome out;
  if (queue_.contains(request.id)) {
    out.hit = true;
    queue_.move_to_front(request.id);
    ++objects_[request.id].hits;
    touch(request);
    ++clock_.index;
    return out;
  }
  touch(request);
  ++clock_.index;
  if (request.size > capacity()) return out;
  objects_[request.id].hits = 0;
  queue_.push_front({request.id, request.size});
  out.admitted = true;
  if (!over_capacity()) return out;

  // One shared_ptr copy per miss keeps the policy alive even if it is
  // replaced concurrently.
  EvictionAdvisor* advisor = advisor_;
  std::shared_ptr<PolicyAdvisor> decider;
  if (advisor == nullptr && stats_.lru_replacements >= warm_replacements_) {
    std::lock_guard lock(decider_mutex_);
    decider = decider_;
    advisor = decider.get();
  }
  if (advisor != nullptr && stats_.lru_replacements >= warm_replacements_) {
    for (int round = 0; round < kMaxAgentRounds && over_capacity(); ++round) {
      const auto state = rear_state(request.id);
      if (state.valid_count() == 0) break;
      ++stats_.agent_rounds;
      for (const auto index : advisor->rank(state)) {
        if (!over_capacity()) break;
        if (index >= state.width() || !state.valid[index]) throw Error("lru-base: advisor chose a masked index");
        evict(state.ids[index], out);
        ++stats_.agent_evictions;
      }
    }
    while (over_capacity()) {
      evict(queue_.back().id, out);
      ++stats_.guard_evictions;
    }
    return out;
  }
  while (over_capacity()) {
    evict(queue_.back().id, out);
    ++stats_.lru_replacements;
  }
  return out;
}

}  // namespace cachelab
