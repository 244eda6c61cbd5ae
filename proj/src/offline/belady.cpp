#include <algorithm>
#include <iterator>
#include <limits>
#include <string>

#include "cachelab/error.hpp"
#include "cachelab/offline.hpp"

namespace cachelab {

// --- Belady / relaxed top-N -------------------------------------------------

RelaxedBeladyPolicy::RelaxedBeladyPolicy(const Trace& trace, std::uint64_t capacity, std::size_t top_n,
                                         std::uint64_t seed)
    : CachePolicy(capacity),
      next_use_(trace),
      top_n_(top_n),
      rng_(seed),
      cached_(trace.id_space(), false),
      upcoming_(trace.id_space(), NextUseIndex::kNever),
      size_(trace.id_space(), 0),
      admitted_at_(trace.id_space(), 0) {
  if (top_n == 0) throw ConfigError("relaxed_topn: N must be >= 1");
}

std::string RelaxedBeladyPolicy::name() const {
  return top_n_ == 1 ? "belady" : "relaxed-top" + std::to_string(top_n_);
}

RelaxedBeladyPolicy::Key RelaxedBeladyPolicy::key_of(ObjectId id) const {
  return {upcoming_[id], size_[id], std::numeric_limits<std::uint64_t>::max() - admitted_at_[id], id};
}

AccessOutcome RelaxedBeladyPolicy::access(const Request& request) {
  AccessOutcome out;
  const auto pos = position_++;
  const auto id = request.id;
  if (contains(id)) {
    out.hit = true;
    ranked_.erase(key_of(id));
    upcoming_[id] = next_use_[pos];
    ranked_.insert(key_of(id));
    return out;
  }
  if (request.size > capacity()) return out;
  cached_[id] = true;
  size_[id] = request.size;
  upcoming_[id] = next_use_[pos];
  admitted_at_[id] = admissions_++;
  ranked_.insert(key_of(id));
  bytes_ += request.size;
  out.admitted = true;
  while (bytes_ > capacity()) {
    auto victim = std::prev(ranked_.end());
    const auto window = std::min(top_n_, ranked_.size());
    if (window > 1) {
      std::uniform_int_distribution<std::size_t> pick(0, window - 1);
      std::advance(victim, -static_cast<std::ptrdiff_t>(pick(rng_)));
    }
    const auto gone = std::get<3>(*victim);
    ranked_.erase(victim);
    cached_[gone] = false;
    bytes_ -= size_[gone];
    out.evicted.push_back(gone);
  }
  return out;
}

std::vector<CachedObject> RelaxedBeladyPolicy::contents() const {
  std::vector<CachedObject> out;
  out.reserve(ranked_.size());
  for (auto it = ranked_.rbegin(); it != ranked_.rend(); ++it) out.push_back({std::get<3>(*it), std::get<1>(*it)});
  return out;
}

// --- Belady-Size ------------------------------------------------------------

BeladySizePolicy::BeladySizePolicy(const Trace& trace, std::uint64_t capacity)
    : CachePolicy(capacity),
      next_use_(trace),
      trace_length_(trace.size()),
      slot_(trace.id_space(), kAbsent),
      upcoming_(trace.id_space(), NextUseIndex::kNever),
      size_(trace.id_space(), 0),
      admitted_at_(trace.id_space(), 0) {}

void BeladySizePolicy::remove(ObjectId id) {
  const auto slot = slot_[id];
  const auto last = cached_ids_.back();
  cached_ids_[slot] = last;
  slot_[last] = slot;
  cached_ids_.pop_back();
  slot_[id] = kAbsent;
  bytes_ -= size_[id];
}

AccessOutcome BeladySizePolicy::access(const Request& request) {
  AccessOutcome out;
  const auto pos = position_++;
  const auto id = request.id;
  if (contains(id)) {
    out.hit = true;
    upcoming_[id] = next_use_[pos];
    return out;
  }
  if (request.size > capacity()) return out;
  slot_[id] = cached_ids_.size();
  cached_ids_.push_back(id);
  size_[id] = request.size;
  upcoming_[id] = next_use_[pos];
  admitted_at_[id] = admissions_++;
  bytes_ += request.size;
  out.admitted = true;
  while (bytes_ > capacity()) {
    ObjectId best = kNoObject;
    unsigned __int128 best_score = 0;
    for (auto cand : cached_ids_) {
      const std::size_t distance =
          upcoming_[cand] == NextUseIndex::kNever ? trace_length_ - pos + 1 : upcoming_[cand] - pos;
      const auto score = static_cast<unsigned __int128>(distance) * size_[cand];
      const bool better =
          best == kNoObject || score > best_score ||
          (score == best_score &&
           (size_[cand] > size_[best] || (size_[cand] == size_[best] && admitted_at_[cand] < admitted_at_[best])));
      if (better) {
        best = cand;
        best_score = score;
      }
    }
    remove(best);
    out.evicted.push_back(best);
  }
  return out;
}

std::vector<CachedObject> BeladySizePolicy::contents() const {
  std::vector<CachedObject> out;
  out.reserve(cached_ids_.size());
  for (auto id : cached_ids_) out.push_back({id, size_[id]});
  return out;
}

SimulationReport belady(const Trace& trace, std::uint64_t capacity, const SimulationOptions& options) {
  RelaxedBeladyPolicy policy(trace, capacity, 1, 0);
  return simulate(policy, trace, options);
}

SimulationReport belady_size(const Trace& trace, std::uint64_t capacity, const SimulationOptions& options) {
  BeladySizePolicy policy(trace, capacity);
  return simulate(policy, trace, options);
}

SimulationReport relaxed_topn(const Trace& trace, std::uint64_t capacity, std::size_t n, std::uint64_t seed,
                              const SimulationOptions& options) {
  RelaxedBeladyPolicy policy(trace, capacity, n, seed);
  return simulate(policy, trace, options);
}

}  // namespace cachelab
