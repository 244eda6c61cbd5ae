#include "cachelab/policies.hpp"

#include <algorithm>
#include <string>

#include "cachelab/error.hpp"

namespace cachelab {

// --- LRU family -------------------------------------------------------------

AccessOutcome LruPolicy::access(const Request& request) {
  AccessOutcome out;
  if (queue_.contains(request.id)) {
    out.hit = true;
    queue_.move_to_front(request.id);
    return out;
  }
  if (request.size > capacity()) return out;
  while (queue_.bytes() + request.size > capacity()) out.evicted.push_back(queue_.pop_back().id);
  queue_.push_front({request.id, request.size});
  out.admitted = true;
  return out;
}

std::vector<CachedObject> LruPolicy::contents() const { return {queue_.rbegin(), queue_.rend()}; }

AccessOutcome FifoPolicy::access(const Request& request) {
  AccessOutcome out;
  if (queue_.contains(request.id)) {
    out.hit = true;
    return out;
  }
  if (request.size > capacity()) return out;
  while (queue_.bytes() + request.size > capacity()) out.evicted.push_back(queue_.pop_back().id);
  queue_.push_front({request.id, request.size});
  out.admitted = true;
  return out;
}

ThresholdLruPolicy::ThresholdLruPolicy(std::uint64_t capacity, std::uint64_t threshold_bytes)
    : LruPolicy(capacity), threshold_(threshold_bytes) {
  if (threshold_bytes == 0) throw ConfigError("thlru: threshold must be positive");
}

AccessOutcome ThresholdLruPolicy::access(const Request& request) {
  if (!queue_.contains(request.id) && request.size > threshold_) return AccessOutcome{};
  return LruPolicy::access(request);
}

// --- Segmented LRU ----------------------------------------------------------

SegmentedLruPolicy::SegmentedLruPolicy(std::uint64_t capacity, int segments) : CachePolicy(capacity) {
  if (segments < 1) throw ConfigError("s4lru: segment count must be >= 1");
  segments_.resize(static_cast<std::size_t>(segments));
  budgets_.assign(static_cast<std::size_t>(segments), capacity / static_cast<std::uint64_t>(segments));
  budgets_[0] += capacity % static_cast<std::uint64_t>(segments);
}

std::string SegmentedLruPolicy::name() const {
  return segments_.size() == 4 ? "s4lru" : "s" + std::to_string(segments_.size()) + "lru";
}

int SegmentedLruPolicy::segment_of(ObjectId id) const {
  for (std::size_t i = 0; i < segments_.size(); ++i) {
    if (segments_[i].contains(id)) return static_cast<int>(i);
  }
  return -1;
}

void SegmentedLruPolicy::rebalance_from(int level, AccessOutcome& out) {
  for (int i = level; i > 0; --i) {
    auto& seg = segments_[i];
    while (seg.bytes() > budgets_[i]) segments_[i - 1].push_front(seg.pop_back());
  }
  auto& bottom = segments_[0];
  while (bottom.bytes() > budgets_[0]) out.evicted.push_back(bottom.pop_back().id);
}

AccessOutcome SegmentedLruPolicy::access(const Request& request) {
  AccessOutcome out;
  const int level = segment_of(request.id);
  if (level >= 0) {
    out.hit = true;
    const int top = static_cast<int>(segments_.size()) - 1;
    if (level == top) {
      segments_[level].move_to_front(request.id);
      return out;
    }
    auto obj = segments_[level].get(request.id);
    segments_[level].erase(request.id);
    segments_[level + 1].push_front(obj);
    rebalance_from(level + 1, out);
    return out;
  }
  if (request.size > budgets_[0]) return out;
  segments_[0].push_front({request.id, request.size});
  out.admitted = true;
  rebalance_from(0, out);
  return out;
}

std::uint64_t SegmentedLruPolicy::occupancy() const {
  std::uint64_t total = 0;
  for (const auto& s : segments_) total += s.bytes();
  return total;
}

std::size_t SegmentedLruPolicy::object_count() const {
  std::size_t total = 0;
  for (const auto& s : segments_) total += s.size();
  return total;
}

bool SegmentedLruPolicy::contains(ObjectId id) const { return segment_of(id) >= 0; }

std::vector<CachedObject> SegmentedLruPolicy::contents() const {
  std::vector<CachedObject> out;
  for (const auto& s : segments_) out.insert(out.end(), s.rbegin(), s.rend());
  return out;
}

// --- Priority policies ------------------------------------------------------

AccessOutcome PriorityPolicy::access(const Request& request) {
  AccessOutcome out;
  ++tick_;
  const auto id = request.id;
  if (contains(id)) {
    out.hit = true;
    auto& m = meta_[id];
    order_.erase(key_of(id));
    ++m.frequency;
    m.last_tick = tick_;
    m.history.push_back(tick_);
    reprioritize(m);
    order_.insert(key_of(id));
    return out;
  }
  if (request.size > capacity()) return out;
  while (bytes_ + request.size > capacity()) {
    const auto victim = std::get<2>(*order_.begin());
    order_.erase(order_.begin());
    auto& vm = meta_[victim];
    on_evict(vm);
    vm.cached = false;
    vm.history.clear();
    bytes_ -= vm.size;
    out.evicted.push_back(victim);
  }
  if (id >= meta_.size()) meta_.resize(std::max<std::size_t>(id + 1, meta_.size() * 2));
  auto& m = meta_[id];
  m.cached = true;
  m.size = request.size;
  m.frequency = 1;
  m.last_tick = tick_;
  m.history.assign(1, tick_);
  reprioritize(m);
  order_.insert(key_of(id));
  bytes_ += request.size;
  out.admitted = true;
  return out;
}

std::vector<CachedObject> PriorityPolicy::contents() const {
  std::vector<CachedObject> out;
  out.reserve(order_.size());
  for (const auto& key : order_) {
    const auto id = std::get<2>(key);
    out.push_back({id, meta_[id].size});
  }
  return out;
}

LruKPolicy::LruKPolicy(std::uint64_t capacity, int k) : PriorityPolicy(capacity), k_(k) {
  if (k < 1) throw ConfigError("lruk: k must be >= 1");
}

void LruKPolicy::reprioritize(Meta& meta) {
  const auto k = static_cast<std::size_t>(k_);
  if (meta.history.size() > k) meta.history.erase(meta.history.begin());
  // Fewer than k accesses: infinite backward k-distance, ordered by recency
  // through the tick tie-break.
  meta.priority = meta.history.size() < k ? -1.0 : static_cast<double>(meta.history.front());
}

// --- factories --------------------------------------------------------------

PolicyPtr make_lru(std::uint64_t capacity) { return std::make_unique<LruPolicy>(capacity); }
PolicyPtr make_fifo(std::uint64_t capacity) { return std::make_unique<FifoPolicy>(capacity); }
PolicyPtr make_s4lru(std::uint64_t capacity, int segments) {
  return std::make_unique<SegmentedLruPolicy>(capacity, segments);
}
PolicyPtr make_lfuda(std::uint64_t capacity) { return std::make_unique<LfudaPolicy>(capacity); }
PolicyPtr make_lruk(std::uint64_t capacity, int k) { return std::make_unique<LruKPolicy>(capacity, k); }
PolicyPtr make_gdsf(std::uint64_t capacity) { return std::make_unique<GdsfPolicy>(capacity); }
PolicyPtr make_thlru(std::uint64_t capacity, std::uint64_t threshold_bytes) {
  return std::make_unique<ThresholdLruPolicy>(capacity, threshold_bytes);
}

}  // namespace cachelab
