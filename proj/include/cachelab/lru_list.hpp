#pragma once

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <list>
#include <vector>

#include "cachelab/policy.hpp"

namespace cachelab {

// Recency queue: front is the most recently inserted/promoted object, back
// is the tail. Lookup is by dense ObjectId.
class LruList {
 public:
  using iterator = std::list<CachedObject>::iterator;
  using const_iterator = std::list<CachedObject>::const_iterator;
  using const_reverse_iterator = std::list<CachedObject>::const_reverse_iterator;

  bool contains(ObjectId id) const { return id < present_.size() && present_[id]; }
  std::size_t size() const { return items_.size(); }
  bool empty() const { return items_.empty(); }
  std::uint64_t bytes() const { return bytes_; }

  void push_front(const CachedObject& obj) {
    assert(!contains(obj.id));
    grow(obj.id);
    items_.push_front(obj);
    where_[obj.id] = items_.begin();
    present_[obj.id] = true;
    bytes_ += obj.size;
  }

  void move_to_front(ObjectId id) { items_.splice(items_.begin(), items_, where_[id]); }

  const CachedObject& back() const { return items_.back(); }
  const CachedObject& front() const { return items_.front(); }

  CachedObject pop_back() {
    CachedObject obj = items_.back();
    erase(obj.id);
    return obj;
  }

  void erase(ObjectId id) {
    auto it = where_[id];
    bytes_ -= it->size;
    present_[id] = false;
    items_.erase(it);
  }

  const CachedObject& get(ObjectId id) const { return *where_[id]; }

  const_iterator begin() const { return items_.begin(); }
  const_iterator end() const { return items_.end(); }
  // Tail-first traversal.
  const_reverse_iterator rbegin() const { return items_.rbegin(); }
  const_reverse_iterator rend() const { return items_.rend(); }

 private:
  void grow(ObjectId id) {
    if (id >= present_.size()) {
      const auto n = std::max<std::size_t>(id + 1, present_.size() * 2);
      present_.resize(n, false);
      where_.resize(n);
    }
  }

  std::list<CachedObject> items_;
  std::vector<iterator> where_;
  std::vector<bool> present_;
  std::uint64_t bytes_ = 0;
};

}  // namespace cachelab
