#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "cachelab/trace.hpp"

namespace cachelab {

struct CachedObject {
  ObjectId id = kNoObject;
  std::uint64_t size = 0;

  friend bool operator==(const CachedObject&, const CachedObject&) = default;
};

struct AccessOutcome {
  bool hit = false;
  // Miss path only: whether the requested object entered the cache. An
  // admitted object may appear in `evicted` of the same access.
  bool admitted = false;
  // Freed keys, in eviction order.
  std::vector<ObjectId> evicted;
};

// Replacement policy over a byte-capacity cache. Objects larger than the
// capacity are never admitted.
class CachePolicy {
 public:
  explicit CachePolicy(std::uint64_t capacity) : capacity_(capacity) {}
  virtual ~CachePolicy() = default;
  CachePolicy(const CachePolicy&) = delete;
  CachePolicy& operator=(const CachePolicy&) = delete;

  virtual std::string name() const = 0;
  virtual AccessOutcome access(const Request& request) = 0;
  virtual std::uint64_t occupancy() const = 0;
  virtual std::size_t object_count() const = 0;
  virtual bool contains(ObjectId id) const = 0;
  // Cached objects, next-to-evict end first where the policy has an order.
  virtual std::vector<CachedObject> contents() const = 0;

  std::uint64_t capacity() const { return capacity_; }

 private:
  std::uint64_t capacity_;
};

using PolicyPtr = std::unique_ptr<CachePolicy>;

}  // namespace cachelab
