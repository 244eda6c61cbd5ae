#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace cachelab {

// Dense per-trace handle for an object key; indexes Trace::key_name().
using ObjectId = std::uint32_t;
inline constexpr ObjectId kNoObject = std::numeric_limits<ObjectId>::max();

// One trace record. size >= 1; timestamps are whole seconds.
struct Request {
  std::int64_t timestamp = 0;
  ObjectId id = kNoObject;
  std::uint64_t size = 1;

  friend bool operator==(const Request&, const Request&) = default;
};

// Interns opaque keys into dense ObjectIds.
class KeyTable {
 public:
  ObjectId intern(std::string_view key);
  // kNoObject when unknown.
  ObjectId find(std::string_view key) const;
  const std::string& name(ObjectId id) const { return names_[id]; }
  std::size_t size() const { return names_.size(); }

  friend bool operator==(const KeyTable& a, const KeyTable& b) { return a.names_ == b.names_; }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, ObjectId> index_;
};

// An in-memory request sequence plus its key dictionary. Every key keeps a
// single size across the whole trace.
class Trace {
 public:
  Trace() = default;

  // Appends a request, interning the key.
  void push(std::int64_t timestamp, std::string_view key, std::uint64_t size);
  // Appends a request for an already interned id.
  void push(const Request& r) { requests_.push_back(r); }

  std::span<const Request> requests() const { return requests_; }
  std::vector<Request>& mutable_requests() { return requests_; }
  const Request& operator[](std::size_t i) const { return requests_[i]; }
  std::size_t size() const { return requests_.size(); }
  bool empty() const { return requests_.empty(); }

  KeyTable& keys() { return keys_; }
  const KeyTable& keys() const { return keys_; }
  const std::string& key_name(ObjectId id) const { return keys_.name(id); }
  // Number of interned keys; every id in the trace is below this.
  std::size_t id_space() const { return keys_.size(); }
  // Distinct keys that appear in the requests (fewer than id_space() for a
  // slice).
  std::size_t unique_objects() const;

  // Sum of sizes over distinct keys that appear in the trace.
  std::uint64_t unique_bytes() const;
  std::uint64_t total_bytes() const;
  std::uint64_t max_object_size() const;
  std::uint64_t min_object_size() const;

  // Copy of requests[first, last) sharing this trace's key table.
  Trace slice(std::size_t first, std::size_t last) const;

  friend bool operator==(const Trace& a, const Trace& b) {
    return a.requests_ == b.requests_ && a.keys_ == b.keys_;
  }

 private:
  std::vector<Request> requests_;
  KeyTable keys_;
};

// Output is `a` followed by `b`; b's timestamps are shifted so it starts one
// second after a ends and keys are prefixed "a/" and "b/" respectively.
Trace splice_traces(const Trace& a, const Trace& b);

}  // namespace cachelab
