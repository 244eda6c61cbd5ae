#include "cachelab/trace.hpp"

#include <algorithm>

#include "cachelab/error.hpp"

namespace cachelab {

ObjectId KeyTable::intern(std::string_view key) {
  auto it = index_.find(std::string(key));
  if (it != index_.end()) return it->second;
  const auto id = static_cast<ObjectId>(names_.size());
  names_.emplace_back(key);
  index_.emplace(names_.back(), id);
  return id;
}

ObjectId KeyTable::find(std::string_view key) const {
  auto it = index_.find(std::string(key));
  return it == index_.end() ? kNoObject : it->second;
}

void Trace::push(std::int64_t timestamp, std::string_view key, std::uint64_t size) {
  requests_.push_back(Request{timestamp, keys_.intern(key), size});
}

std::size_t Trace::unique_objects() const {
  std::vector<bool> seen(keys_.size(), false);
  std::size_t n = 0;
  for (const auto& r : requests_) {
    if (!seen[r.id]) {
      seen[r.id] = true;
      ++n;
    }
  }
  return n;
}

std::uint64_t Trace::unique_bytes() const {
  std::vector<std::uint64_t> sizes(keys_.size(), 0);
  for (const auto& r : requests_) sizes[r.id] = r.size;
  std::uint64_t total = 0;
  for (auto s : sizes) total += s;
  return total;
}

std::uint64_t Trace::total_bytes() const {
  std::uint64_t total = 0;
  for (const auto& r : requests_) total += r.size;
  return total;
}

std::uint64_t Trace::max_object_size() const {
  std::uint64_t m = 0;
  for (const auto& r : requests_) m = std::max(m, r.size);
  return m;
}

std::uint64_t Trace::min_object_size() const {
  if (requests_.empty()) return 0;
  std::uint64_t m = requests_.front().size;
  for (const auto& r : requests_) m = std::min(m, r.size);
  return m;
}

Trace Trace::slice(std::size_t first, std::size_t last) const {
  Trace out;
  out.keys_ = keys_;
  last = std::min(last, requests_.size());
  if (first < last) out.requests_.assign(requests_.begin() + first, requests_.begin() + last);
  return out;
}

Trace splice_traces(const Trace& a, const Trace& b) {
  if (a.empty() || b.empty()) throw ConfigError("splice_traces: both traces must be non-empty");
  Trace out;
  out.mutable_requests().reserve(a.size() + b.size());
  for (const auto& r : a.requests()) out.push(r.timestamp, "a/" + a.key_name(r.id), r.size);
  const std::int64_t shift = a.requests().back().timestamp + 1 - b.requests().front().timestamp;
  for (const auto& r : b.requests()) out.push(r.timestamp + shift, "b/" + b.key_name(r.id), r.size);
  return out;
}

}  // namespace cachelab
