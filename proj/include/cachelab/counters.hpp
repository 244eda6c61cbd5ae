#pragma once

#include <cstdint>

namespace cachelab {

// Hit/miss tallies behind the object and byte miss ratios.
struct Counters {
  std::uint64_t requests = 0;
  std::uint64_t hits = 0;
  std::uint64_t bytes_requested = 0;
  std::uint64_t bytes_hit = 0;

  void record(std::uint64_t size, bool hit) {
    ++requests;
    bytes_requested += size;
    if (hit) {
      ++hits;
      bytes_hit += size;
    }
  }

  std::uint64_t misses() const { return requests - hits; }
  std::uint64_t bytes_missed() const { return bytes_requested - bytes_hit; }

  Counters& operator+=(const Counters& o) {
    requests += o.requests;
    hits += o.hits;
    bytes_requested += o.bytes_requested;
    bytes_hit += o.bytes_hit;
    return *this;
  }

  friend bool operator==(const Counters&, const Counters&) = default;
};

// (requests - hits) / requests. Throws UndefinedRatioError when requests == 0.
double omr(const Counters& c);
// (bytes_requested - bytes_hit) / bytes_requested. Throws UndefinedRatioError
// when bytes_requested == 0.
double bmr(const Counters& c);

}  // namespace cachelab
