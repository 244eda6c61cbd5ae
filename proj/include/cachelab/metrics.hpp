#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "cachelab/counters.hpp"
#include "cachelab/policy.hpp"
#include "cachelab/simulator.hpp"
#include "cachelab/trace.hpp"

namespace cachelab {

// Forward reuse distances of evicted objects, normalized by the trace's
// longest finite reuse distance and split into ten equal subranges
// [0,0.1) ... [0.9,1].
struct ReuseHistogram {
  std::array<std::uint64_t, 10> buckets{};
  // Evicted objects that are never requested again.
  std::uint64_t never_reused = 0;

  std::uint64_t finite_total() const;
};

ReuseHistogram reuse_distance_histogram(const Trace& trace, std::span<const EvictionRecord> evictions);

// Empirical distribution of normalized positions in [0, 1].
class Ecdf {
 public:
  Ecdf() = default;
  explicit Ecdf(std::vector<double> samples);

  bool empty() const { return samples_.empty(); }
  std::size_t size() const { return samples_.size(); }
  const std::vector<double>& samples() const { return samples_; }

  // Smallest sample x with F(x) >= q; q is clamped to [0, 1]. Throws on an
  // empty distribution.
  double quantile(double q) const;
  // Fraction of samples <= x.
  double cdf(double x) const;

  // `x,F(x)` rows at each distinct sample value.
  void write_csv(std::ostream& out) const;

 private:
  std::vector<double> samples_;
};

// Replays the trace under LRU. At every miss that forces a replacement, the
// cached object whose next use is farthest away is located and its distance
// from the queue tail, divided by the queue length, is recorded. Among objects
// never used again the one nearest the tail is taken. Throws if no
// replacement happens.
Ecdf eviction_position_ecdf(const Trace& trace, std::uint64_t capacity);

// Quantile of the eviction-position distribution; multiplied by the queue
// length this sizes the section the agent chooses from.
double rear_fraction(const Ecdf& ecdf, double q = 0.99999);

// BMR over disjoint consecutive windows of `window` requests, last partial
// window included. The policy is used from its current state.
std::vector<double> windowed_bmr_series(const Trace& trace, CachePolicy& policy, std::uint64_t window);

}  // namespace cachelab
