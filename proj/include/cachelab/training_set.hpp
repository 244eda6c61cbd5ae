#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "cachelab/trace.hpp"

namespace cachelab {

struct TrainingSetOptions {
  double sampling_rate = 0.01;
  std::uint64_t seed = 1;
  // Largest accepted Kolmogorov-Smirnov distance between the request-size
  // distributions of the sample and of the full trace.
  double ks_tolerance = 0.05;
  int max_attempts = 50;
};

struct TrainingSet {
  // Sorted ascending.
  std::vector<ObjectId> sampled_ids;
  // Requests of sampled keys in trace order; shares the source key table.
  Trace records;
  // Request counts per power-of-two size bucket: bucket b holds sizes in
  // [2^b, 2^(b+1)).
  std::vector<std::uint64_t> size_histogram;
  double ks_distance = 0.0;
  int attempts = 0;
  bool within_tolerance = false;
};

// Reservoir-samples round(rate * unique keys) ids (at least one), keeps every
// request of a sampled id, and resamples until the size distribution is within
// tolerance. After max_attempts the closest attempt is returned with a
// warning.
TrainingSet extract_training_set(const Trace& trace, const TrainingSetOptions& options);

// Fixed-size uniform sample of a stream (Algorithm R).
template <typename T>
class Reservoir {
 public:
  Reservoir(std::size_t capacity, std::uint64_t seed) : capacity_(capacity), rng_(seed) {
    items_.reserve(capacity);
  }

  void observe(const T& item) {
    ++seen_;
    if (items_.size() < capacity_) {
      items_.push_back(item);
      return;
    }
    std::uniform_int_distribution<std::uint64_t> pick(0, seen_ - 1);
    const auto j = pick(rng_);
    if (j < capacity_) items_[j] = item;
  }

  const std::vector<T>& items() const { return items_; }
  std::uint64_t seen() const { return seen_; }

 private:
  std::size_t capacity_;
  std::mt19937_64 rng_;
  std::vector<T> items_;
  std::uint64_t seen_ = 0;
};

// Two-sample KS statistic; both inputs sorted ascending and non-empty.
double ks_distance(const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b);

}  // namespace cachelab
