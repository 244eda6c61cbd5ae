#pragma once

#include <cstddef>
#include <limits>
#include <vector>

#include "cachelab/trace.hpp"

namespace cachelab {

// For each trace position, the position of the next request to the same key.
class NextUseIndex {
 public:
  static constexpr std::size_t kNever = std::numeric_limits<std::size_t>::max();

  explicit NextUseIndex(const Trace& trace);

  std::size_t operator[](std::size_t i) const { return next_[i]; }
  std::size_t size() const { return next_.size(); }
  // Largest finite next_use[i] - i; 0 when no key repeats.
  std::size_t max_finite_distance() const { return max_distance_; }

 private:
  std::vector<std::size_t> next_;
  std::size_t max_distance_ = 0;
};

}  // namespace cachelab
