#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <ostream>
#include <string>

#include "cachelab/error.hpp"
#include "cachelab/metrics.hpp"
#include "cachelab/offline.hpp"
#include "cachelab/parallel.hpp"

namespace cachelab {

std::vector<FlatRegionPoint> flat_region_experiment(const Trace& trace, std::uint64_t capacity,
                                                    const std::vector<std::size_t>& n_values, int repeats,
                                                    std::uint64_t seed, std::uint64_t warmup) {
  if (repeats < 1) throw ConfigError("flat_region_experiment: repeats must be >= 1");
  struct Cell {
    std::size_t point;
    std::uint64_t seed;
  };
  std::vector<Cell> cells;
  std::vector<FlatRegionPoint> points(n_values.size());
  for (std::size_t p = 0; p < n_values.size(); ++p) {
    if (n_values[p] == 0) throw ConfigError("flat_region_experiment: N must be >= 1");
    points[p].n = n_values[p];
    points[p].repeats = n_values[p] == 1 ? 1 : repeats;
    for (int r = 0; r < points[p].repeats; ++r) {
      cells.push_back({p, derive_seed(seed, (static_cast<std::uint64_t>(n_values[p]) << 20) + r)});
    }
  }
  std::vector<double> omrs(cells.size());
  SimulationOptions options;
  options.warmup = warmup;
  options.record_evictions = false;
  parallel_for(cells.size(), [&](std::size_t i) {
    const auto report = relaxed_topn(trace, capacity, n_values[cells[i].point], cells[i].seed, options);
    omrs[i] = omr(report.counters);
  });

  std::size_t i = 0;
  for (auto& pt : points) {
    double sum = 0.0;
    double sq = 0.0;
    pt.min_omr = std::numeric_limits<double>::infinity();
    pt.max_omr = -std::numeric_limits<double>::infinity();
    for (int r = 0; r < pt.repeats; ++r, ++i) {
      sum += omrs[i];
      sq += omrs[i] * omrs[i];
      pt.min_omr = std::min(pt.min_omr, omrs[i]);
      pt.max_omr = std::max(pt.max_omr, omrs[i]);
    }
    const double k = pt.repeats;
    pt.mean_omr = sum / k;
    pt.stddev_omr = pt.repeats > 1 ? std::sqrt(std::max(0.0, (sq - sum * sum / k) / (k - 1.0))) : 0.0;
  }
  return points;
}

void write_flat_region_csv(const std::vector<FlatRegionPoint>& points, std::ostream& out) {
  out << "N,mean_omr,min_omr,max_omr\n";
  for (const auto& p : points) out << p.n << ',' << p.mean_omr << ',' << p.min_omr << ',' << p.max_omr << '\n';
}

MissBound pfoo_l(const Trace& trace, std::uint64_t capacity) {
  struct Interval {
    std::uint64_t size;
    std::uint64_t length;
    long double cost;
  };
  const NextUseIndex next_use(trace);
  std::vector<Interval> intervals;
  MissBound bound;
  bound.requests = trace.size();
  for (std::size_t i = 0; i < trace.size(); ++i) {
    const auto& r = trace[i];
    bound.bytes_requested += r.size;
    if (next_use[i] == NextUseIndex::kNever || r.size > capacity) continue;
    const auto length = next_use[i] - i;
    intervals.push_back({r.size, length, static_cast<long double>(r.size) * static_cast<long double>(length)});
  }
  const long double budget = static_cast<long double>(capacity) * static_cast<long double>(trace.size());

  std::sort(intervals.begin(), intervals.end(), [](const Interval& a, const Interval& b) { return a.cost < b.cost; });
  std::uint64_t hits = 0;
  long double used = 0.0L;
  for (const auto& iv : intervals) {
    if (used + iv.cost > budget) break;
    used += iv.cost;
    ++hits;
  }

  std::sort(intervals.begin(), intervals.end(),
            [](const Interval& a, const Interval& b) { return a.length < b.length; });
  std::uint64_t whole_bytes = 0;
  long double partial = 0.0L;
  used = 0.0L;
  for (const auto& iv : intervals) {
    if (used + iv.cost > budget) {
      partial = (budget - used) / iv.cost * static_cast<long double>(iv.size);
      break;
    }
    used += iv.cost;
    whole_bytes += iv.size;
  }

  bound.object_misses = bound.requests - hits;
  bound.byte_misses = static_cast<double>(static_cast<long double>(bound.bytes_requested - whole_bytes) - partial);
  if (bound.requests > 0) {
    bound.omr = static_cast<double>(bound.object_misses) / static_cast<double>(bound.requests);
    bound.bmr = bound.byte_misses / static_cast<double>(bound.bytes_requested);
  }
  return bound;
}

namespace {

class BruteForce {
 public:
  BruteForce(const Trace& trace, std::uint64_t capacity, MissObjective objective)
      : capacity_(capacity), objective_(objective) {
    std::map<ObjectId, int> local;
    for (const auto& r : trace.requests()) {
      auto [it, inserted] = local.emplace(r.id, static_cast<int>(local.size()));
      if (inserted) sizes_.push_back(r.size);
      bits_.push_back(it->second);
    }
    if (trace.size() > kBruteForceMaxRequests || sizes_.size() > kBruteForceMaxKeys) {
      throw ConfigError("brute_force_optimal: instance exceeds " + std::to_string(kBruteForceMaxRequests) +
                        " requests / " + std::to_string(kBruteForceMaxKeys) + " keys");
    }
    memo_.assign((trace.size() + 1) << sizes_.size(), kUnknown);
  }

  std::uint64_t solve(std::size_t pos, unsigned mask) {
    if (pos == bits_.size()) return 0;
    auto& slot = memo_[(pos << sizes_.size()) | mask];
    if (slot != kUnknown) return slot;
    const int b = bits_[pos];
    std::uint64_t best;
    if (mask & (1u << b)) {
      best = solve(pos + 1, mask);
    } else {
      const std::uint64_t cost = objective_ == MissObjective::kObjectMisses ? 1 : sizes_[b];
      if (sizes_[b] > capacity_) {
        best = cost + solve(pos + 1, mask);
      } else {
        std::vector<unsigned> outcomes;
        evictions(mask | (1u << b), outcomes);
        best = std::numeric_limits<std::uint64_t>::max();
        for (auto m : outcomes) best = std::min(best, cost + solve(pos + 1, m));
      }
    }
    slot = best;
    return best;
  }

 private:
  static constexpr std::uint64_t kUnknown = std::numeric_limits<std::uint64_t>::max();

  std::uint64_t bytes(unsigned mask) const {
    std::uint64_t total = 0;
    for (std::size_t i = 0; i < sizes_.size(); ++i) {
      if (mask & (1u << i)) total += sizes_[i];
    }
    return total;
  }

  // Every cache state reachable by evicting one object at a time while over
  // capacity.
  void evictions(unsigned mask, std::vector<unsigned>& out) const {
    if (bytes(mask) <= capacity_) {
      if (std::find(out.begin(), out.end(), mask) == out.end()) out.push_back(mask);
      return;
    }
    for (std::size_t i = 0; i < sizes_.size(); ++i) {
      if (mask & (1u << i)) evictions(mask & ~(1u << i), out);
    }
  }

  std::uint64_t capacity_;
  MissObjective objective_;
  std::vector<std::uint64_t> sizes_;
  std::vector<int> bits_;
  std::vector<std::uint64_t> memo_;
};

}  // namespace

std::uint64_t brute_force_optimal(const Trace& trace, std::uint64_t capacity, MissObjective objective) {
  BruteForce search(trace, capacity, objective);
  return search.solve(0, 0);
}

}  // namespace cachelab
