#include "cachelab/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <set>
#include <utility>

#include "cachelab/error.hpp"
#include "cachelab/lru_list.hpp"
#include "cachelab/next_use.hpp"

namespace cachelab {

double omr(const Counters& c) {
  if (c.requests == 0) throw UndefinedRatioError("omr: no requests");
  return static_cast<double>(c.requests - c.hits) / static_cast<double>(c.requests);
}

double bmr(const Counters& c) {
  if (c.bytes_requested == 0) throw UndefinedRatioError("bmr: no bytes requested");
  return static_cast<double>(c.bytes_requested - c.bytes_hit) / static_cast<double>(c.bytes_requested);
}

NextUseIndex::NextUseIndex(const Trace& trace) : next_(trace.size(), kNever) {
  std::vector<std::size_t> upcoming(trace.id_space(), kNever);
  for (std::size_t i = trace.size(); i-- > 0;) {
    const auto id = trace[i].id;
    next_[i] = upcoming[id];
    if (next_[i] != kNever) max_distance_ = std::max(max_distance_, next_[i] - i);
    upcoming[id] = i;
  }
}

std::uint64_t ReuseHistogram::finite_total() const {
  std::uint64_t total = 0;
  for (auto b : buckets) total += b;
  return total;
}

ReuseHistogram reuse_distance_histogram(const Trace& trace, std::span<const EvictionRecord> evictions) {
  ReuseHistogram hist;
  // Positions of every key, ascending.
  std::vector<std::vector<std::size_t>> positions(trace.id_space());
  for (std::size_t i = 0; i < trace.size(); ++i) positions[trace[i].id].push_back(i);
  const NextUseIndex next_use(trace);
  const double longest = static_cast<double>(next_use.max_finite_distance());

  for (const auto& ev : evictions) {
    const auto& pos = positions[ev.id];
    auto it = std::upper_bound(pos.begin(), pos.end(), ev.position);
    if (it == pos.end() || longest == 0.0) {
      ++hist.never_reused;
      continue;
    }
    const double x = static_cast<double>(*it - ev.position) / longest;
    const auto bucket = std::min<std::size_t>(9, static_cast<std::size_t>(std::floor(x * 10.0)));
    ++hist.buckets[bucket];
  }
  return hist;
}

Ecdf::Ecdf(std::vector<double> samples) : samples_(std::move(samples)) {
  std::sort(samples_.begin(), samples_.end());
}

double Ecdf::quantile(double q) const {
  if (samples_.empty()) throw Error("quantile of an empty ECDF");
  q = std::clamp(q, 0.0, 1.0);
  const double n = static_cast<double>(samples_.size());
  auto rank = static_cast<std::size_t>(std::ceil(q * n));
  if (rank > 0) --rank;
  return samples_[std::min(rank, samples_.size() - 1)];
}

double Ecdf::cdf(double x) const {
  if (samples_.empty()) return 0.0;
  const auto count = std::upper_bound(samples_.begin(), samples_.end(), x) - samples_.begin();
  return static_cast<double>(count) / static_cast<double>(samples_.size());
}

void Ecdf::write_csv(std::ostream& out) const {
  out << "x,F(x)\n";
  const double n = static_cast<double>(samples_.size());
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    if (i + 1 < samples_.size() && samples_[i + 1] == samples_[i]) continue;
    out << samples_[i] << ',' << static_cast<double>(i + 1) / n << '\n';
  }
}

namespace {

// Counts cached objects by last-access position.
class Fenwick {
 public:
  explicit Fenwick(std::size_t n) : tree_(n + 1, 0) {}
  void add(std::size_t i, int delta) {
    for (++i; i < tree_.size(); i += i & (~i + 1)) tree_[i] += delta;
  }
  // Sum over [0, i).
  std::int64_t prefix(std::size_t i) const {
    std::int64_t s = 0;
    for (; i > 0; i -= i & (~i + 1)) s += tree_[i];
    return s;
  }

 private:
  std::vector<std::int64_t> tree_;
};

}  // namespace

Ecdf eviction_position_ecdf(const Trace& trace, std::uint64_t capacity) {
  const NextUseIndex next_use(trace);
  const std::size_t n = trace.size();
  LruList queue;
  Fenwick recency(n);
  std::vector<std::size_t> last_access(trace.id_space(), 0);
  std::vector<std::size_t> upcoming(trace.id_space(), NextUseIndex::kNever);
  // Max element = farthest next use; among ties, the oldest last access.
  using Key = std::pair<std::size_t, std::size_t>;
  std::set<std::pair<Key, ObjectId>> farthest;
  auto key_of = [&](ObjectId id) { return std::make_pair(Key{upcoming[id], n - last_access[id]}, id); };

  std::vector<double> samples;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& r = trace[i];
    if (queue.contains(r.id)) {
      farthest.erase(key_of(r.id));
      recency.add(last_access[r.id], -1);
      queue.move_to_front(r.id);
    } else {
      if (r.size > capacity) continue;
      if (queue.bytes() + r.size > capacity && !queue.empty()) {
        const auto victim = farthest.rbegin()->second;
        const auto from_tail = recency.prefix(last_access[victim]);
        samples.push_back(static_cast<double>(from_tail) / static_cast<double>(queue.size()));
        while (queue.bytes() + r.size > capacity) {
          const auto gone = queue.pop_back().id;
          farthest.erase(key_of(gone));
          recency.add(last_access[gone], -1);
        }
      }
      queue.push_front({r.id, r.size});
    }
    last_access[r.id] = i;
    upcoming[r.id] = next_use[i];
    recency.add(i, 1);
    farthest.insert(key_of(r.id));
  }
  if (samples.empty()) throw Error("eviction_position_ecdf: no replacement occurred");
  return Ecdf(std::move(samples));
}

double rear_fraction(const Ecdf& ecdf, double q) {
  if (ecdf.empty()) throw Error("rear_fraction: empty ECDF");
  return ecdf.quantile(q);
}

std::vector<double> windowed_bmr_series(const Trace& trace, CachePolicy& policy, std::uint64_t window) {
  if (window == 0) throw ConfigError("windowed_bmr_series: window must be >= 1");
  SimulationOptions options;
  options.window = window;
  options.record_evictions = false;
  const auto report = simulate(policy, trace, options);
  std::vector<double> series;
  series.reserve(report.windows.size());
  for (const auto& w : report.windows) series.push_back(bmr(w));
  return series;
}

}  // namespace cachelab
