#include "cachelab/training_set.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "cachelab/error.hpp"
#include "cachelab/log.hpp"
#include "cachelab/random.hpp"

namespace cachelab {

double ks_distance(const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b) {
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double best = 0.0;
  while (i < a.size() && j < b.size()) {
    const auto x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == x) ++i;
    while (j < b.size() && b[j] == x) ++j;
    best = std::max(best, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return best;
}

TrainingSet extract_training_set(const Trace& trace, const TrainingSetOptions& options) {
  if (trace.empty()) throw ConfigError("extract_training_set: empty trace");
  if (!(options.sampling_rate > 0.0 && options.sampling_rate <= 1.0)) {
    throw ConfigError("extract_training_set: sampling_rate must lie in (0, 1]");
  }
  if (options.max_attempts < 1) throw ConfigError("extract_training_set: max_attempts must be >= 1");

  // Unique ids in order of first appearance.
  std::vector<ObjectId> unique;
  {
    std::vector<bool> seen(trace.id_space(), false);
    for (const auto& r : trace.requests()) {
      if (!seen[r.id]) {
        seen[r.id] = true;
        unique.push_back(r.id);
      }
    }
  }
  const auto k = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::llround(options.sampling_rate * static_cast<double>(unique.size()))));

  std::vector<std::uint64_t> full_sizes;
  full_sizes.reserve(trace.size());
  for (const auto& r : trace.requests()) full_sizes.push_back(r.size);
  std::sort(full_sizes.begin(), full_sizes.end());

  std::vector<ObjectId> best_ids;
  double best_ks = 2.0;
  int attempts = 0;
  std::vector<bool> member(trace.id_space());
  std::vector<std::uint64_t> sample_sizes;
  for (int attempt = 0; attempt < options.max_attempts; ++attempt) {
    ++attempts;
    Reservoir<ObjectId> reservoir(k, derive_seed(options.seed, static_cast<std::uint64_t>(attempt)));
    for (auto id : unique) reservoir.observe(id);

    std::fill(member.begin(), member.end(), false);
    for (auto id : reservoir.items()) member[id] = true;
    sample_sizes.clear();
    for (const auto& r : trace.requests()) {
      if (member[r.id]) sample_sizes.push_back(r.size);
    }
    std::sort(sample_sizes.begin(), sample_sizes.end());
    const double ks = ks_distance(sample_sizes, full_sizes);
    if (ks < best_ks) {
      best_ks = ks;
      best_ids = reservoir.items();
    }
    if (ks <= options.ks_tolerance) break;
  }

  TrainingSet out;
  out.sampled_ids = best_ids;
  std::sort(out.sampled_ids.begin(), out.sampled_ids.end());
  out.ks_distance = best_ks;
  out.attempts = attempts;
  out.within_tolerance = best_ks <= options.ks_tolerance;
  if (!out.within_tolerance) {
    log::warning("training set size distribution off by KS " + std::to_string(best_ks) + " after " +
                 std::to_string(attempts) + " attempts");
  }

  std::fill(member.begin(), member.end(), false);
  for (auto id : out.sampled_ids) member[id] = true;
  out.records = trace.slice(0, 0);
  out.size_histogram.assign(64, 0);
  for (const auto& r : trace.requests()) {
    if (!member[r.id]) continue;
    out.records.push(r);
    ++out.size_histogram[std::bit_width(r.size) - 1];
  }
  return out;
}

}  // namespace cachelab
