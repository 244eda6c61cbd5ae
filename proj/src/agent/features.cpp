#include "cachelab/agent/features.hpp"

#include <algorithm>
#include <cmath>

namespace cachelab::agent {

FeatureRow make_feature_row(const ObjectStats& stats, const Clock& clock) {
  const std::uint64_t distance =
      stats.has_previous ? stats.last_index - stats.previous_index : clock.index - stats.last_index;
  const std::int64_t elapsed = stats.has_previous ? stats.last_time - stats.previous_time : clock.time - stats.last_time;
  FeatureRow row;
  row.frequency = std::log1p(static_cast<double>(stats.hits));
  row.reuse_distance = std::log1p(static_cast<double>(distance));
  row.reuse_time = std::log1p(static_cast<double>(std::max<std::int64_t>(0, elapsed)));
  row.size = std::log1p(static_cast<double>(stats.size));
  return row;
}

double FeatureScaling::normalize(std::size_t feature, double value) const {
  const double span = hi[feature] - lo[feature];
  if (!(span > 0.0)) return 0.0;
  return std::clamp((value - lo[feature]) / span, 0.0, 1.0);
}

std::size_t RearSectionState::valid_count() const {
  return static_cast<std::size_t>(std::count(valid.begin(), valid.end(), true));
}

std::vector<double> RearSectionState::encode(const FeatureScaling& scaling) const {
  std::vector<double> input(rows.size() * kFeaturesPerRow, kPaddingValue);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (!valid[r]) continue;
    const auto v = rows[r].values();
    for (std::size_t f = 0; f < kFeaturesPerRow; ++f) input[r * kFeaturesPerRow + f] = scaling.normalize(f, v[f]);
  }
  return input;
}

RearSectionState extract_features(std::span<const ObjectStats> tail_first, std::size_t n, const Clock& clock) {
  RearSectionState state;
  state.rows.resize(n);
  state.ids.assign(n, kNoObject);
  state.valid.assign(n, false);
  const auto filled = std::min(n, tail_first.size());
  for (std::size_t i = 0; i < filled; ++i) {
    state.rows[i] = make_feature_row(tail_first[i], clock);
    state.ids[i] = tail_first[i].id;
    state.valid[i] = true;
  }
  return state;
}

}  // namespace cachelab::agent
