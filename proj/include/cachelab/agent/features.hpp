#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "cachelab/trace.hpp"

namespace cachelab::agent {

inline constexpr std::size_t kFeaturesPerRow = 4;
// Encoded value of every feature in a padding row.
inline constexpr double kPaddingValue = -1.0;

// Per-object bookkeeping the cache keeps for feature extraction.
struct ObjectStats {
  ObjectId id = kNoObject;
  std::uint64_t size = 1;
  // Hits since the object was last admitted.
  std::uint64_t hits = 0;
  std::uint64_t last_index = 0;
  std::int64_t last_time = 0;
  // Access before the last one, if the object was ever requested before.
  bool has_previous = false;
  std::uint64_t previous_index = 0;
  std::int64_t previous_time = 0;
};

// Position of the simulation: request index and trace timestamp.
struct Clock {
  std::uint64_t index = 0;
  std::int64_t time = 0;
};

// log(1 + x) features. Reuse distance and time are the gaps between the two
// most recent accesses; for an object seen once they are the gaps since that
// access.
struct FeatureRow {
  double frequency = 0.0;
  double reuse_distance = 0.0;
  double reuse_time = 0.0;
  double size = 0.0;

  std::array<double, kFeaturesPerRow> values() const { return {frequency, reuse_distance, reuse_time, size}; }
};

FeatureRow make_feature_row(const ObjectStats& stats, const Clock& clock);

// Min-max bounds of each log-scaled feature, frozen when a policy is trained.
struct FeatureScaling {
  std::array<double, kFeaturesPerRow> lo{0.0, 0.0, 0.0, 0.0};
  std::array<double, kFeaturesPerRow> hi{1.0, 1.0, 1.0, 1.0};

  // Maps into [0, 1], clamping values outside the trained range.
  double normalize(std::size_t feature, double value) const;

  friend bool operator==(const FeatureScaling&, const FeatureScaling&) = default;
};

// Fixed-width view of the queue tail; row 0 is the tail object.
struct RearSectionState {
  std::vector<FeatureRow> rows;
  std::vector<ObjectId> ids;
  // false marks padding rows, which may not be chosen.
  std::vector<bool> valid;

  std::size_t width() const { return rows.size(); }
  std::size_t valid_count() const;
  // Normalized network input of length kFeaturesPerRow * width(); padding
  // rows encode as kPaddingValue.
  std::vector<double> encode(const FeatureScaling& scaling) const;
};

// `tail_first` lists the queue from its tail; only the first n entries are
// used and missing ones become padding.
RearSectionState extract_features(std::span<const ObjectStats> tail_first, std::size_t n, const Clock& clock);

}  // namespace cachelab::agent
