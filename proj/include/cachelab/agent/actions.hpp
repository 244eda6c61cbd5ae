#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "cachelab/random.hpp"

namespace cachelab::agent {

// With probability epsilon a uniformly random unmasked index, otherwise the
// highest score (lowest index on ties). Masked entries are -infinity. Throws
// Error when every entry is masked.
std::size_t select_action(std::span<const double> scores, double epsilon, Rng& rng);
std::size_t select_action(std::span<const double> scores, double epsilon, std::uint64_t seed);

// Unmasked indices by descending score, lowest index first on ties, at most t.
std::vector<std::size_t> top_t_actions(std::span<const double> scores, std::size_t t);

}  // namespace cachelab::agent
