#include "cachelab/agent/actions.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "cachelab/error.hpp"

namespace cachelab::agent {

namespace {

bool masked(double score) { return std::isinf(score) && score < 0.0; }

std::vector<std::size_t> unmasked_indices(std::span<const double> scores) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (!masked(scores[i])) out.push_back(i);
  }
  if (out.empty()) throw Error("action selection: every action is masked");
  return out;
}

}  // namespace

std::size_t select_action(std::span<const double> scores, double epsilon, Rng& rng) {
  const auto legal = unmasked_indices(scores);
  if (epsilon > 0.0) {
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    if (coin(rng) < epsilon) {
      std::uniform_int_distribution<std::size_t> pick(0, legal.size() - 1);
      return legal[pick(rng)];
    }
  }
  std::size_t best = legal.front();
  for (const auto i : legal) {
    if (scores[i] > scores[best]) best = i;
  }
  return best;
}

std::size_t select_action(std::span<const double> scores, double epsilon, std::uint64_t seed) {
  Rng rng(seed);
  return select_action(scores, epsilon, rng);
}

std::vector<std::size_t> top_t_actions(std::span<const double> scores, std::size_t t) {
  auto legal = unmasked_indices(scores);
  std::stable_sort(legal.begin(), legal.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  if (legal.size() > t) legal.resize(t);
  return legal;
}

}  // namespace cachelab::agent
