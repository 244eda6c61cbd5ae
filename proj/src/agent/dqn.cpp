#include "cachelab/agent/dqn.hpp"

#include <algorithm>

#include "cachelab/agent/actions.hpp"
#include "cachelab/error.hpp"

namespace cachelab::agent {

ReplayMemory::ReplayMemory(std::size_t capacity) : capacity_(capacity) {
  if (capacity == 0) throw ConfigError("replay memory capacity must be positive");
}

void ReplayMemory::push(Transition transition) {
  if (items_.size() < capacity_) {
    items_.push_back(std::move(transition));
  } else {
    items_[next_] = std::move(transition);
  }
  next_ = (next_ + 1) % capacity_;
}

std::vector<const Transition*> ReplayMemory::sample(std::size_t batch, Rng& rng) const {
  std::vector<const Transition*> out;
  if (items_.empty()) return out;
  std::uniform_int_distribution<std::size_t> pick(0, items_.size() - 1);
  const auto n = std::min(batch, items_.size());
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(&items_[pick(rng)]);
  return out;
}

void DqnConfig::validate() const {
  if (replay_capacity == 0) throw ConfigError("dqn: replay_capacity must be positive");
  if (batch_size == 0) throw ConfigError("dqn: batch_size must be positive");
  if (discount < 0.0 || discount > 1.0) throw ConfigError("dqn: discount must be in [0, 1]");
  if (epsilon_start < 0.0 || epsilon_start > 1.0 || epsilon_end < 0.0 || epsilon_end > 1.0) {
    throw ConfigError("dqn: epsilon values must be in [0, 1]");
  }
  if (exploration_fraction < 0.0 || exploration_fraction > 1.0) {
    throw ConfigError("dqn: exploration_fraction must be in [0, 1]");
  }
  if (target_sync == 0) throw ConfigError("dqn: target_sync must be positive");
  if (learning_rate < 0.0) throw ConfigError("dqn: learning_rate must be non-negative");
  if (train_every == 0) throw ConfigError("dqn: train_every must be positive");
}

DqnConfig DqnConfig::from_config(const KeyValueConfig& kv, const std::string& p) {
  DqnConfig c;
  c.replay_capacity = kv.get_uint(p + "replay_capacity", c.replay_capacity);
  c.batch_size = kv.get_uint(p + "batch_size", c.batch_size);
  c.discount = kv.get_double(p + "discount", c.discount);
  c.epsilon_start = kv.get_double(p + "epsilon_start", c.epsilon_start);
  c.epsilon_end = kv.get_double(p + "epsilon_end", c.epsilon_end);
  c.exploration_fraction = kv.get_double(p + "exploration_fraction", c.exploration_fraction);
  c.target_sync = kv.get_uint(p + "target_sync", c.target_sync);
  c.learning_rate = kv.get_double(p + "learning_rate", c.learning_rate);
  c.train_every = kv.get_uint(p + "train_every", c.train_every);
  c.validate();
  return c;
}

DqnLearner::DqnLearner(QPolicy initial, const DqnConfig& config, std::uint64_t seed)
    : config_(config),
      online_(std::move(initial)),
      target_(online_),
      optimizer_(online_),
      memory_(config.replay_capacity),
      rng_(seed) {
  config_.validate();
}

double DqnLearner::epsilon() const {
  const double horizon = config_.exploration_fraction * static_cast<double>(planned_);
  if (horizon <= 0.0) return config_.epsilon_end;
  const double progress = static_cast<double>(decisions_) / horizon;
  if (progress >= 1.0) return config_.epsilon_end;
  return config_.epsilon_start + (config_.epsilon_end - config_.epsilon_start) * progress;
}

std::size_t DqnLearner::act(const RearSectionState& state) {
  const double eps = epsilon();
  ++decisions_;
  if (eps >= 1.0) {
    // Skip the forward pass when the choice is uniform anyway.
    std::vector<double> scores(state.width(), 0.0);
    for (std::size_t i = 0; i < scores.size(); ++i) {
      if (!state.valid[i]) scores[i] = kMaskedScore;
    }
    return select_action(scores, 1.0, rng_);
  }
  const auto scores = forward(online_, state);
  return select_action(scores, eps, rng_);
}

void DqnLearner::remember(Transition transition) {
  memory_.push(std::move(transition));
  ++stored_;
  if (stored_ % config_.train_every == 0) train_once();
}

void DqnLearner::train_once() {
  const auto batch = memory_.sample(config_.batch_size, rng_);
  if (batch.empty()) return;
  last_loss_ = q_train_step(online_, target_, optimizer_, batch, config_.discount, config_.learning_rate).loss;
  ++gradient_steps_;
  if (gradient_steps_ % config_.target_sync == 0) target_ = online_;
}

}  // namespace cachelab::agent
