#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "cachelab/agent/features.hpp"
#include "cachelab/agent/qnetwork.hpp"
#include "cachelab/kv_config.hpp"
#include "cachelab/random.hpp"

namespace cachelab::agent {

// Fixed-capacity ring of transitions; the oldest entry is overwritten.
class ReplayMemory {
 public:
  explicit ReplayMemory(std::size_t capacity);

  void push(Transition transition);
  std::size_t size() const { return items_.size(); }
  std::size_t capacity() const { return capacity_; }
  bool empty() const { return items_.empty(); }
  const Transition& operator[](std::size_t i) const { return items_[i]; }
  // Uniform draw with replacement of min(batch, size()) entries.
  std::vector<const Transition*> sample(std::size_t batch, Rng& rng) const;

 private:
  std::size_t capacity_;
  std::size_t next_ = 0;
  std::vector<Transition> items_;
};

struct DqnConfig {
  std::size_t replay_capacity = 100000;
  std::size_t batch_size = 64;
  double discount = 0.95;
  double epsilon_start = 1.0;
  double epsilon_end = 0.05;
  // Share of the planned decisions over which epsilon decays linearly.
  double exploration_fraction = 0.2;
  std::size_t target_sync = 1000;
  double learning_rate = 1e-3;
  // Gradient steps are taken every `train_every` stored transitions.
  std::size_t train_every = 1;

  void validate() const;
  // Reads `<prefix>replay_capacity`, `<prefix>batch_size`, ... when present.
  static DqnConfig from_config(const KeyValueConfig& config, const std::string& prefix);
};

// Online network, target network, optimizer and replay memory for one
// training run. The returned policy is a fresh value; nothing is shared.
class DqnLearner {
 public:
  DqnLearner(QPolicy initial, const DqnConfig& config, std::uint64_t seed);

  // Number of decisions the run expects; drives the epsilon schedule.
  void set_planned_decisions(std::size_t n) { planned_ = n; }
  double epsilon() const;

  // Epsilon-greedy action for `state`; counts as one decision.
  std::size_t act(const RearSectionState& state);
  // Stores the transition and takes a gradient step when due.
  void remember(Transition transition);

  const QPolicy& policy() const { return online_; }
  const ReplayMemory& memory() const { return memory_; }
  std::size_t decisions() const { return decisions_; }
  std::size_t gradient_steps() const { return gradient_steps_; }
  std::optional<double> last_loss() const { return last_loss_; }

 private:
  void train_once();

  DqnConfig config_;
  QPolicy online_;
  QPolicy target_;
  AdamOptimizer optimizer_;
  ReplayMemory memory_;
  Rng rng_;
  std::size_t planned_ = 0;
  std::size_t decisions_ = 0;
  std::size_t stored_ = 0;
  std::size_t gradient_steps_ = 0;
  std::optional<double> last_loss_;
};

}  // namespace cachelab::agent
