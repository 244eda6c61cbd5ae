#include <algorithm>
#include <chrono>
#include <cmath>
#include <unordered_map>

#include "cachelab/agent/actions.hpp"
#include "cachelab/error.hpp"
#include "cachelab/log.hpp"
#include "cachelab/lrubase/lrubase.hpp"
#include "cachelab/policies.hpp"
#include "cachelab/random.hpp"
#include "cachelab/training_set.hpp"

namespace cachelab {

void LruBaseConfig::validate() const {
  if (rear_fraction < 0.0 || rear_fraction > 1.0) throw ConfigError("lrubase: rear_fraction must be in [0, 1]");
  if (rear_quantile <= 0.0 || rear_quantile > 1.0) throw ConfigError("lrubase: rear_quantile must be in (0, 1]");
  if (min_rear_n == 0 || max_rear_n < min_rear_n) throw ConfigError("lrubase: need 1 <= min_rear_n <= max_rear_n");
  if (top_t == 0) throw ConfigError("lrubase: top_t must be at least 1");
  if (hidden == 0) throw ConfigError("lrubase: hidden must be at least 1");
  if (epochs == 0) throw ConfigError("lrubase: epochs must be at least 1");
  if (!(sampling_rate > 0.0 && sampling_rate <= 1.0)) throw ConfigError("lrubase: sampling_rate must be in (0, 1]");
  reward.validate();
  dqn.validate();
  schedule.validate();
}

LruBaseConfig LruBaseConfig::from_config(const KeyValueConfig& kv) {
  const std::string p = "lrubase.";
  LruBaseConfig c;
  c.rear_n = kv.get_uint(p + "rear_n", c.rear_n);
  c.rear_fraction = kv.get_double(p + "rear_fraction", c.rear_fraction);
  c.rear_quantile = kv.get_double(p + "rear_quantile", c.rear_quantile);
  c.min_rear_n = kv.get_uint(p + "min_rear_n", c.min_rear_n);
  c.max_rear_n = kv.get_uint(p + "max_rear_n", c.max_rear_n);
  c.warm_replacements = kv.get_uint(p + "warm_replacements", c.warm_replacements);
  c.top_t = kv.get_uint(p + "top_t", c.top_t);
  c.hidden = kv.get_uint(p + "hidden", c.hidden);
  c.epochs = kv.get_uint(p + "epochs", c.epochs);
  c.sampling_rate = kv.get_double(p + "sampling_rate", c.sampling_rate);
  c.reward.alpha = kv.get_double(p + "alpha", c.reward.alpha);
  c.reward.beta = kv.get_double(p + "beta", c.reward.beta);
  c.reward.gamma = kv.get_double(p + "gamma", c.reward.gamma);
  c.dqn = agent::DqnConfig::from_config(kv, p);
  c.schedule = TimeRegionSchedule::from_config(kv, p);
  c.agent_enabled = kv.get_bool(p + "agent_enabled", c.agent_enabled);
  c.seed = kv.get_uint(p + "seed", kv.get_uint("seed", c.seed));
  c.validate();
  return c;
}

agent::FeatureScaling feature_scaling_for(const Trace& records) {
  agent::FeatureScaling s;
  if (records.empty()) return s;
  std::unordered_map<ObjectId, std::uint64_t> counts;
  std::uint64_t max_count = 0;
  std::uint64_t min_size = UINT64_MAX;
  std::uint64_t max_size = 0;
  for (const auto& r : records.requests()) {
    max_count = std::max(max_count, ++counts[r.id]);
    min_size = std::min(min_size, r.size);
    max_size = std::max(max_size, r.size);
  }
  const auto span = records.requests().back().timestamp - records.requests().front().timestamp;
  s.lo = {0.0, 0.0, 0.0, std::log1p(static_cast<double>(min_size))};
  s.hi = {std::log1p(static_cast<double>(max_count)), std::log1p(static_cast<double>(records.size())),
          std::log1p(static_cast<double>(std::max<std::int64_t>(span, 1))), std::log1p(static_cast<double>(max_size))};
  if (!(s.hi[3] > s.lo[3])) s.hi[3] = s.lo[3] + 1.0;
  return s;
}

namespace {

// Turns every agent decision of the training cache into a learner step and
// scores the previous decision with the key-step reward.
class TrainingAdvisor final : public EvictionAdvisor {
 public:
  TrainingAdvisor(agent::DqnLearner& learner, const agent::RewardParams& params, const Counters& totals)
      : learner_(learner), params_(params), totals_(totals) {}

  std::vector<std::size_t> rank(const agent::RearSectionState& state) override {
    auto encoded = state.encode(learner_.policy().scaling);
    if (pending_) settle(encoded, state.valid);
    if (!episode_open_) open_episode();
    const auto action = learner_.act(state);
    pending_state_ = std::move(encoded);
    pending_action_ = action;
    pending_ = true;
    return {action};
  }

 private:
  void open_episode() {
    base_ = totals_;
    b0_ = bmr(totals_);
    o0_ = omr(totals_);
    b_prev_ = b0_;
    o_prev_ = o0_;
    episode_open_ = true;
  }

  void settle(const std::vector<double>& next_state, const std::vector<bool>& next_valid) {
    Counters episode = totals_;
    episode.requests -= base_.requests;
    episode.hits -= base_.hits;
    episode.bytes_requested -= base_.bytes_requested;
    episode.bytes_hit -= base_.bytes_hit;
    // Several decisions within one request see no new traffic.
    const double b_i = episode.requests == 0 ? b_prev_ : bmr(episode);
    const double o_i = episode.requests == 0 ? o_prev_ : omr(episode);
    const auto result = agent::reward({b_i, b_prev_, b0_, o_i, o_prev_, o0_}, params_);
    pending_ = false;
    switch (result.control) {
      case agent::StepControl::kDiscardTerminal:
        episode_open_ = false;
        return;
      case agent::StepControl::kStoreTerminalKeyStep:
        learner_.remember({std::move(pending_state_), pending_action_, result.r, {}, {}, true});
        episode_open_ = false;
        return;
      case agent::StepControl::kContinue:
        learner_.remember({std::move(pending_state_), pending_action_, result.r, next_state, next_valid, false});
        b_prev_ = b_i;
        o_prev_ = o_i;
        return;
    }
  }

  agent::DqnLearner& learner_;
  agent::RewardParams params_;
  const Counters& totals_;
  bool episode_open_ = false;
  Counters base_;
  double b0_ = 1.0, o0_ = 1.0, b_prev_ = 1.0, o_prev_ = 1.0;
  bool pending_ = false;
  std::vector<double> pending_state_;
  std::size_t pending_action_ = 0;
};

std::uint64_t lru_evictions(const Trace& records, std::uint64_t capacity) {
  LruPolicy lru(capacity);
  std::uint64_t n = 0;
  for (const auto& r : records.requests()) n += lru.access(r).evicted.size();
  return n;
}

}  // namespace

RegionTraining train_region(const Trace& window, std::uint64_t capacity, const agent::QPolicy* initial,
                            const LruBaseConfig& config, std::uint64_t seed) {
  const auto started = std::chrono::steady_clock::now();
  RegionTraining out;
  if (initial != nullptr) out.policy = *initial;
  if (window.empty()) {
    log::warning("train_region: empty training window, keeping the prior policy");
    return out;
  }
  TrainingSetOptions sampling;
  sampling.sampling_rate = config.sampling_rate;
  sampling.seed = derive_seed(seed, 1);
  const auto set = extract_training_set(window, sampling);
  const Trace& records = set.records;
  out.training_requests = records.size();

  const double fraction =
      static_cast<double>(records.unique_bytes()) / static_cast<double>(std::max<std::uint64_t>(1, window.unique_bytes()));
  out.scaled_capacity = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::llround(fraction * capacity)));

  agent::QPolicy start;
  if (initial != nullptr) {
    start = *initial;
  } else {
    start = agent::QPolicy::random(config.rear_n, derive_seed(seed, 2), config.hidden);
    start.scaling = feature_scaling_for(records);
  }
  if (start.rear_n != config.rear_n) throw ConfigError("train_region: initial policy N differs from config");

  agent::DqnLearner learner(std::move(start), config.dqn, derive_seed(seed, 3));
  const auto evictions = lru_evictions(records, out.scaled_capacity) * config.epochs;
  learner.set_planned_decisions(evictions > config.warm_replacements ? evictions - config.warm_replacements : 0);

  LruBaseCache cache(out.scaled_capacity, config.rear_n, 1, config.warm_replacements);
  Counters totals;
  TrainingAdvisor advisor(learner, config.reward, totals);
  cache.set_advisor(&advisor);
  const auto& reqs = records.requests();
  const std::int64_t epoch_shift = reqs.empty() ? 0 : reqs.back().timestamp - reqs.front().timestamp + 1;
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    for (auto r : reqs) {
      r.timestamp += static_cast<std::int64_t>(epoch) * epoch_shift;
      totals.record(r.size, cache.contains(r.id));
      cache.access(r);
    }
  }
  out.decisions = learner.decisions();
  out.stored_transitions = learner.memory().size();
  out.gradient_steps = learner.gradient_steps();
  if (learner.decisions() == 0) {
    log::warning("train_region: the training set never passed the LRU warm threshold (" +
                 std::to_string(records.size()) + " sampled requests); policy left untrained");
  }
  agent::QPolicy trained = learner.policy();
  trained.generation = (initial != nullptr ? initial->generation : 0) + 1;
  out.policy = std::move(trained);
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return out;
}

}  // namespace cachelab
