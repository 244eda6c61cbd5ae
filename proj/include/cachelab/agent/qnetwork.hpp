#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <limits>
#include <span>
#include <vector>

#include "cachelab/agent/features.hpp"

namespace cachelab::agent {

inline constexpr std::size_t kDefaultHiddenUnits = 512;
inline constexpr double kMaskedScore = -std::numeric_limits<double>::infinity();

// One-hidden-layer Q-network: input (4 features x N rows) -> ReLU hidden
// layer -> N action scores, plus the feature scaling it was trained with.
struct QPolicy {
  std::size_t rear_n = 0;
  std::size_t hidden = kDefaultHiddenUnits;
  Eigen::MatrixXd w1;  // hidden x input_width
  Eigen::VectorXd b1;  // hidden
  Eigen::MatrixXd w2;  // rear_n x hidden
  Eigen::VectorXd b2;  // rear_n
  FeatureScaling scaling;
  // Incremented by every training run that produced this policy.
  std::uint64_t generation = 0;

  std::size_t input_width() const { return rear_n * kFeaturesPerRow; }
  std::size_t parameter_count() const;

  static QPolicy zeros(std::size_t rear_n, std::size_t hidden = kDefaultHiddenUnits);
  // He-uniform first layer, small uniform output layer.
  static QPolicy random(std::size_t rear_n, std::uint64_t seed, std::size_t hidden = kDefaultHiddenUnits);

  // Raw scores for an encoded input.
  Eigen::VectorXd scores(const Eigen::VectorXd& input) const;

  // Exact equality of dimensions, weights and scaling.
  bool same_parameters(const QPolicy& other) const;
};

// Scores for a state; padding rows get kMaskedScore. Throws ConfigError when
// the state width differs from the policy's N.
std::vector<double> forward(const QPolicy& policy, const RearSectionState& state);

// One replay entry. States are stored encoded.
struct Transition {
  std::vector<double> state;
  std::size_t action = 0;
  double reward = 0.0;
  std::vector<double> next_state;
  std::vector<bool> next_valid;
  bool terminal = true;
};

// Parameter-shaped buffers (gradients, optimizer moments).
struct QGradient {
  Eigen::MatrixXd w1;
  Eigen::VectorXd b1;
  Eigen::MatrixXd w2;
  Eigen::VectorXd b2;

  static QGradient zeros_like(const QPolicy& policy);
};

// Mean over the batch of 0.5 * (Q(s, a) - target)^2 and its gradient with
// respect to every parameter, by backpropagation. `targets` are held fixed.
double squared_error_loss(const QPolicy& policy, std::span<const std::vector<double>> inputs,
                          std::span<const std::size_t> actions, std::span<const double> targets,
                          QGradient* gradient);

// Adam moments; step sizes adapt per weight.
class AdamOptimizer {
 public:
  explicit AdamOptimizer(const QPolicy& shape, double beta1 = 0.9, double beta2 = 0.999, double epsilon = 1e-8);
  void apply(QPolicy& policy, const QGradient& gradient, double learning_rate);
  std::uint64_t steps() const { return steps_; }

 private:
  QGradient m_;
  QGradient v_;
  double beta1_;
  double beta2_;
  double epsilon_;
  std::uint64_t steps_ = 0;
};

struct TrainStepResult {
  double loss = 0.0;
};

// One DQN update on `online` in place: target = r for terminal transitions,
// else r + discount * max over valid actions of target_net(s'). Throws Error
// when the loss is not finite.
TrainStepResult q_train_step(QPolicy& online, const QPolicy& target_net, AdamOptimizer& optimizer,
                             std::span<const Transition* const> batch, double discount, double learning_rate);

// Value-returning form: copies `policy`, updates the copy.
std::pair<QPolicy, double> q_train_step(const QPolicy& policy, const QPolicy& target_net, AdamOptimizer& optimizer,
                                        std::span<const Transition> batch, double discount, double learning_rate);

// Little-endian binary format: magic "CLQP", format version, N, hidden,
// features per row, generation, scaling (lo then hi), then w1, b1, w2, b2 with
// matrices row-major.
inline constexpr std::uint32_t kPolicyFormatVersion = 1;

void save_policy(const QPolicy& policy, std::ostream& out);
// Throws FormatError on a bad magic, a different format version, inconsistent
// dimensions or truncation.
QPolicy load_policy(std::istream& in);
void save_policy_file(const QPolicy& policy, const std::filesystem::path& path);
QPolicy load_policy_file(const std::filesystem::path& path);

}  // namespace cachelab::agent
