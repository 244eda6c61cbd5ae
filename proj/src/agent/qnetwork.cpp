#include "cachelab/agent/qnetwork.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "cachelab/error.hpp"

namespace cachelab::agent {

std::size_t QPolicy::parameter_count() const {
  return static_cast<std::size_t>(w1.size() + b1.size() + w2.size() + b2.size());
}

QPolicy QPolicy::zeros(std::size_t rear_n, std::size_t hidden) {
  if (rear_n == 0 || hidden == 0) throw ConfigError("QPolicy: N and hidden width must be positive");
  QPolicy p;
  p.rear_n = rear_n;
  p.hidden = hidden;
  p.w1 = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(hidden), static_cast<Eigen::Index>(p.input_width()));
  p.b1 = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(hidden));
  p.w2 = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rear_n), static_cast<Eigen::Index>(hidden));
  p.b2 = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(rear_n));
  return p;
}

QPolicy QPolicy::random(std::size_t rear_n, std::uint64_t seed, std::size_t hidden) {
  QPolicy p = zeros(rear_n, hidden);
  std::mt19937_64 rng(seed);
  const double in_limit = std::sqrt(6.0 / static_cast<double>(p.input_width()));
  const double out_limit = std::sqrt(1.0 / static_cast<double>(hidden));
  std::uniform_real_distribution<double> first(-in_limit, in_limit);
  std::uniform_real_distribution<double> second(-out_limit, out_limit);
  for (Eigen::Index r = 0; r < p.w1.rows(); ++r)
    for (Eigen::Index c = 0; c < p.w1.cols(); ++c) p.w1(r, c) = first(rng);
  for (Eigen::Index r = 0; r < p.w2.rows(); ++r)
    for (Eigen::Index c = 0; c < p.w2.cols(); ++c) p.w2(r, c) = second(rng);
  return p;
}

Eigen::VectorXd QPolicy::scores(const Eigen::VectorXd& input) const {
  const Eigen::VectorXd h = (w1 * input + b1).cwiseMax(0.0);
  return w2 * h + b2;
}

bool QPolicy::same_parameters(const QPolicy& o) const {
  return rear_n == o.rear_n && hidden == o.hidden && w1 == o.w1 && b1 == o.b1 && w2 == o.w2 && b2 == o.b2 &&
         scaling == o.scaling;
}

std::vector<double> forward(const QPolicy& policy, const RearSectionState& state) {
  if (state.width() != policy.rear_n) {
    throw ConfigError("forward: state has " + std::to_string(state.width()) + " rows, policy expects " +
                      std::to_string(policy.rear_n));
  }
  const auto encoded = state.encode(policy.scaling);
  const Eigen::VectorXd q = policy.scores(Eigen::Map<const Eigen::VectorXd>(
      encoded.data(), static_cast<Eigen::Index>(encoded.size())));
  std::vector<double> out(q.data(), q.data() + q.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (!state.valid[i]) out[i] = kMaskedScore;
  }
  return out;
}

QGradient QGradient::zeros_like(const QPolicy& p) {
  QGradient g;
  g.w1 = Eigen::MatrixXd::Zero(p.w1.rows(), p.w1.cols());
  g.b1 = Eigen::VectorXd::Zero(p.b1.size());
  g.w2 = Eigen::MatrixXd::Zero(p.w2.rows(), p.w2.cols());
  g.b2 = Eigen::VectorXd::Zero(p.b2.size());
  return g;
}

double squared_error_loss(const QPolicy& policy, std::span<const std::vector<double>> inputs,
                          std::span<const std::size_t> actions, std::span<const double> targets,
                          QGradient* gradient) {
  const auto batch = inputs.size();
  if (batch == 0 || actions.size() != batch || targets.size() != batch) {
    throw ConfigError("squared_error_loss: batch shape mismatch");
  }
  const auto width = static_cast<Eigen::Index>(policy.input_width());
  const auto cols = static_cast<Eigen::Index>(batch);
  Eigen::MatrixXd x(width, cols);
  for (std::size_t s = 0; s < batch; ++s) {
    if (inputs[s].size() != policy.input_width()) throw ConfigError("squared_error_loss: input width mismatch");
    if (actions[s] >= policy.rear_n) throw ConfigError("squared_error_loss: action out of range");
    x.col(static_cast<Eigen::Index>(s)) = Eigen::Map<const Eigen::VectorXd>(inputs[s].data(), width);
  }
  const Eigen::MatrixXd pre = (policy.w1 * x).colwise() + policy.b1;
  const Eigen::MatrixXd h = pre.cwiseMax(0.0);
  const double scale = 1.0 / static_cast<double>(batch);
  // Only the taken action's output carries error.
  Eigen::MatrixXd delta = Eigen::MatrixXd::Zero(policy.w2.rows(), cols);
  double loss = 0.0;
  for (std::size_t s = 0; s < batch; ++s) {
    const auto a = static_cast<Eigen::Index>(actions[s]);
    const auto c = static_cast<Eigen::Index>(s);
    const double q = policy.w2.row(a).dot(h.col(c)) + policy.b2(a);
    const double err = q - targets[s];
    loss += 0.5 * err * err * scale;
    delta(a, c) = err * scale;
  }
  if (gradient == nullptr) return loss;
  gradient->w2.noalias() = delta * h.transpose();
  gradient->b2 = delta.rowwise().sum();
  const Eigen::MatrixXd dpre =
      (policy.w2.transpose() * delta).cwiseProduct((pre.array() > 0.0).cast<double>().matrix());
  gradient->w1.noalias() = dpre * x.transpose();
  gradient->b1 = dpre.rowwise().sum();
  return loss;
}

AdamOptimizer::AdamOptimizer(const QPolicy& shape, double beta1, double beta2, double epsilon)
    : m_(QGradient::zeros_like(shape)),
      v_(QGradient::zeros_like(shape)),
      beta1_(beta1),
      beta2_(beta2),
      epsilon_(epsilon) {}

namespace {

template <typename Param>
void adam_update(Param& param, const Param& grad, Param& m, Param& v, double b1, double b2, double eps,
                 double step_size) {
  m = b1 * m + (1.0 - b1) * grad;
  v = b2 * v + (1.0 - b2) * grad.cwiseProduct(grad);
  param.array() -= step_size * m.array() / (v.array().sqrt() + eps);
}

}  // namespace

void AdamOptimizer::apply(QPolicy& policy, const QGradient& g, double learning_rate) {
  ++steps_;
  const double t = static_cast<double>(steps_);
  const double step_size = learning_rate * std::sqrt(1.0 - std::pow(beta2_, t)) / (1.0 - std::pow(beta1_, t));
  adam_update(policy.w1, g.w1, m_.w1, v_.w1, beta1_, beta2_, epsilon_, step_size);
  adam_update(policy.b1, g.b1, m_.b1, v_.b1, beta1_, beta2_, epsilon_, step_size);
  adam_update(policy.w2, g.w2, m_.w2, v_.w2, beta1_, beta2_, epsilon_, step_size);
  adam_update(policy.b2, g.b2, m_.b2, v_.b2, beta1_, beta2_, epsilon_, step_size);
}

TrainStepResult q_train_step(QPolicy& online, const QPolicy& target_net, AdamOptimizer& optimizer,
                             std::span<const Transition* const> batch, double discount, double learning_rate) {
  if (batch.empty()) throw ConfigError("q_train_step: empty batch");
  std::vector<std::vector<double>> inputs;
  std::vector<std::size_t> actions;
  std::vector<double> targets;
  inputs.reserve(batch.size());
  // Bootstrapped values for all non-terminal transitions in one product.
  std::vector<std::size_t> open;
  for (std::size_t s = 0; s < batch.size(); ++s) {
    if (!batch[s]->terminal) open.push_back(s);
  }
  Eigen::MatrixXd next_q;
  if (!open.empty()) {
    Eigen::MatrixXd next(static_cast<Eigen::Index>(target_net.input_width()), static_cast<Eigen::Index>(open.size()));
    for (std::size_t j = 0; j < open.size(); ++j) {
      const auto& ns = batch[open[j]]->next_state;
      if (ns.size() != target_net.input_width()) throw ConfigError("q_train_step: next state width mismatch");
      next.col(static_cast<Eigen::Index>(j)) = Eigen::Map<const Eigen::VectorXd>(ns.data(), next.rows());
    }
    next_q = target_net.w2 * ((target_net.w1 * next).colwise() + target_net.b1).cwiseMax(0.0);
    next_q.colwise() += target_net.b2;
  }
  std::size_t j = 0;
  for (std::size_t s = 0; s < batch.size(); ++s) {
    const auto* t = batch[s];
    double y = t->reward;
    if (!t->terminal) {
      const auto col = static_cast<Eigen::Index>(j++);
      double best = kMaskedScore;
      for (Eigen::Index i = 0; i < next_q.rows(); ++i) {
        if (t->next_valid[static_cast<std::size_t>(i)]) best = std::max(best, next_q(i, col));
      }
      if (best != kMaskedScore) y += discount * best;
    }
    inputs.push_back(t->state);
    actions.push_back(t->action);
    targets.push_back(y);
  }
  QGradient grad;
  const double loss = squared_error_loss(online, inputs, actions, targets, &grad);
  if (!std::isfinite(loss)) {
    throw Error("q_train_step: non-finite loss (" + std::to_string(loss) + ") after " +
                std::to_string(optimizer.steps()) + " steps");
  }
  optimizer.apply(online, grad, learning_rate);
  return {loss};
}

std::pair<QPolicy, double> q_train_step(const QPolicy& policy, const QPolicy& target_net, AdamOptimizer& optimizer,
                                        std::span<const Transition> batch, double discount, double learning_rate) {
  QPolicy updated = policy;
  std::vector<const Transition*> ptrs;
  ptrs.reserve(batch.size());
  for (const auto& t : batch) ptrs.push_back(&t);
  const auto result = q_train_step(updated, target_net, optimizer, ptrs, discount, learning_rate);
  return {std::move(updated), result.loss};
}

}  // namespace cachelab::agent
