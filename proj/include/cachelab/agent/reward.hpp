#pragma once

namespace cachelab::agent {

struct RewardParams {
  double alpha = 0.4;
  double beta = 0.4;
  double gamma = 0.2;

  // Throws ConfigError unless all weights are non-negative and sum to 1.
  void validate() const;
};

// Miss ratios at the current step (i), the previous step and episode start.
struct RewardInputs {
  double b_i = 1.0;
  double b_prev = 1.0;
  double b_0 = 1.0;
  double o_i = 1.0;
  double o_prev = 1.0;
  double o_0 = 1.0;
};

enum class StepControl {
  kDiscardTerminal,
  kStoreTerminalKeyStep,
  kContinue,
};

const char* to_string(StepControl control);

struct RewardResult {
  double r = 0.0;
  double delta_b = 0.0;
  double delta_o = 0.0;
  double delta_b0 = 0.0;
  double delta_o0 = 0.0;
  double delta_d = 0.0;
  StepControl control = StepControl::kContinue;
};

// Ratios at or below zero are replaced by this before dividing.
inline constexpr double kRatioFloor = 1e-9;

// r < 0 ends the episode and drops the transition; r >= 0 with BMR improving
// faster than OMR (delta_d > 0) ends it and keeps the transition.
StepControl classify_step(double r, double delta_d);

RewardResult reward(RewardInputs inputs, const RewardParams& params);

}  // namespace cachelab::agent
