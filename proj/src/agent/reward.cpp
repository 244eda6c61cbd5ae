#include "cachelab/agent/reward.hpp"

#include <cmath>
#include <string>

#include "cachelab/error.hpp"
#include "cachelab/log.hpp"

namespace cachelab::agent {

void RewardParams::validate() const {
  if (alpha < 0.0 || beta < 0.0 || gamma < 0.0) throw ConfigError("reward weights must be non-negative");
  if (std::abs(alpha + beta + gamma - 1.0) > 1e-9) {
    throw ConfigError("reward weights must sum to 1, got " + std::to_string(alpha + beta + gamma));
  }
}

const char* to_string(StepControl control) {
  switch (control) {
    case StepControl::kDiscardTerminal:
      return "discard_terminal";
    case StepControl::kStoreTerminalKeyStep:
      return "store_terminal_key_step";
    case StepControl::kContinue:
      return "continue";
  }
  return "unknown";
}

StepControl classify_step(double r, double delta_d) {
  if (r < 0.0) return StepControl::kDiscardTerminal;
  if (delta_d > 0.0) return StepControl::kStoreTerminalKeyStep;
  return StepControl::kContinue;
}

namespace {

void guard(double& value, const char* name) {
  if (value > 0.0) return;
  log::warning(std::string("reward: ") + name + " is " + std::to_string(value) + ", clamped to " +
               std::to_string(kRatioFloor));
  value = kRatioFloor;
}

}  // namespace

RewardResult reward(RewardInputs in, const RewardParams& params) {
  guard(in.b_i, "B_i");
  guard(in.b_prev, "B_prev");
  guard(in.b_0, "B_0");
  guard(in.o_i, "O_i");
  guard(in.o_prev, "O_prev");
  guard(in.o_0, "O_0");
  RewardResult out;
  out.delta_b = (in.b_prev - in.b_i) / in.b_prev;
  out.delta_o = (in.o_prev - in.o_i) / in.o_prev;
  out.delta_b0 = (in.b_0 - in.b_i) / in.b_0;
  out.delta_o0 = (in.o_0 - in.o_i) / in.o_0;
  out.delta_d = out.delta_b - out.delta_o;
  // 1 - delta_b = b_i / b_prev, which is positive after the guard.
  out.r = params.alpha * out.delta_b0 / (1.0 - out.delta_b) + params.beta * out.delta_o0 / (1.0 - out.delta_o) +
          params.gamma * out.delta_d;
  out.control = classify_step(out.r, out.delta_d);
  return out;
}

}  // namespace cachelab::agent
