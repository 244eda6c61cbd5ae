#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "cachelab/kv_config.hpp"
#include "cachelab/lrubase/lrubase.hpp"
#include "cachelab/policy.hpp"
#include "cachelab/synthetic.hpp"
#include "cachelab/trace.hpp"

namespace cachelab {

enum class ExperimentKind {
  kCompare,
  kEcdf,
  kFlatRegion,
  kTimeSpanSweep,
  kBeginHourSweep,
  kDrift,
  kSeparationSearch,
};

ExperimentKind parse_experiment_kind(const std::string& text);
const char* to_string(ExperimentKind kind);

// Absolute bytes, or a percentage of the trace's unique bytes ("2%").
struct CapacitySpec {
  std::uint64_t bytes = 0;
  double percent_of_unique = 0.0;

  static CapacitySpec parse(const std::string& text);
  std::uint64_t resolve(const Trace& trace) const;
  std::string label() const;
};

// Parameters of the parameterized baselines.
struct PolicyParams {
  int s4lru_segments = 4;
  int lruk_k = 2;
  // 0 means capacity / 10.
  std::uint64_t thlru_threshold = 0;
};

inline const std::vector<std::string>& policy_names() {
  static const std::vector<std::string> names{"lru", "fifo", "s4lru", "lfuda", "lruk", "gdsf", "thlru", "lru-base"};
  return names;
}

// Builds an online policy by name. "lru-base" yields a cache without a
// decider (pure LRU fallback); trained runs go through run_day_cycle.
PolicyPtr make_policy(const std::string& name, std::uint64_t capacity, const PolicyParams& params,
                      std::size_t rear_n = 16);

struct SeparationSearchConfig {
  std::uint64_t instances = 10000;
  std::size_t max_requests = 12;
  std::size_t max_keys = 5;
  std::uint64_t max_size = 8;
};

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::kCompare;
  std::optional<std::filesystem::path> trace_file;
  SyntheticConfig synthetic;
  std::vector<std::string> policies;
  std::vector<CapacitySpec> capacities;
  std::uint64_t warmup = 0;
  std::uint64_t seed = 1;
  std::filesystem::path output_dir = "results";
  std::size_t workers = 0;
  PolicyParams policy_params;
  LruBaseConfig lrubase;
  // ecdf
  std::vector<double> ecdf_quantiles{0.9, 0.99, 0.999, 0.99999};
  // flat_region
  std::vector<std::size_t> flat_n_values{1, 2, 4, 8, 16, 32, 64, 128, 256};
  int flat_repeats = 500;
  // drift: the second half of the splice is `drift_second_file`, or the
  // synthetic workload reseeded with seed + drift_seed_offset.
  std::uint64_t drift_window = 10000;
  std::uint64_t drift_seed_offset = 1000;
  std::optional<std::filesystem::path> drift_second_file;
  std::vector<int> span_values{1, 2, 3, 4, 6, 8, 12, 24};
  std::vector<int> begin_hour_values{0, 1, 2, 3, 4, 5};
  SeparationSearchConfig separation;

  // Throws ConfigError on unknown kinds or policies, missing policies or
  // capacities, and invalid values. Relative trace paths resolve against
  // `base_dir`.
  static ExperimentConfig from_config(const KeyValueConfig& config, const std::filesystem::path& base_dir = {});
  static ExperimentConfig load(const std::filesystem::path& path);
};

// The workload named by the config (trace file or synthetic).
Trace load_workload(const ExperimentConfig& config);

struct RunOptions {
  // Omits wall-clock values so repeated runs write identical files.
  bool deterministic = false;
};

struct RunResult {
  std::vector<std::filesystem::path> files;
};

// Runs the configured experiment and writes its CSV/JSON reports into the
// output directory. ConfigError is raised before any simulation starts.
RunResult run_experiment(const ExperimentConfig& config, const RunOptions& options = {});

}  // namespace cachelab
