#include <algorithm>
#include <cmath>
#include <sstream>

#include "cachelab/error.hpp"
#include "cachelab/harness/experiment.hpp"
#include "cachelab/lrubase/cache.hpp"
#include "cachelab/offline.hpp"
#include "cachelab/policies.hpp"
#include "cachelab/trace_io.hpp"

namespace cachelab {

namespace {

struct KindName {
  ExperimentKind kind;
  const char* name;
};

constexpr KindName kKinds[] = {
    {ExperimentKind::kCompare, "compare"},
    {ExperimentKind::kEcdf, "ecdf"},
    {ExperimentKind::kFlatRegion, "flat_region"},
    {ExperimentKind::kTimeSpanSweep, "time_span_sweep"},
    {ExperimentKind::kBeginHourSweep, "begin_hour_sweep"},
    {ExperimentKind::kDrift, "drift"},
    {ExperimentKind::kSeparationSearch, "separation_search"},
};

template <typename T, typename Parse>
std::vector<T> parse_list(const KeyValueConfig& kv, const std::string& key, std::vector<T> fallback, Parse parse) {
  if (!kv.has(key)) return fallback;
  std::vector<T> out;
  for (const auto& item : kv.get_list(key)) {
    try {
      out.push_back(parse(item));
    } catch (const std::exception&) {
      throw ConfigError("bad value '" + item + "' in " + key);
    }
  }
  return out;
}

}  // namespace

ExperimentKind parse_experiment_kind(const std::string& text) {
  for (const auto& k : kKinds) {
    if (text == k.name) return k.kind;
  }
  throw ConfigError("unknown experiment kind: " + text);
}

const char* to_string(ExperimentKind kind) {
  for (const auto& k : kKinds) {
    if (k.kind == kind) return k.name;
  }
  return "unknown";
}

CapacitySpec CapacitySpec::parse(const std::string& text) {
  CapacitySpec c;
  if (!text.empty() && text.back() == '%') {
    std::size_t used = 0;
    double pct = 0.0;
    try {
      pct = std::stod(text.substr(0, text.size() - 1), &used);
    } catch (const std::exception&) {
      throw ConfigError("bad capacity: " + text);
    }
    if (used != text.size() - 1 || !(pct > 0.0)) throw ConfigError("bad capacity: " + text);
    c.percent_of_unique = pct;
    return c;
  }
  c.bytes = parse_byte_count(text);
  if (c.bytes == 0) throw ConfigError("capacity must be positive");
  return c;
}

std::uint64_t CapacitySpec::resolve(const Trace& trace) const {
  if (percent_of_unique <= 0.0) return bytes;
  const auto b = static_cast<std::uint64_t>(std::llround(percent_of_unique / 100.0 * static_cast<double>(trace.unique_bytes())));
  return std::max<std::uint64_t>(1, b);
}

std::string CapacitySpec::label() const {
  if (percent_of_unique <= 0.0) return std::to_string(bytes);
  std::ostringstream out;
  out << percent_of_unique << '%';
  return out.str();
}

PolicyPtr make_policy(const std::string& name, std::uint64_t capacity, const PolicyParams& params,
                      std::size_t rear_n) {
  if (name == "lru") return make_lru(capacity);
  if (name == "fifo") return make_fifo(capacity);
  if (name == "s4lru") return make_s4lru(capacity, params.s4lru_segments);
  if (name == "lfuda") return make_lfuda(capacity);
  if (name == "lruk") return make_lruk(capacity, params.lruk_k);
  if (name == "gdsf") return make_gdsf(capacity);
  if (name == "thlru") {
    const auto threshold = params.thlru_threshold > 0 ? params.thlru_threshold : std::max<std::uint64_t>(1, capacity / 10);
    return make_thlru(capacity, threshold);
  }
  if (name == "lru-base") return std::make_unique<LruBaseCache>(capacity, rear_n);
  throw ConfigError("unknown policy: " + name);
}

ExperimentConfig ExperimentConfig::from_config(const KeyValueConfig& kv, const std::filesystem::path& base_dir) {
  ExperimentConfig c;
  c.kind = parse_experiment_kind(kv.get_string("experiment", "compare"));
  c.seed = kv.get_uint("seed", c.seed);
  c.warmup = kv.get_uint("warmup", c.warmup);
  c.workers = kv.get_uint("workers", c.workers);
  c.output_dir = kv.get_string("output", c.output_dir.string());

  if (const auto file = kv.get("trace.file")) {
    std::filesystem::path p = *file;
    if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
    c.trace_file = p;
  } else {
    auto syn = kv.section("synthetic.");
    if (!syn.has("seed")) syn.set("seed", std::to_string(c.seed));
    c.synthetic = SyntheticConfig::from_config(syn);
  }

  c.policies = kv.get_list("policies");
  for (const auto& p : c.policies) {
    if (std::find(policy_names().begin(), policy_names().end(), p) == policy_names().end()) {
      throw ConfigError("unknown policy: " + p);
    }
  }
  c.capacities = parse_list<CapacitySpec>(kv, "capacities", {}, [](const std::string& s) { return CapacitySpec::parse(s); });

  c.policy_params.s4lru_segments = static_cast<int>(kv.get_int("policy.s4lru_segments", c.policy_params.s4lru_segments));
  c.policy_params.lruk_k = static_cast<int>(kv.get_int("policy.lruk_k", c.policy_params.lruk_k));
  if (const auto t = kv.get("policy.thlru_threshold")) c.policy_params.thlru_threshold = parse_byte_count(*t);
  if (c.policy_params.s4lru_segments < 1) throw ConfigError("policy.s4lru_segments must be >= 1");
  if (c.policy_params.lruk_k < 1) throw ConfigError("policy.lruk_k must be >= 1");

  auto lb = kv;
  if (!kv.has("lrubase.seed")) lb.set("lrubase.seed", std::to_string(c.seed));
  c.lrubase = LruBaseConfig::from_config(lb);

  const auto to_double = [](const std::string& s) { return std::stod(s); };
  const auto to_size = [](const std::string& s) { return static_cast<std::size_t>(std::stoull(s)); };
  const auto to_int = [](const std::string& s) { return std::stoi(s); };
  c.ecdf_quantiles = parse_list<double>(kv, "ecdf.quantiles", c.ecdf_quantiles, to_double);
  c.flat_n_values = parse_list<std::size_t>(kv, "flat_region.n_values", c.flat_n_values, to_size);
  c.flat_repeats = static_cast<int>(kv.get_int("flat_region.repeats", c.flat_repeats));
  c.drift_window = kv.get_uint("drift.window", c.drift_window);
  c.drift_seed_offset = kv.get_uint("drift.seed_offset", c.drift_seed_offset);
  if (const auto file = kv.get("drift.second_file")) {
    std::filesystem::path p = *file;
    if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
    c.drift_second_file = p;
  }
  c.span_values = parse_list<int>(kv, "sweep.spans", c.span_values, to_int);
  c.begin_hour_values = parse_list<int>(kv, "sweep.begin_hours", c.begin_hour_values, to_int);
  c.separation.instances = kv.get_uint("separation.instances", c.separation.instances);
  c.separation.max_requests = kv.get_uint("separation.max_requests", c.separation.max_requests);
  c.separation.max_keys = kv.get_uint("separation.max_keys", c.separation.max_keys);
  c.separation.max_size = kv.get_uint("separation.max_size", c.separation.max_size);

  for (const double q : c.ecdf_quantiles) {
    if (!(q > 0.0 && q <= 1.0)) throw ConfigError("ecdf.quantiles must lie in (0, 1]");
  }
  for (const auto n : c.flat_n_values) {
    if (n == 0) throw ConfigError("flat_region.n_values must be positive");
  }
  if (c.flat_repeats < 1) throw ConfigError("flat_region.repeats must be >= 1");
  if (c.drift_window == 0) throw ConfigError("drift.window must be positive");
  for (const int s : c.span_values) TimeRegionSchedule{s, c.lrubase.schedule.begin_hour}.validate();
  for (const int b : c.begin_hour_values) TimeRegionSchedule{c.lrubase.schedule.span_hours, b}.validate();
  const auto& sep = c.separation;
  if (sep.instances == 0 || sep.max_requests == 0 || sep.max_requests > kBruteForceMaxRequests ||
      sep.max_keys == 0 || sep.max_keys > kBruteForceMaxKeys || sep.max_size == 0) {
    throw ConfigError("separation settings out of range");
  }

  const bool needs_policies = c.kind == ExperimentKind::kCompare || c.kind == ExperimentKind::kDrift;
  if (needs_policies && c.policies.empty()) throw ConfigError("at least one policy is required");
  if (c.kind != ExperimentKind::kSeparationSearch && c.capacities.empty()) {
    throw ConfigError("at least one capacity is required");
  }
  return c;
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path) {
  return from_config(KeyValueConfig::load(path), path.parent_path());
}

Trace load_workload(const ExperimentConfig& config) {
  if (config.trace_file) {
    if (!std::filesystem::exists(*config.trace_file)) {
      throw ConfigError("trace file not found: " + config.trace_file->string());
    }
    return read_trace_file(*config.trace_file);
  }
  return generate_synthetic(config.synthetic);
}

}  // namespace cachelab
