#include <algorithm>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <map>
#include <mutex>
#include <random>

#include "json.hpp"

#include "cachelab/error.hpp"
#include "cachelab/harness/experiment.hpp"
#include "cachelab/log.hpp"
#include "cachelab/metrics.hpp"
#include "cachelab/offline.hpp"
#include "cachelab/parallel.hpp"
#include "cachelab/policies.hpp"
#include "cachelab/random.hpp"
#include "cachelab/trace_io.hpp"

namespace cachelab {

namespace {

using nlohmann::json;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string file_label(const CapacitySpec& c) {
  std::string s = c.label();
  if (!s.empty() && s.back() == '%') {
    s.pop_back();
    s += "pct";
  }
  return s;
}

class Output {
 public:
  Output(const std::filesystem::path& dir, RunResult& result) : dir_(dir), result_(result) {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec || !std::filesystem::is_directory(dir_)) throw ConfigError("cannot create output directory " + dir_.string());
  }

  std::ofstream open(const std::string& name) {
    const auto path = dir_ / name;
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw Error("cannot write " + path.string());
    result_.files.push_back(path);
    return out;
  }

  void json_file(const std::string& name, const json& value) { open(name) << value.dump(2) << '\n'; }

 private:
  std::filesystem::path dir_;
  RunResult& result_;
};

struct Row {
  std::string policy;
  std::string capacity_label;
  std::uint64_t capacity = 0;
  Counters counters;
  // Set for bound rows, whose byte misses may be fractional.
  std::optional<MissBound> bound;
};

const char* kCounterHeader = "policy,capacity,omr,bmr,requests,misses,bytes,bytes_missed\n";

void write_row(std::ostream& out, const Row& r) {
  if (r.bound) {
    const auto& b = *r.bound;
    out << r.policy << ',' << r.capacity << ',' << num(b.omr) << ',' << num(b.bmr) << ',' << b.requests << ','
        << b.object_misses << ',' << b.bytes_requested << ',' << num(b.byte_misses) << '\n';
    return;
  }
  const auto& c = r.counters;
  out << r.policy << ',' << r.capacity << ',' << num(omr(c)) << ',' << num(bmr(c)) << ',' << c.requests << ','
      << c.misses() << ',' << c.bytes_requested << ',' << c.bytes_missed() << '\n';
}

json row_json(const Row& r) {
  if (r.bound) {
    return {{"policy", r.policy},     {"capacity", r.capacity},        {"omr", r.bound->omr},
            {"bmr", r.bound->bmr},    {"requests", r.bound->requests}, {"misses", r.bound->object_misses},
            {"bytes", r.bound->bytes_requested}, {"bytes_missed", r.bound->byte_misses}};
  }
  return {{"policy", r.policy},
          {"capacity", r.capacity},
          {"omr", omr(r.counters)},
          {"bmr", bmr(r.counters)},
          {"requests", r.counters.requests},
          {"misses", r.counters.misses()},
          {"bytes", r.counters.bytes_requested},
          {"bytes_missed", r.counters.bytes_missed()}};
}

json header_json(const ExperimentConfig& config, const Trace& trace, const RunOptions& options) {
  json j{{"experiment", to_string(config.kind)},
         {"seed", config.seed},
         {"warmup", config.warmup},
         {"trace_requests", trace.size()},
         {"trace_unique_objects", trace.unique_objects()},
         {"trace_unique_bytes", trace.unique_bytes()}};
  if (!options.deterministic) {
    const auto now = std::time(nullptr);
    char buf[64];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    j["generated_at"] = buf;
  }
  return j;
}

void check_warmup(const ExperimentConfig& config, const Trace& trace) {
  if (config.warmup >= trace.size()) {
    throw ConfigError("warmup (" + std::to_string(config.warmup) + ") leaves no measured requests in a trace of " +
                      std::to_string(trace.size()));
  }
}

Counters simulate_named(const std::string& policy, const Trace& trace, std::uint64_t capacity,
                        const ExperimentConfig& config) {
  if (policy == "lru-base") {
    DayCycleOptions opts;
    opts.warmup = config.warmup;
    return run_day_cycle(trace, capacity, config.lrubase, opts).counters;
  }
  auto p = make_policy(policy, capacity, config.policy_params);
  SimulationOptions opts;
  opts.warmup = config.warmup;
  opts.record_evictions = false;
  return simulate(*p, trace, opts).counters;
}

// --- compare ----------------------------------------------------------------

void run_compare(const ExperimentConfig& config, const Trace& trace, Output& out, const RunOptions& options) {
  check_warmup(config, trace);
  std::vector<Row> rows;
  for (const auto& cap : config.capacities) {
    const auto bytes = cap.resolve(trace);
    for (const auto& p : config.policies) rows.push_back({p, cap.label(), bytes, {}, std::nullopt});
    rows.push_back({"belady", cap.label(), bytes, {}, std::nullopt});
    rows.push_back({"pfoo-l", cap.label(), bytes, {}, std::nullopt});
  }
  std::vector<double> seconds(rows.size(), 0.0);
  parallel_for(
      rows.size(),
      [&](std::size_t i) {
        auto& r = rows[i];
        const auto started = std::chrono::steady_clock::now();
        if (r.policy == "pfoo-l") {
          r.bound = pfoo_l(trace, r.capacity);
        } else if (r.policy == "belady") {
          SimulationOptions opts;
          opts.warmup = config.warmup;
          opts.record_evictions = false;
          r.counters = belady(trace, r.capacity, opts).counters;
        } else {
          r.counters = simulate_named(r.policy, trace, r.capacity, config);
        }
        seconds[i] = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
      },
      config.workers);

  auto csv = out.open("compare.csv");
  csv << kCounterHeader;
  json summary = header_json(config, trace, options);
  summary["rows"] = json::array();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    write_row(csv, rows[i]);
    auto j = row_json(rows[i]);
    j["capacity_spec"] = rows[i].capacity_label;
    if (!options.deterministic) j["wall_seconds"] = seconds[i];
    summary["rows"].push_back(j);
  }
  summary["notes"] = "pfoo-l rows bound the whole trace; other rows exclude the warmup prefix";
  out.json_file("summary.json", summary);
}

// --- ecdf -------------------------------------------------------------------

void run_ecdf(const ExperimentConfig& config, const Trace& trace, Output& out, const RunOptions& options) {
  std::vector<Ecdf> results(config.capacities.size());
  parallel_for(
      results.size(),
      [&](std::size_t i) { results[i] = eviction_position_ecdf(trace, config.capacities[i].resolve(trace)); },
      config.workers);
  auto summary_csv = out.open("ecdf_summary.csv");
  summary_csv << "capacity,samples";
  for (const double q : config.ecdf_quantiles) summary_csv << ",q" << num(q);
  summary_csv << '\n';
  json summary = header_json(config, trace, options);
  summary["capacities"] = json::array();
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto bytes = config.capacities[i].resolve(trace);
    auto csv = out.open("ecdf_" + file_label(config.capacities[i]) + ".csv");
    results[i].write_csv(csv);
    summary_csv << bytes << ',' << results[i].size();
    json qs = json::object();
    for (const double q : config.ecdf_quantiles) {
      summary_csv << ',' << num(results[i].quantile(q));
      qs[num(q)] = results[i].quantile(q);
    }
    summary_csv << '\n';
    summary["capacities"].push_back({{"capacity", bytes}, {"samples", results[i].size()}, {"quantiles", qs}});
  }
  out.json_file("summary.json", summary);
}

// --- flat region ------------------------------------------------------------

void run_flat_region(const ExperimentConfig& config, const Trace& trace, Output& out, const RunOptions& options) {
  check_warmup(config, trace);
  json summary = header_json(config, trace, options);
  summary["capacities"] = json::array();
  for (const auto& cap : config.capacities) {
    const auto bytes = cap.resolve(trace);
    const auto points =
        flat_region_experiment(trace, bytes, config.flat_n_values, config.flat_repeats, config.seed, config.warmup);
    auto csv = out.open("flat_region_" + file_label(cap) + ".csv");
    write_flat_region_csv(points, csv);
    json pts = json::array();
    for (const auto& p : points) {
      pts.push_back({{"N", p.n}, {"mean_omr", p.mean_omr}, {"min_omr", p.min_omr}, {"max_omr", p.max_omr},
                     {"stddev_omr", p.stddev_omr}, {"repeats", p.repeats}});
    }
    summary["capacities"].push_back({{"capacity", bytes}, {"points", pts}});
  }
  out.json_file("summary.json", summary);
}

// --- schedule sweeps --------------------------------------------------------

void run_schedule_sweep(const ExperimentConfig& config, const Trace& trace, Output& out, const RunOptions& options,
                        bool spans) {
  check_warmup(config, trace);
  const auto capacity = config.capacities.front().resolve(trace);
  const auto& values = spans ? config.span_values : config.begin_hour_values;
  struct Cell {
    Counters counters;
    double train_seconds = 0.0;
    std::size_t trained = 0;
    std::size_t rear_n = 0;
  };
  // Cell 0 is the LRU baseline.
  std::vector<Cell> cells(values.size() + 1);
  parallel_for(
      cells.size(),
      [&](std::size_t i) {
        auto lb = config.lrubase;
        if (i == 0) {
          lb.agent_enabled = false;
        } else if (spans) {
          lb.schedule.span_hours = values[i - 1];
        } else {
          lb.schedule.begin_hour = values[i - 1];
        }
        DayCycleOptions opts;
        opts.warmup = config.warmup;
        const auto report = run_day_cycle(trace, capacity, lb, opts);
        cells[i].counters = report.counters;
        cells[i].trained = report.trained.size();
        cells[i].rear_n = report.rear_n;
        for (const auto& r : report.regions) cells[i].train_seconds += r.train_seconds;
      },
      config.workers);

  const std::string column = spans ? "span_hours" : "begin_hour";
  auto csv = out.open(spans ? "time_span_sweep.csv" : "begin_hour_sweep.csv");
  csv << column << ",policy,omr,bmr,requests,misses,bytes,bytes_missed,trained_regions\n";
  json summary = header_json(config, trace, options);
  summary["capacity"] = capacity;
  summary["rows"] = json::array();
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const auto& c = cells[i].counters;
    const std::string key = i == 0 ? "-" : std::to_string(values[i - 1]);
    const std::string policy = i == 0 ? "lru" : "lru-base";
    csv << key << ',' << policy << ',' << num(omr(c)) << ',' << num(bmr(c)) << ',' << c.requests << ','
        << c.misses() << ',' << c.bytes_requested << ',' << c.bytes_missed() << ',' << cells[i].trained << '\n';
    json j{{column, key},         {"policy", policy},           {"omr", omr(c)},
           {"bmr", bmr(c)},       {"requests", c.requests},     {"trained_regions", cells[i].trained},
           {"rear_n", cells[i].rear_n}};
    if (!options.deterministic) j["train_seconds"] = cells[i].train_seconds;
    summary["rows"].push_back(j);
  }
  out.json_file("summary.json", summary);
}

// --- drift ------------------------------------------------------------------

void run_drift(const ExperimentConfig& config, const Trace& first, Output& out, const RunOptions& options) {
  Trace second;
  if (config.drift_second_file) {
    if (!std::filesystem::exists(*config.drift_second_file)) {
      throw ConfigError("drift second trace not found: " + config.drift_second_file->string());
    }
    second = read_trace_file(*config.drift_second_file);
  } else if (config.trace_file) {
    throw ConfigError("drift with a trace file needs drift.second_file");
  } else {
    auto syn = config.synthetic;
    syn.seed += config.drift_seed_offset;
    second = generate_synthetic(syn);
  }
  const Trace trace = splice_traces(first, second);
  const auto drift_at = first.size();
  const auto capacity = config.capacities.front().resolve(trace);

  // Measurement starts once the first complete post-drift region has ended,
  // the earliest point at which LRU-BaSE has retrained on the new workload.
  const auto& schedule = config.lrubase.schedule;
  const auto drift_time = trace[drift_at].timestamp;
  auto instance = schedule.instance_of(drift_time);
  if (schedule.instance_start(instance) < drift_time) ++instance;
  const auto retrain_time = schedule.instance_start(instance + 1);
  const auto reqs = trace.requests();
  const auto retrain_at = static_cast<std::size_t>(
      std::lower_bound(reqs.begin(), reqs.end(), retrain_time,
                       [](const Request& r, std::int64_t t) { return r.timestamp < t; }) -
      reqs.begin());

  std::vector<std::vector<Counters>> series(config.policies.size());
  parallel_for(
      series.size(),
      [&](std::size_t i) {
        const auto& name = config.policies[i];
        if (name == "lru-base") {
          DayCycleOptions opts;
          opts.window = config.drift_window;
          series[i] = run_day_cycle(trace, capacity, config.lrubase, opts).windows;
        } else {
          auto p = make_policy(name, capacity, config.policy_params);
          SimulationOptions opts;
          opts.window = config.drift_window;
          opts.record_evictions = false;
          series[i] = simulate(*p, trace, opts).windows;
        }
      },
      config.workers);

  auto summary_csv = out.open("drift_summary.csv");
  summary_csv << "policy,windows,pre_drift_mean_bmr,post_retrain_mean_bmr\n";
  json summary = header_json(config, trace, options);
  summary["drift_request"] = drift_at;
  summary["retrain_request"] = retrain_at;
  summary["window"] = config.drift_window;
  summary["capacity"] = capacity;
  summary["policies"] = json::array();
  for (std::size_t i = 0; i < series.size(); ++i) {
    auto csv = out.open("drift_" + config.policies[i] + ".csv");
    csv << "window,first_request,omr,bmr\n";
    double pre = 0.0, post = 0.0;
    std::size_t pre_n = 0, post_n = 0;
    for (std::size_t w = 0; w < series[i].size(); ++w) {
      const auto start = w * config.drift_window;
      const auto& c = series[i][w];
      const double b = bmr(c);
      csv << w << ',' << start << ',' << num(omr(c)) << ',' << num(b) << '\n';
      if (start + c.requests <= drift_at) {
        pre += b;
        ++pre_n;
      } else if (start >= retrain_at) {
        post += b;
        ++post_n;
      }
    }
    const double pre_mean = pre_n ? pre / static_cast<double>(pre_n) : 0.0;
    const double post_mean = post_n ? post / static_cast<double>(post_n) : 0.0;
    summary_csv << config.policies[i] << ',' << series[i].size() << ',' << num(pre_mean) << ',' << num(post_mean)
                << '\n';
    summary["policies"].push_back({{"policy", config.policies[i]},
                                   {"windows", series[i].size()},
                                   {"pre_drift_mean_bmr", pre_mean},
                                   {"post_retrain_mean_bmr", post_mean},
                                   {"post_retrain_windows", post_n}});
  }
  out.json_file("summary.json", summary);
}

// --- separation search ------------------------------------------------------

void run_separation(const ExperimentConfig& config, Output& out, const RunOptions& options) {
  const auto& s = config.separation;
  Rng rng(derive_seed(config.seed, 0x5e9a));
  std::uint64_t searched = 0;
  std::uint64_t belady_optimal = 0;
  std::optional<Trace> found;
  std::uint64_t found_capacity = 0;
  SimulationReport found_belady;
  std::uint64_t opt_objects = 0, opt_bytes = 0;
  const std::size_t min_keys = std::min<std::size_t>(2, s.max_keys);
  while (searched < s.instances && !found) {
    ++searched;
    const auto keys = std::uniform_int_distribution<std::size_t>(min_keys, s.max_keys)(rng);
    const auto length = std::uniform_int_distribution<std::size_t>(std::min(keys, s.max_requests), s.max_requests)(rng);
    std::vector<std::uint64_t> sizes(keys);
    std::uint64_t total = 0;
    for (auto& z : sizes) total += (z = std::uniform_int_distribution<std::uint64_t>(1, s.max_size)(rng));
    if (total < 2) continue;
    const auto capacity = std::uniform_int_distribution<std::uint64_t>(1, total - 1)(rng);
    Trace t;
    std::uniform_int_distribution<std::size_t> pick(0, keys - 1);
    for (std::size_t i = 0; i < length; ++i) {
      const auto k = pick(rng);
      t.push(static_cast<std::int64_t>(i), "k" + std::to_string(k), sizes[k]);
    }
    SimulationOptions opts;
    auto b = belady(t, capacity, opts);
    const auto objects = brute_force_optimal(t, capacity, MissObjective::kObjectMisses);
    if (b.counters.misses() != objects) continue;
    ++belady_optimal;
    const auto bytes = brute_force_optimal(t, capacity, MissObjective::kByteMisses);
    if (bytes < b.counters.bytes_missed()) {
      found = t;
      found_capacity = capacity;
      found_belady = std::move(b);
      opt_objects = objects;
      opt_bytes = bytes;
    }
  }
  auto csv = out.open("separation.csv");
  csv << "instances_searched,belady_omr_optimal,found,capacity,belady_misses,optimal_misses,belady_bytes_missed,"
         "optimal_bytes_missed\n";
  csv << searched << ',' << belady_optimal << ',' << (found ? 1 : 0) << ',' << found_capacity << ','
      << (found ? found_belady.counters.misses() : 0) << ',' << opt_objects << ','
      << (found ? found_belady.counters.bytes_missed() : 0) << ',' << opt_bytes << '\n';
  json summary{{"experiment", "separation_search"}, {"seed", config.seed}, {"instances_searched", searched},
               {"belady_omr_optimal_instances", belady_optimal}, {"found", found.has_value()}};
  if (!options.deterministic) summary["generated_at"] = header_json(config, Trace{}, options)["generated_at"];
  if (found) {
    auto trace_out = out.open("separation_instance.txt");
    write_trace(*found, trace_out);
    json evictions = json::array();
    for (const auto& e : found_belady.eviction_log) {
      evictions.push_back({{"position", e.position}, {"key", found->key_name(e.id)}});
    }
    json sizes = json::object();
    for (const auto& r : found->requests()) sizes[found->key_name(r.id)] = r.size;
    summary["certificate"] = {
        {"capacity", found_capacity},
        {"requests", found->size()},
        {"object_sizes", sizes},
        {"belady", {{"misses", found_belady.counters.misses()}, {"bytes_missed", found_belady.counters.bytes_missed()},
                    {"evictions", evictions}}},
        {"optimal_object_misses", opt_objects},
        {"optimal_byte_misses", opt_bytes},
        {"claim", "belady attains the minimum object misses but not the minimum byte misses"}};
    out.json_file("separation_certificate.json", summary["certificate"]);
  }
  out.json_file("summary.json", summary);
}

}  // namespace

RunResult run_experiment(const ExperimentConfig& config, const RunOptions& options) {
  RunResult result;
  for (const auto& p : config.policies) {
    if (std::find(policy_names().begin(), policy_names().end(), p) == policy_names().end()) {
      throw ConfigError("unknown policy: " + p);
    }
  }
  if (config.kind == ExperimentKind::kSeparationSearch) {
    Output out(config.output_dir, result);
    run_separation(config, out, options);
    return result;
  }
  const Trace trace = load_workload(config);
  if (trace.empty()) throw ConfigError("the workload has no requests");
  Output out(config.output_dir, result);
  switch (config.kind) {
    case ExperimentKind::kCompare:
      run_compare(config, trace, out, options);
      break;
    case ExperimentKind::kEcdf:
      run_ecdf(config, trace, out, options);
      break;
    case ExperimentKind::kFlatRegion:
      run_flat_region(config, trace, out, options);
      break;
    case ExperimentKind::kTimeSpanSweep:
      run_schedule_sweep(config, trace, out, options, true);
      break;
    case ExperimentKind::kBeginHourSweep:
      run_schedule_sweep(config, trace, out, options, false);
      break;
    case ExperimentKind::kDrift:
      run_drift(config, trace, out, options);
      break;
    case ExperimentKind::kSeparationSearch:
      break;
  }
  return result;
}

}  // namespace cachelab
