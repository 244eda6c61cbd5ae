#include "cachelab/simulator.hpp"

#include <chrono>
#include <fstream>
#include <string>

#include "cachelab/error.hpp"

namespace cachelab {

void check_capacity(const Trace& trace, std::uint64_t capacity, bool bypass_oversized) {
  if (capacity == 0) throw ConfigError("capacity must be positive");
  if (!bypass_oversized && !trace.empty() && trace.max_object_size() > capacity) {
    throw ConfigError("capacity " + std::to_string(capacity) + " is below the largest object (" +
                      std::to_string(trace.max_object_size()) + " bytes) and bypass is off");
  }
}

std::optional<std::uint64_t> peak_rss_bytes() {
  std::ifstream status("/proc/self/status");
  std::string line;
  while (std::getline(status, line)) {
    if (line.rfind("VmHWM:", 0) == 0) {
      try {
        return std::stoull(line.substr(6)) * 1024;
      } catch (const std::exception&) {
        return std::nullopt;
      }
    }
  }
  return std::nullopt;
}

SimulationReport simulate(CachePolicy& policy, const Trace& trace, const SimulationOptions& options) {
  check_capacity(trace, policy.capacity(), options.bypass_oversized);
  SimulationReport report;
  report.policy = policy.name();
  report.capacity = policy.capacity();
  const auto start = std::chrono::steady_clock::now();

  Counters window;
  std::uint64_t in_window = 0;
  const auto reqs = trace.requests();
  for (std::size_t i = 0; i < reqs.size(); ++i) {
    const auto& r = reqs[i];
    const auto outcome = policy.access(r);
    const bool counted = i >= options.warmup;
    if (counted) {
      report.counters.record(r.size, outcome.hit);
      if (options.record_evictions) {
        for (auto id : outcome.evicted) report.eviction_log.push_back({i, id});
      }
    }
    if (options.window > 0) {
      window.record(r.size, outcome.hit);
      if (++in_window == options.window) {
        report.windows.push_back(window);
        window = {};
        in_window = 0;
      }
    }
  }
  if (options.window > 0 && in_window > 0) report.windows.push_back(window);

  report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  report.peak_rss_bytes = peak_rss_bytes();
  return report;
}

}  // namespace cachelab
