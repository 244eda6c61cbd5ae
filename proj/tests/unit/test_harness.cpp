#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "cachelab/error.hpp"
#include "cachelab/harness/experiment.hpp"
#include "cachelab/offline.hpp"
#include "cachelab/trace_io.hpp"
#include "json.hpp"

using namespace cachelab;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("cachelab_harness_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

fs::path write_file(const fs::path& p, const std::string& text) {
  std::ofstream(p) << text;
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
  std::ifstream in(p);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(CACHELAB_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

ExperimentConfig config_from(const std::string& text, const fs::path& out) {
  auto cfg = ExperimentConfig::from_config(KeyValueConfig::parse_string(text));
  cfg.output_dir = out;
  return cfg;
}

const char* kSmallSynthetic =
    "[synthetic]\nobject_count = 300\nrequests_per_day = 4000\ndays = 1\nseed = 2\n";

}  // namespace

TEST(Capacity, ParseAndResolve) {
  const auto pct = CapacitySpec::parse("2%");
  EXPECT_EQ(pct.percent_of_unique, 2.0);
  Trace t;
  t.push(0, "a", 300);
  t.push(1, "b", 700);
  t.push(2, "a", 300);
  EXPECT_EQ(pct.resolve(t), 20u);
  EXPECT_EQ(CapacitySpec::parse("4096").resolve(t), 4096u);
  EXPECT_THROW(CapacitySpec::parse("0"), ConfigError);
  EXPECT_THROW(CapacitySpec::parse("x%"), ConfigError);
  EXPECT_THROW(CapacitySpec::parse("-1%"), ConfigError);
}

TEST(Config, Errors) {
  EXPECT_THROW(ExperimentConfig::from_config(KeyValueConfig::parse_string("experiment = nope\n")), ConfigError);
  EXPECT_THROW(ExperimentConfig::from_config(KeyValueConfig::parse_string(
                   "experiment = compare\npolicies = lru, bogus\ncapacities = 2%\n")),
               ConfigError);
  EXPECT_THROW(ExperimentConfig::from_config(KeyValueConfig::parse_string("experiment = compare\ncapacities = 2%\n")),
               ConfigError);
  EXPECT_THROW(ExperimentConfig::from_config(KeyValueConfig::parse_string("experiment = ecdf\n")), ConfigError);
  EXPECT_THROW(ExperimentConfig::load("/nonexistent/cachelab.ini"), ConfigError);
  const auto missing = ExperimentConfig::from_config(
      KeyValueConfig::parse_string("experiment = ecdf\ncapacities = 2%\ntrace.file = /nonexistent/trace.txt\n"));
  EXPECT_THROW(load_workload(missing), ConfigError);
}

TEST(Config, TraceFileIsRelativeToConfig) {
  const auto dir = scratch("relative");
  write_file(dir / "t.txt", "0 a 5\n1 b 5\n2 a 5\n");
  write_file(dir / "run.ini", "experiment = ecdf\ncapacities = 5\ntrace.file = t.txt\n");
  const auto cfg = ExperimentConfig::load(dir / "run.ini");
  EXPECT_EQ(load_workload(cfg).size(), 3u);
}

TEST(Cli, ExitCodes) {
  const auto dir = scratch("cli");
  EXPECT_EQ(run_cli("run --config " + (dir / "missing.ini").string()), 2);
  write_file(dir / "bad.ini", "experiment = compare\npolicies = foo\ncapacities = 1M\n");
  EXPECT_EQ(run_cli("run --config " + (dir / "bad.ini").string()), 2);
  write_file(dir / "malformed.ini", "this line has no equals sign\n");
  EXPECT_EQ(run_cli("run --config " + (dir / "malformed.ini").string()), 2);
  EXPECT_EQ(run_cli("run"), 2);
  write_file(dir / "trace.txt", "0 a 5\n3 b 5\n1 c 5\n");
  write_file(dir / "decreasing.ini", "experiment = compare\npolicies = lru\ncapacities = 5\ntrace.file = trace.txt\n");
  EXPECT_NE(run_cli("run --config " + (dir / "decreasing.ini").string()), 0);
  write_file(dir / "ok.ini", std::string("experiment = compare\npolicies = lru\ncapacities = 5%\n") + kSmallSynthetic);
  EXPECT_EQ(run_cli("run --config " + (dir / "ok.ini").string() + " --deterministic --out " + (dir / "o").string()), 0);
  EXPECT_TRUE(fs::exists(dir / "o" / "compare.csv"));
}

TEST(Cli, DeterministicRunsAreByteIdentical) {
  const auto dir = scratch("determinism");
  write_file(dir / "run.ini", std::string("experiment = compare\nseed = 4\npolicies = lru, gdsf, s4lru\n"
                                          "capacities = 3%, 9%\n") +
                                  kSmallSynthetic);
  ASSERT_EQ(run_cli("run --config " + (dir / "run.ini").string() + " --deterministic --out " + (dir / "a").string()), 0);
  ASSERT_EQ(run_cli("run --config " + (dir / "run.ini").string() + " --deterministic --out " + (dir / "b").string()), 0);
  std::size_t compared = 0;
  for (const auto& entry : fs::directory_iterator(dir / "a")) {
    const auto other = dir / "b" / entry.path().filename();
    ASSERT_TRUE(fs::exists(other)) << other;
    EXPECT_EQ(slurp(entry.path()), slurp(other)) << entry.path().filename();
    ++compared;
  }
  EXPECT_GE(compared, 2u);
}

TEST(Compare, RowsAndCompulsoryMisses) {
  const auto dir = scratch("compare");
  const auto cfg = config_from(
      std::string("experiment = compare\npolicies = lru, fifo, lfuda, gdsf\ncapacities = 5%\n") + kSmallSynthetic, dir);
  run_experiment(cfg, RunOptions{true});
  const auto rows = read_csv(dir / "compare.csv");
  ASSERT_FALSE(rows.empty());
  EXPECT_EQ(rows[0], (std::vector<std::string>{"policy", "capacity", "omr", "bmr", "requests", "misses", "bytes",
                                               "bytes_missed"}));
  const auto trace = load_workload(cfg);
  ASSERT_EQ(rows.size(), 1u + 4 + 2);  // policies, belady, pfoo-l
  double bound_omr = 0.0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i][0] == "pfoo-l") bound_omr = std::stod(rows[i][2]);
  }
  for (std::size_t i = 1; i < rows.size(); ++i) {
    EXPECT_EQ(std::stoull(rows[i][4]), trace.size());
    const double o = std::stod(rows[i][2]);
    EXPECT_LE(bound_omr, o + 1e-12) << rows[i][0];
    if (rows[i][0] != "pfoo-l") {
      EXPECT_GE(std::stoull(rows[i][5]), trace.unique_objects()) << rows[i][0];
    }
  }
  EXPECT_TRUE(fs::exists(dir / "summary.json"));
}

TEST(Ecdf, WritesDistributionAndSummary) {
  const auto dir = scratch("ecdf");
  const auto cfg = config_from(std::string("experiment = ecdf\ncapacities = 2%, 8%\n") + kSmallSynthetic, dir);
  run_experiment(cfg, RunOptions{true});
  EXPECT_TRUE(fs::exists(dir / "ecdf_2pct.csv"));
  EXPECT_TRUE(fs::exists(dir / "ecdf_8pct.csv"));
  const auto rows = read_csv(dir / "ecdf_summary.csv");
  EXPECT_EQ(rows.size(), 3u);
}

TEST(Drift, OneRowPerWindow) {
  const auto dir = scratch("drift");
  const auto cfg = config_from(std::string("experiment = drift\npolicies = lru\ncapacities = 5%\n"
                                           "drift.window = 700\n") +
                                   kSmallSynthetic,
                               dir);
  run_experiment(cfg, RunOptions{true});
  const auto rows = read_csv(dir / "drift_lru.csv");
  ASSERT_FALSE(rows.empty());
  EXPECT_EQ(rows[0], (std::vector<std::string>{"window", "first_request", "omr", "bmr"}));
  const std::size_t spliced = 2 * 4000;
  EXPECT_EQ(rows.size() - 1, (spliced + 699) / 700);
  EXPECT_TRUE(fs::exists(dir / "drift_summary.csv"));
}

TEST(Separation, CertificateReverifies) {
  const auto dir = scratch("separation");
  const auto cfg = config_from("experiment = separation_search\nseed = 1\nseparation.instances = 10000\n", dir);
  run_experiment(cfg, RunOptions{true});
  ASSERT_TRUE(fs::exists(dir / "separation_certificate.json"));
  const auto cert = nlohmann::json::parse(slurp(dir / "separation_certificate.json"));
  std::ifstream in(dir / "separation_instance.txt");
  const auto t = read_trace(in);
  const auto cap = cert["capacity"].get<std::uint64_t>();
  const auto b = belady(t, cap);
  EXPECT_EQ(b.counters.misses(), brute_force_optimal(t, cap, MissObjective::kObjectMisses));
  EXPECT_LT(brute_force_optimal(t, cap, MissObjective::kByteMisses), b.counters.bytes_missed());
  EXPECT_EQ(cert["belady"]["bytes_missed"].get<std::uint64_t>(), b.counters.bytes_missed());
}

TEST(FlatRegion, WritesOneRowPerN) {
  const auto dir = scratch("flat");
  const auto cfg = config_from(std::string("experiment = flat_region\ncapacities = 2%\nflat_region.n_values = 1, 2, 8\n"
                                           "flat_region.repeats = 3\n") +
                                   kSmallSynthetic,
                               dir);
  run_experiment(cfg, RunOptions{true});
  const auto rows = read_csv(dir / "flat_region_2pct.csv");
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[1][0], "1");
  EXPECT_EQ(rows[3][0], "8");
}

TEST(Policies, FactoryNames) {
  for (const auto& name : policy_names()) {
    const auto p = make_policy(name, 1000, PolicyParams{});
    ASSERT_NE(p, nullptr);
    EXPECT_EQ(p->name(), name);
  }
  EXPECT_THROW(make_policy("bogus", 10, PolicyParams{}), ConfigError);
}
