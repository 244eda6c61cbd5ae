// cachelab command line: run experiments from a config file, or write a
// synthetic trace.

#include <exception>
#include <iostream>

#include "CLI11.hpp"
#include "cachelab/error.hpp"
#include "cachelab/harness/experiment.hpp"
#include "cachelab/log.hpp"
#include "cachelab/synthetic.hpp"
#include "cachelab/trace_io.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Trace-driven cache replacement laboratory"};
  app.require_subcommand(1);
  bool verbose = false;
  app.add_flag("-v,--verbose", verbose, "Log progress to stderr");

  auto* run = app.add_subcommand("run", "Run the experiment described by a config file");
  std::string config_path;
  std::string out_dir;
  bool deterministic = false;
  run->add_option("--config", config_path, "Experiment config file")->required();
  run->add_option("--out", out_dir, "Output directory (overrides `output` in the config)");
  run->add_flag("--deterministic", deterministic, "Leave wall-clock values out of the reports");

  auto* gen = app.add_subcommand("generate", "Write a synthetic trace described by a config file");
  std::string gen_config;
  std::string gen_out;
  gen->add_option("--config", gen_config, "Synthetic workload config ([synthetic] keys or flat)")->required();
  gen->add_option("--out", gen_out, "Trace file to write")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }
  if (verbose) cachelab::log::set_level(cachelab::log::Level::kInfo);

  try {
    if (*run) {
      auto config = cachelab::ExperimentConfig::load(config_path);
      if (!out_dir.empty()) config.output_dir = out_dir;
      cachelab::RunOptions options;
      options.deterministic = deterministic;
      const auto result = cachelab::run_experiment(config, options);
      for (const auto& f : result.files) std::cout << f.string() << '\n';
    } else if (*gen) {
      auto kv = cachelab::KeyValueConfig::load(gen_config);
      const auto section = kv.section("synthetic.");
      const auto synthetic =
          cachelab::SyntheticConfig::from_config(section.values().empty() ? kv : section);
      cachelab::write_trace_file(cachelab::generate_synthetic(synthetic), gen_out);
    }
  } catch (const cachelab::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const cachelab::ParseError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return 0;
}
