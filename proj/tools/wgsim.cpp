// wgsim: command-line driver. One subcommand per experiment, all driven by a
// JSON run configuration.
//
// Exit codes: 0 success, 1 other failure, 2 configuration error,
// 3 resource limit, 4 numerical invariant violation.

#include <CLI11.hpp>
#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "wgsim/commands.hpp"
#include "wgsim/config.hpp"
#include "wgsim/parallel.hpp"

namespace {

struct Options {
  std::string config;
  std::string out = "out";
  std::optional<std::uint64_t> seed;
  std::size_t threads = 0;
  bool reproducible = false;
};

enum Exit { kOk = 0, kFailure = 1, kConfig = 2, kResource = 3, kInvariant = 4 };

wgsim::app::RunConfig load(const Options& opt, const std::string& subcommand) {
  auto cfg = wgsim::app::load_config(opt.config);
  if (wgsim::app::to_string(cfg.command) != subcommand) {
    throw wgsim::app::ConfigError("command", "configuration is for '" + wgsim::app::to_string(cfg.command) +
                                                 "', not '" + subcommand + "'");
  }
  if (opt.seed) cfg.seed = *opt.seed;
  if (opt.reproducible) cfg.reproducible = true;
  return cfg;
}

int guarded(const std::function<void()>& body) {
  try {
    body();
    return kOk;
  } catch (const wgsim::app::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const wgsim::ResourceError& e) {
    std::cerr << "resource limit: " << e.what() << "\n";
    return kResource;
  } catch (const wgsim::InvariantViolation& e) {
    std::cerr << "invariant violated: " << e.what() << "\n";
    return kInvariant;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailure;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Phase-space simulator for waveguide quantum optics"};
  app.require_subcommand(1);
  Options opt;

  const char* runs[] = {"states", "twomode", "cutoff-study", "fourmode", "classify"};
  for (const char* name : runs) {
    auto* sub = app.add_subcommand(name, std::string("Run the ") + name + " experiment");
    sub->add_option("--config", opt.config, "Run configuration (JSON)")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", opt.out, "Output directory")->capture_default_str();
    sub->add_option("--seed", opt.seed, "Override the configuration seed");
    sub->add_option("--threads", opt.threads, "Worker threads (0 = hardware concurrency)");
    sub->add_flag("--reproducible", opt.reproducible, "Request bit-reproducible output");
  }
  auto* validate = app.add_subcommand("validate", "Check a configuration without running it");
  validate->add_option("--config", opt.config, "Run configuration (JSON)")->required()->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kConfig;
  }

  const auto* sub = app.get_subcommands().front();
  const std::string name = sub->get_name();
  wgsim::set_thread_count(opt.threads);

  if (name == "validate") {
    return guarded([&] {
      const auto cfg = wgsim::app::load_config(opt.config);
      std::cout << opt.config << ": ok (" << wgsim::app::to_string(cfg.command) << ", config_hash=" << cfg.hash
                << ")\n";
    });
  }
  return guarded([&] {
    const auto cfg = load(opt, name);
    const auto summary = wgsim::app::run(cfg, opt.out);
    for (const auto& w : summary.warnings) std::cerr << "warning: " << w << "\n";
    for (const auto& [key, value] : summary.metrics) std::cout << key << " = " << value << "\n";
    std::cout << "wrote " << summary.files.size() << " files to " << opt.out << "\n";
  });
}
