// Command-line front end: run, sweep, oracle-check, figure <3..9>.

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "specshare/config.hpp"
#include "specshare/experiment.hpp"
#include "specshare/oracle.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitOracle = 2;

struct CommonFlags {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_path;
  std::optional<std::size_t> runs;
  bool quiet = false;
};

void add_common(CLI::App* cmd, CommonFlags& flags, bool needs_config) {
  auto* opt = cmd->add_option("--config", flags.config_path, "Experiment config file");
  if (needs_config) opt->required()->check(CLI::ExistingFile);
  cmd->add_option("--seed", flags.seed, "Base seed (overrides base_seed)");
  cmd->add_option("--out", flags.out_path, "Write CSV here instead of stdout");
  cmd->add_option("--runs", flags.runs, "Override the number of runs")->check(CLI::PositiveNumber);
  cmd->add_flag("--quiet", flags.quiet, "Suppress progress and warnings");
}

std::ostream& open_output(const std::string& path, std::ofstream& file) {
  if (path.empty()) return std::cout;
  file.open(path, std::ios::binary);
  if (!file) throw specshare::ConfigError("cannot write '" + path + "'");
  return file;
}

int run_table(specshare::ExperimentConfig config, const CommonFlags& flags) {
  if (flags.seed) config.base_seed = *flags.seed;
  if (flags.runs) config.runs = *flags.runs;
  specshare::validate(config);

  specshare::ProgressCallback progress;
  if (!flags.quiet) {
    progress = [](std::size_t done, std::size_t total) {
      if (done == total || done % 50 == 0) {
        std::cerr << "\r" << done << "/" << total << " episodes" << (done == total ? "\n" : "")
                  << std::flush;
      }
    };
  }
  const auto rows = specshare::run_experiment(config, specshare::default_worker_count(), progress);
  std::ofstream file;
  specshare::write_csv(open_output(flags.out_path, file), rows);
  return kExitOk;
}

specshare::ExperimentConfig load(const CommonFlags& flags) {
  std::vector<std::string> warnings;
  auto config = specshare::load_config(flags.config_path, &warnings);
  if (!flags.quiet) {
    for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
  }
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multichannel spectrum access simulator"};
  app.require_subcommand(1);

  CommonFlags run_flags, sweep_flags, figure_flags, oracle_flags;
  auto* run = app.add_subcommand("run", "Run a single (non-sweep) configuration");
  add_common(run, run_flags, true);
  auto* sweep = app.add_subcommand("sweep", "Run a configuration with a sweep block");
  add_common(sweep, sweep_flags, true);
  auto* oracle = app.add_subcommand("oracle-check", "Compare closed forms with value iteration");
  oracle->add_option("--out", oracle_flags.out_path, "Write the comparison table here");
  oracle->add_flag("--quiet", oracle_flags.quiet, "Only set the exit code");
  int figure_number = 0;
  auto* figure = app.add_subcommand("figure", "Run a preset experiment");
  figure->add_option("number", figure_number, "Figure preset, 3..9")->required()->check(CLI::Range(3, 9));
  add_common(figure, figure_flags, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*run) {
      auto config = load(run_flags);
      if (config.sweep != specshare::SweepVariable::None) {
        throw specshare::ConfigError("config has a sweep block; use the sweep subcommand");
      }
      return run_table(std::move(config), run_flags);
    }
    if (*sweep) {
      auto config = load(sweep_flags);
      if (config.sweep == specshare::SweepVariable::None) {
        throw specshare::ConfigError("config has no sweep_var; use the run subcommand");
      }
      return run_table(std::move(config), sweep_flags);
    }
    if (*figure) {
      auto config = figure_flags.config_path.empty() ? specshare::figure_preset(figure_number)
                                                     : load(figure_flags);
      return run_table(std::move(config), figure_flags);
    }
    if (*oracle) {
      const auto report = specshare::oracle_check();
      std::ofstream file;
      if (oracle_flags.out_path.empty()) {
        if (!oracle_flags.quiet) specshare::write_oracle_table(std::cout, report);
      } else {
        specshare::write_oracle_table(open_output(oracle_flags.out_path, file), report);
      }
      if (!oracle_flags.quiet) specshare::write_oracle_summary(std::cerr, report);
      return report.passed() ? kExitOk : kExitOracle;
    }
  } catch (const specshare::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitOk;
}
