#include <iostream>

#include "CLI11.hpp"
#include "ocs/cli.hpp"

namespace {

struct Args {
  std::string config;
  ocs::cli::CommandOptions opts;
  std::uint64_t seed = 0;
};

void add_common(CLI::App* cmd, Args& a) {
  cmd->add_option("--config", a.config, "JSON config file")->check(CLI::ExistingFile);
  cmd->add_option("--out", a.opts.out_dir, "output directory")->capture_default_str();
  cmd->add_option("--seed", a.seed, "override the config seed");
  cmd->add_flag("--no-reconf-penalty", a.opts.no_reconf_penalty, "disable the first-slot reconfiguration haircut");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Slotted simulator for optical circuit scheduling in datacenter networks"};
  app.require_subcommand(1);
  Args a;

  auto* run = app.add_subcommand("run", "one simulation; writes summary.csv");
  add_common(run, a);
  run->add_flag("--series", a.opts.series, "also write the per-slot series.csv");
  run->add_flag("--message-log", a.opts.message_log, "also write messages.csv with every protocol message");

  auto* sweep = app.add_subcommand("sweep", "policy-ratio heatmap over the grid section");
  add_common(sweep, a);
  sweep->add_option("--jobs", a.opts.jobs, "worker threads")->check(CLI::PositiveNumber);

  auto* compare = app.add_subcommand("compare", "per-policy ratios over the compare section");
  add_common(compare, a);
  compare->add_option("--jobs", a.opts.jobs, "worker threads")->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);

  try {
    auto* active = app.get_subcommands().front();
    if (active->count("--seed")) a.opts.seed = a.seed;
    nlohmann::json config = a.config.empty() ? nlohmann::json::object() : ocs::cli::load_config_file(a.config);
    ocs::cli::apply_env_overrides(config, ocs::cli::process_environment());
    if (active == run) return ocs::cli::cmd_run(config, a.opts, std::cout);
    if (active == sweep) return ocs::cli::cmd_sweep(config, a.opts, std::cout);
    return ocs::cli::cmd_compare(config, a.opts, std::cout);
  } catch (const ocs::cli::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
