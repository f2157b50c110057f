#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "ocs/engine.hpp"
#include "ocs/flow_size.hpp"
#include "ocs/params.hpp"
#include "ocs/workload.hpp"

namespace ocs::cli {

using nlohmann::json;

/// Config error carrying the dotted path of the offending field.
struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct WorkloadSpec {
  std::string distribution = "pfabric";  // hull | pfabric | vl2 | empirical
  WorkloadConfig cfg;
  double pareto_cutoff = kDefaultParetoCutoff;
  std::string cdf_file;
  bool mean_given = false;

  FlowSizeDistribution make_distribution() const;
};

struct RunConfig {
  PolicyKind policy = PolicyKind::Hybrid;
  SchedulerParams scheduler;
  bool alpha_given = false;
  WorkloadSpec workload;
  std::uint64_t seed = 1;
  double duration_s = 10.0;
  bool reconf_penalty = true;

  Slot horizon() const;
  /// Every field with its resolved value.
  json resolved() const;
};

struct ExperimentGrid {
  std::vector<std::string> distributions{"hull", "pfabric", "vl2"};
  std::vector<double> mean_scales{1.0};        // multiples of each family's anchor mean
  std::vector<double> mean_flow_sizes;         // absolute bytes; overrides mean_scales
  std::vector<double> host_rates{100e6, 200e6, 300e6, 400e6, 500e6, 600e6};
  std::vector<double> alphas;
  std::vector<int> degrees;
  int repeats = 5;
  std::uint64_t base_seed = 1;
  PolicyKind numerator = PolicyKind::DistributedOnly;
  PolicyKind denominator = PolicyKind::CentralizedOnly;

  std::vector<double> means_for(const std::string& distribution) const;
  json resolved() const;
};

struct CompareSpec {
  std::vector<PolicyKind> policies{PolicyKind::CentralizedOnly, PolicyKind::DistributedOnly, PolicyKind::Hybrid};
  std::vector<std::string> distributions{"hull", "pfabric", "vl2"};
  std::vector<int> degrees{1, 2, 4};
  std::map<std::string, double> alphas;  // per distribution, falls back to scheduler.alpha
  double mean_scale = 1.0;
  int repeats = 5;
  std::uint64_t base_seed = 1;

  json resolved() const;
};

/// `OCSIM_KEY` sets a top-level key, `OCSIM_SECTION__KEY` a key inside a
/// section. Names are lower-cased; values parse as JSON, else as strings.
void apply_env_overrides(json& config, const std::map<std::string, std::string>& env);
std::map<std::string, std::string> process_environment();

json load_config_file(const std::filesystem::path& path);

RunConfig parse_run_config(const json& config);
ExperimentGrid parse_grid(const json& config, const RunConfig& base);
CompareSpec parse_compare(const json& config, const RunConfig& base);

/// Trace seed for one grid coordinate; degree and alpha are excluded so
/// every policy variant replays the same traffic.
std::uint64_t cell_seed(std::uint64_t base, const std::string& distribution, double mean, double rate, int repeat);

struct CommandOptions {
  std::filesystem::path out_dir = "out";
  std::optional<std::uint64_t> seed;
  int jobs = 1;
  bool series = false;
  bool message_log = false;
  bool no_reconf_penalty = false;
};

/// Each command writes its CSV files under `out_dir`, echoes the main table
/// to `out`, and returns a process exit code.
int cmd_run(const json& config, const CommandOptions& opts, std::ostream& out);
int cmd_sweep(const json& config, const CommandOptions& opts, std::ostream& out);
int cmd_compare(const json& config, const CommandOptions& opts, std::ostream& out);

/// Quotes a CSV cell when it holds separators or quotes.
std::string csv_escape(const std::string& cell);

}  // namespace ocs::cli
