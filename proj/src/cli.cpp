#include "ocs/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cstring>
#include <cmath>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <thread>

#include "ocs/random.hpp"

extern char** environ;

namespace ocs::cli {

namespace fs = std::filesystem;

namespace {

// Reads typed keys from one JSON object and rejects keys nobody asked for.
class Section {
 public:
  Section(const json& root, const std::string& name) : name_(name) {
    if (name.empty()) {
      obj_ = &root;
    } else if (root.contains(name)) {
      obj_ = &root.at(name);
    } else {
      obj_ = &empty_;
    }
    if (!obj_->is_object()) throw ConfigError(prefix() + (name.empty() ? "config" : name) + ": expected an object");
  }

  bool has(const std::string& key) const { return obj_->contains(key); }

  template <class T>
  bool get(const std::string& key, T& out) {
    used_.insert(key);
    if (!obj_->contains(key)) return false;
    const json& v = obj_->at(key);
    try {
      if constexpr (std::is_same_v<T, bool>) {
        if (!v.is_boolean()) throw ConfigError(path(key) + ": expected true or false");
      } else if constexpr (std::is_integral_v<T>) {
        if (!v.is_number_integer()) throw ConfigError(path(key) + ": expected an integer");
        if constexpr (std::is_unsigned_v<T>)
          if (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0)
            throw ConfigError(path(key) + ": must be non-negative");
      } else if constexpr (std::is_floating_point_v<T>) {
        if (!v.is_number()) throw ConfigError(path(key) + ": expected a number");
      } else if constexpr (std::is_same_v<T, std::string>) {
        if (!v.is_string()) throw ConfigError(path(key) + ": expected a string");
      }
      out = v.get<T>();
    } catch (const json::exception& e) {
      throw ConfigError(path(key) + ": " + e.what());
    }
    return true;
  }

  void reserve(const std::string& key) { used_.insert(key); }

  void finish() const {
    for (const auto& [key, value] : obj_->items())
      if (!used_.contains(key)) throw ConfigError(path(key) + ": unknown key");
  }

  std::string path(const std::string& key) const { return prefix() + key; }

 private:
  std::string prefix() const { return name_.empty() ? "" : name_ + "."; }

  static inline const json empty_ = json::object();
  std::string name_;
  const json* obj_;
  std::set<std::string> used_;
};

template <class F>
void rethrow_as(const std::string& section, F&& f) {
  try {
    f();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(section + "." + e.what());
  }
}

bool is_family(const std::string& d) { return d == "hull" || d == "pfabric" || d == "vl2"; }

std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t double_bits(double v) {
  std::uint64_t b;
  static_assert(sizeof b == sizeof v);
  std::memcpy(&b, &v, sizeof b);
  return b;
}

template <class F>
void parallel_for(std::size_t n, int jobs, F&& body) {
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < n;) body(i);
  };
  const auto threads = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, jobs)));
  if (threads <= 1) {
    worker();
    return;
  }
  std::vector<std::jthread> pool;
  for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
}

void write_row(std::ostream& os, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << csv_escape(cells[i]);
  os << '\n';
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  return f;
}

void write_json(const fs::path& path, const json& j) {
  auto f = open_out(path);
  f << j.dump(2) << '\n';
}

double anchor_for(const WorkloadSpec& spec) {
  if (spec.distribution == "empirical") {
    WorkloadSpec raw = spec;
    raw.mean_given = false;
    return raw.make_distribution().mean();
  }
  return anchor_mean(spec.distribution);
}

void check_distribution(const WorkloadSpec& spec, const std::string& field) {
  if (spec.distribution == "empirical") {
    if (spec.cdf_file.empty()) throw ConfigError(field + ": 'empirical' needs workload.cdf_file");
  } else if (!is_family(spec.distribution)) {
    throw ConfigError(field + ": unknown distribution '" + spec.distribution +
                      "' (expected hull, pfabric, vl2 or empirical)");
  }
}

struct RunOutcome {
  MetricsReport report;
  std::string error;
};

double mean_of(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += x;
  return v.empty() ? std::nan("") : s / static_cast<double>(v.size());
}

double stddev_of(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean_of(v);
  double s = 0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

}  // namespace

std::string csv_escape(const std::string& cell) {
  if (cell.find_first_of(",\"\n") == std::string::npos) return cell;
  std::string out = "\"";
  for (char c : cell) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

FlowSizeDistribution WorkloadSpec::make_distribution() const {
  if (distribution == "empirical") {
    std::ifstream f(cdf_file);
    if (!f) throw ConfigError("workload.cdf_file: cannot open '" + cdf_file + "'");
    auto d = FlowSizeDistribution::empirical_csv(f);
    return mean_given ? d.scaled_to_mean(cfg.mean_flow_size) : d;
  }
  return ocs::make_distribution(distribution, cfg.mean_flow_size, pareto_cutoff);
}

Slot RunConfig::horizon() const {
  return std::max<Slot>(1, static_cast<Slot>(std::llround(duration_s / scheduler.slot_len_s)));
}

json RunConfig::resolved() const {
  const auto& s = scheduler;
  const auto& w = workload.cfg;
  return {
      {"policy", to_string(policy)},
      {"seed", seed},
      {"duration_s", duration_s},
      {"reconf_penalty", reconf_penalty},
      {"scheduler",
       {{"racks", s.racks},
        {"degree", s.degree},
        {"epoch", s.epoch},
        {"central_delay", s.central_delay},
        {"dist_delay", s.dist_delay},
        {"central_window", s.central_window},
        {"dist_window", s.dist_window},
        {"alpha", s.alpha},
        {"top_m", s.top_m},
        {"max_reqs", s.max_reqs},
        {"slot_len_s", s.slot_len_s},
        {"circuit_cap", s.circuit_cap}}},
      {"workload",
       {{"distribution", workload.distribution},
        {"mean_flow_size", w.mean_flow_size},
        {"hosts_per_rack", w.hosts_per_rack},
        {"host_rate", w.host_rate_bps},
        {"host_link", w.host_link_bps},
        {"hot_fraction", w.dispersion.hot_fraction},
        {"hot_weight", w.dispersion.hot_weight},
        {"pareto_cutoff", workload.pareto_cutoff},
        {"cdf_file", workload.cdf_file}}},
  };
}

std::vector<double> ExperimentGrid::means_for(const std::string& distribution) const {
  if (!mean_flow_sizes.empty()) return mean_flow_sizes;
  std::vector<double> out;
  for (double s : mean_scales) out.push_back(s * anchor_mean(distribution));
  return out;
}

json ExperimentGrid::resolved() const {
  return {{"distributions", distributions},
          {"mean_scales", mean_scales},
          {"mean_flow_sizes", mean_flow_sizes},
          {"host_rates", host_rates},
          {"alphas", alphas},
          {"degrees", degrees},
          {"repeats", repeats},
          {"base_seed", base_seed},
          {"ratio", {to_string(numerator), to_string(denominator)}}};
}

json CompareSpec::resolved() const {
  std::vector<std::string> names;
  for (auto p : policies) names.push_back(to_string(p));
  return {{"policies", names},   {"distributions", distributions}, {"degrees", degrees},
          {"alphas", alphas},    {"mean_scale", mean_scale},       {"repeats", repeats},
          {"base_seed", base_seed}};
}

void apply_env_overrides(json& config, const std::map<std::string, std::string>& env) {
  static const std::string prefix = "OCSIM_";
  for (const auto& [name, raw] : env) {
    if (name.rfind(prefix, 0) != 0 || name.size() == prefix.size()) continue;
    const std::string key = lower(name.substr(prefix.size()));
    json value = json::parse(raw, nullptr, false);
    if (value.is_discarded()) value = raw;
    const auto split = key.find("__");
    if (split == std::string::npos) {
      config[key] = value;
    } else {
      const std::string section = key.substr(0, split), field = key.substr(split + 2);
      if (section.empty() || field.empty()) throw ConfigError("environment: malformed override " + name);
      if (config.contains(section) && !config[section].is_object())
        throw ConfigError("environment: " + section + " is not a section");
      config[section][field] = value;
    }
  }
}

std::map<std::string, std::string> process_environment() {
  std::map<std::string, std::string> out;
  for (char** e = environ; e && *e; ++e) {
    const std::string kv = *e;
    const auto eq = kv.find('=');
    if (eq != std::string::npos) out[kv.substr(0, eq)] = kv.substr(eq + 1);
  }
  return out;
}

json load_config_file(const fs::path& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("config: cannot open '" + path.string() + "'");
  json j = json::parse(f, nullptr, false, true);
  if (j.is_discarded()) throw ConfigError("config: '" + path.string() + "' is not valid JSON");
  if (!j.is_object()) throw ConfigError("config: top level must be an object");
  return j;
}

namespace {

RunConfig parse_run_config_impl(const json& config, bool require_policy_alpha) {
  RunConfig rc;
  Section top(config, "");
  std::string policy = to_string(rc.policy);
  top.get("policy", policy);
  try {
    rc.policy = parse_policy(policy);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("policy: ") + e.what());
  }
  top.get("seed", rc.seed);
  top.get("duration_s", rc.duration_s);
  top.get("reconf_penalty", rc.reconf_penalty);
  top.reserve("scheduler");
  top.reserve("workload");
  top.reserve("grid");
  top.reserve("compare");
  top.finish();
  if (!(rc.duration_s > 0.0)) throw ConfigError("duration_s: must be positive");

  Section sch(config, "scheduler");
  int racks = 16, degree = 1;
  sch.get("racks", racks);
  sch.get("degree", degree);
  if (racks < 2) throw ConfigError("scheduler.racks: need at least 2 racks");
  if (degree < 1 || degree >= racks) throw ConfigError("scheduler.degree: must satisfy 1 <= k < n");
  auto& p = rc.scheduler;
  p = SchedulerParams::defaults(racks, degree);
  sch.get("epoch", p.epoch);
  sch.get("central_delay", p.central_delay);
  sch.get("dist_delay", p.dist_delay);
  sch.get("central_window", p.central_window);
  sch.get("dist_window", p.dist_window);
  rc.alpha_given = sch.get("alpha", p.alpha);
  sch.get("top_m", p.top_m);
  sch.get("max_reqs", p.max_reqs);
  sch.get("slot_len_s", p.slot_len_s);
  sch.get("circuit_cap", p.circuit_cap);
  sch.finish();
  rethrow_as("scheduler", [&] { p.validate(); });
  if (require_policy_alpha && rc.policy == PolicyKind::Hybrid && !rc.alpha_given)
    throw ConfigError("scheduler.alpha: required for the hybrid policy");

  Section wl(config, "workload");
  auto& w = rc.workload;
  wl.get("distribution", w.distribution);
  w.mean_given = wl.get("mean_flow_size", w.cfg.mean_flow_size);
  wl.get("hosts_per_rack", w.cfg.hosts_per_rack);
  wl.get("host_rate", w.cfg.host_rate_bps);
  wl.get("host_link", w.cfg.host_link_bps);
  wl.get("hot_fraction", w.cfg.dispersion.hot_fraction);
  wl.get("hot_weight", w.cfg.dispersion.hot_weight);
  wl.get("pareto_cutoff", w.pareto_cutoff);
  wl.get("cdf_file", w.cdf_file);
  wl.finish();
  check_distribution(w, "workload.distribution");
  if (!w.mean_given) w.cfg.mean_flow_size = anchor_for(w);
  if (!(w.pareto_cutoff > 1.0)) throw ConfigError("workload.pareto_cutoff: must exceed 1");
  w.cfg.seed = rc.seed;
  rethrow_as("workload", [&] { w.cfg.validate(); });
  return rc;
}

}  // namespace

RunConfig parse_run_config(const json& config) { return parse_run_config_impl(config, true); }

ExperimentGrid parse_grid(const json& config, const RunConfig& base) {
  ExperimentGrid g;
  g.base_seed = base.seed;
  g.degrees = {base.scheduler.degree};
  if (base.alpha_given) g.alphas = {base.scheduler.alpha};
  if (base.workload.distribution == "empirical") g.distributions = {"empirical"};

  Section s(config, "grid");
  s.get("distributions", g.distributions);
  s.get("mean_scales", g.mean_scales);
  s.get("mean_flow_sizes", g.mean_flow_sizes);
  s.get("host_rates", g.host_rates);
  s.get("alphas", g.alphas);
  s.get("degrees", g.degrees);
  s.get("repeats", g.repeats);
  s.get("base_seed", g.base_seed);
  std::vector<std::string> ratio;
  if (s.get("ratio", ratio)) {
    if (ratio.size() != 2) throw ConfigError("grid.ratio: expected [numerator, denominator]");
    try {
      g.numerator = parse_policy(ratio[0]);
      g.denominator = parse_policy(ratio[1]);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("grid.ratio: ") + e.what());
    }
  }
  s.finish();

  const bool hybrid = g.numerator == PolicyKind::Hybrid || g.denominator == PolicyKind::Hybrid;
  if (g.alphas.empty()) {
    if (hybrid) throw ConfigError("grid.alphas: required when the ratio involves the hybrid policy");
    g.alphas = {base.scheduler.alpha};
  }
  if (!hybrid) g.alphas.resize(1);
  if (g.distributions.empty()) throw ConfigError("grid.distributions: must not be empty");
  if (g.mean_scales.empty() && g.mean_flow_sizes.empty()) throw ConfigError("grid.mean_scales: must not be empty");
  if (g.host_rates.empty()) throw ConfigError("grid.host_rates: must not be empty");
  if (g.degrees.empty()) throw ConfigError("grid.degrees: must not be empty");
  if (g.repeats < 1) throw ConfigError("grid.repeats: must be >= 1");
  for (const auto& d : g.distributions) {
    WorkloadSpec probe = base.workload;
    probe.distribution = d;
    check_distribution(probe, "grid.distributions");
  }
  for (double m : g.mean_scales)
    if (!(m > 0)) throw ConfigError("grid.mean_scales: entries must be positive");
  for (double m : g.mean_flow_sizes)
    if (!(m > 0)) throw ConfigError("grid.mean_flow_sizes: entries must be positive");
  for (double r : g.host_rates)
    if (!(r >= 0)) throw ConfigError("grid.host_rates: entries must be >= 0");
  for (double a : g.alphas)
    if (!(a >= 0) || !std::isfinite(a)) throw ConfigError("grid.alphas: entries must be finite and >= 0");
  for (int k : g.degrees)
    if (k < 1 || k >= base.scheduler.racks) throw ConfigError("grid.degrees: must satisfy 1 <= k < n");
  return g;
}

CompareSpec parse_compare(const json& config, const RunConfig& base) {
  CompareSpec c;
  c.base_seed = base.seed;
  if (base.workload.distribution == "empirical") c.distributions = {"empirical"};
  Section s(config, "compare");
  std::vector<std::string> names;
  if (s.get("policies", names)) {
    c.policies.clear();
    for (const auto& n : names) {
      try {
        c.policies.push_back(parse_policy(n));
      } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("compare.policies: ") + e.what());
      }
    }
  }
  s.get("distributions", c.distributions);
  s.get("degrees", c.degrees);
  s.get("alphas", c.alphas);
  s.get("mean_scale", c.mean_scale);
  s.get("repeats", c.repeats);
  s.get("base_seed", c.base_seed);
  s.finish();

  if (c.policies.empty()) throw ConfigError("compare.policies: must not be empty");
  if (c.distributions.empty()) throw ConfigError("compare.distributions: must not be empty");
  if (c.degrees.empty()) throw ConfigError("compare.degrees: must not be empty");
  if (c.repeats < 1) throw ConfigError("compare.repeats: must be >= 1");
  if (!(c.mean_scale > 0)) throw ConfigError("compare.mean_scale: must be positive");
  for (int k : c.degrees)
    if (k < 1 || k >= base.scheduler.racks) throw ConfigError("compare.degrees: must satisfy 1 <= k < n");
  const bool hybrid = std::find(c.policies.begin(), c.policies.end(), PolicyKind::Hybrid) != c.policies.end();
  for (const auto& d : c.distributions) {
    WorkloadSpec probe = base.workload;
    probe.distribution = d;
    check_distribution(probe, "compare.distributions");
    if (hybrid && !c.alphas.contains(d) && !base.alpha_given)
      throw ConfigError("compare.alphas: no alpha for '" + d + "' and scheduler.alpha is unset");
  }
  for (const auto& [d, a] : c.alphas)
    if (!(a >= 0) || !std::isfinite(a)) throw ConfigError("compare.alphas." + d + ": must be finite and >= 0");
  return c;
}

std::uint64_t cell_seed(std::uint64_t base, const std::string& distribution, double mean, double rate, int repeat) {
  std::uint64_t h = splitmix64(base);
  h = splitmix64(h ^ fnv1a(distribution));
  h = splitmix64(h ^ double_bits(mean));
  h = splitmix64(h ^ double_bits(rate));
  return splitmix64(h ^ static_cast<std::uint64_t>(repeat));
}

namespace {

RunConfig apply_flags(RunConfig rc, const CommandOptions& opts) {
  if (opts.seed) {
    rc.seed = *opts.seed;
    rc.workload.cfg.seed = *opts.seed;
  }
  if (opts.no_reconf_penalty) rc.reconf_penalty = false;
  return rc;
}

std::vector<std::string> run_columns() {
  std::vector<std::string> cols{"seed", "distribution", "mean_flow_size", "host_rate", "alpha", "reconf_penalty"};
  for (auto& c : summary_columns()) cols.push_back(c);
  cols.push_back("config");
  return cols;
}

}  // namespace

int cmd_run(const json& config, const CommandOptions& opts, std::ostream& out) {
  json cfg = config;
  if (opts.seed) cfg["seed"] = *opts.seed;
  const RunConfig rc = apply_flags(parse_run_config(cfg), opts);
  fs::create_directories(opts.out_dir);

  const auto dist = rc.workload.make_distribution();
  const TrafficTrace trace = synthesize_trace(rc.workload.cfg, dist, rc.scheduler, rc.horizon());
  std::vector<ProtocolMessage> log;
  EngineOptions eo;
  eo.reconf_penalty = rc.reconf_penalty;
  eo.keep_series = opts.series;
  if (opts.message_log) eo.message_log = &log;
  const MetricsReport report = run(trace, Policy{rc.policy, rc.scheduler}, eo);

  const json resolved = rc.resolved();
  std::vector<std::string> row{std::to_string(rc.seed),
                               rc.workload.distribution,
                               format_double(rc.workload.cfg.mean_flow_size),
                               format_double(rc.workload.cfg.host_rate_bps),
                               format_double(rc.scheduler.alpha),
                               rc.reconf_penalty ? "1" : "0"};
  for (auto& v : summary_values(report)) row.push_back(v);
  row.push_back(resolved.dump());

  std::ostringstream summary;
  write_row(summary, run_columns());
  write_row(summary, row);
  open_out(opts.out_dir / "summary.csv") << summary.str();
  write_json(opts.out_dir / "config.json", resolved);
  if (opts.series) {
    auto f = open_out(opts.out_dir / "series.csv");
    write_series_csv(f, report);
  }
  if (opts.message_log) {
    auto f = open_out(opts.out_dir / "messages.csv");
    write_message_log(f, log);
  }
  out << summary.str();
  return 0;
}

int cmd_sweep(const json& config, const CommandOptions& opts, std::ostream& out) {
  json cfg = config;
  if (opts.seed) cfg["seed"] = *opts.seed;
  const RunConfig base = apply_flags(parse_run_config_impl(cfg, false), opts);
  const ExperimentGrid grid = parse_grid(cfg, base);
  fs::create_directories(opts.out_dir);

  struct Task {
    std::string dist;
    double mean;
    double rate;
    int repeat;
    std::uint64_t seed;
  };
  std::vector<Task> tasks;
  for (const auto& d : grid.distributions) {
    WorkloadSpec probe = base.workload;
    probe.distribution = d;
    const double anchor = anchor_for(probe);
    std::vector<double> means = grid.mean_flow_sizes;
    if (means.empty())
      for (double s : grid.mean_scales) means.push_back(s * anchor);
    for (double m : means)
      for (double r : grid.host_rates)
        for (int rep = 0; rep < grid.repeats; ++rep) tasks.push_back({d, m, r, rep, cell_seed(grid.base_seed, d, m, r, rep)});
  }
  const PolicyKind sides[2] = {grid.numerator, grid.denominator};
  const std::size_t per_task = grid.degrees.size() * grid.alphas.size() * 2;
  std::vector<RunOutcome> results(tasks.size() * per_task);

  parallel_for(tasks.size(), opts.jobs, [&](std::size_t ti) {
    const Task& t = tasks[ti];
    std::size_t slot = ti * per_task;
    try {
      WorkloadSpec w = base.workload;
      w.distribution = t.dist;
      w.cfg.mean_flow_size = t.mean;
      w.mean_given = true;
      w.cfg.host_rate_bps = t.rate;
      w.cfg.seed = t.seed;
      const TrafficTrace trace = synthesize_trace(w.cfg, w.make_distribution(), base.scheduler, base.horizon());
      for (int k : grid.degrees)
        for (double a : grid.alphas)
          for (PolicyKind side : sides) {
            auto& res = results[slot++];
            try {
              SchedulerParams p = base.scheduler;
              p.degree = k;
              p.max_reqs = std::max(p.max_reqs, 2 * k);
              p.alpha = a;
              EngineOptions eo;
              eo.reconf_penalty = base.reconf_penalty;
              eo.keep_series = false;
              res.report = run(trace, Policy{side, p}, eo);
            } catch (const std::exception& e) {
              res.error = e.what();
            }
          }
    } catch (const std::exception& e) {
      for (std::size_t i = ti * per_task; i < (ti + 1) * per_task; ++i) results[i].error = e.what();
    }
  });

  bool failures = false;
  {
    auto f = open_out(opts.out_dir / "sweep_runs.csv");
    std::vector<std::string> cols{"distribution", "mean_flow_size", "host_rate", "degree", "alpha", "repeat", "seed"};
    for (auto& c : summary_columns()) cols.push_back(c);
    cols.push_back("error");
    write_row(f, cols);
    for (std::size_t ti = 0; ti < tasks.size(); ++ti) {
      std::size_t slot = ti * per_task;
      for (int k : grid.degrees)
        for (double a : grid.alphas)
          for (PolicyKind side : sides) {
            const auto& res = results[slot++];
            const auto& t = tasks[ti];
            std::vector<std::string> row{t.dist,           format_double(t.mean), format_double(t.rate),
                                         std::to_string(k), format_double(a),     std::to_string(t.repeat),
                                         std::to_string(t.seed)};
            if (res.error.empty()) {
              for (auto& v : summary_values(res.report)) row.push_back(v);
            } else {
              failures = true;
              row.push_back(to_string(side));
              row.resize(row.size() + summary_columns().size() - 1);
            }
            row.push_back(res.error);
            write_row(f, row);
          }
    }
  }

  // Aggregate cells in task order: (dist, mean, rate) blocks of `repeats` tasks.
  std::ostringstream heat;
  write_row(heat, {"distribution", "degree", "alpha", "mean_flow_size", "host_rate", "numerator", "denominator",
                   "numerator_ratio", "denominator_ratio", "ratio", "runs", "errors"});
  struct Block {
    std::string dist;
    int degree;
    double alpha;
    std::vector<double> means, rates;
    std::map<std::pair<double, double>, std::string> cells;
  };
  std::vector<Block> blocks;
  auto block_for = [&](const std::string& d, int k, double a) -> Block& {
    for (auto& b : blocks)
      if (b.dist == d && b.degree == k && b.alpha == a) return b;
    blocks.push_back({d, k, a, {}, {}, {}});
    return blocks.back();
  };
  for (std::size_t first = 0; first < tasks.size(); first += static_cast<std::size_t>(grid.repeats)) {
    const Task& t = tasks[first];
    std::size_t combo = 0;
    for (int k : grid.degrees)
      for (double a : grid.alphas) {
        std::vector<double> num, den;
        std::string errors;
        for (int rep = 0; rep < grid.repeats; ++rep) {
          const std::size_t base_slot = (first + rep) * per_task + combo * 2;
          const auto& rn = results[base_slot];
          const auto& rd = results[base_slot + 1];
          if (!rn.error.empty() || !rd.error.empty()) {
            errors += (errors.empty() ? "" : "; ") + (rn.error.empty() ? rd.error : rn.error);
            continue;
          }
          num.push_back(rn.report.optical_throughput_ratio);
          den.push_back(rd.report.optical_throughput_ratio);
        }
        ++combo;
        const double mn = mean_of(num), md = mean_of(den);
        const std::string ratio = num.empty() ? "" : format_double(mn / md);
        write_row(heat, {t.dist, std::to_string(k), format_double(a), format_double(t.mean), format_double(t.rate),
                         to_string(grid.numerator), to_string(grid.denominator), num.empty() ? "" : format_double(mn),
                         num.empty() ? "" : format_double(md), ratio, std::to_string(num.size()), errors});
        Block& b = block_for(t.dist, k, a);
        if (std::find(b.means.begin(), b.means.end(), t.mean) == b.means.end()) b.means.push_back(t.mean);
        if (std::find(b.rates.begin(), b.rates.end(), t.rate) == b.rates.end()) b.rates.push_back(t.rate);
        b.cells[{t.mean, t.rate}] = ratio;
      }
  }
  open_out(opts.out_dir / "heatmap.csv") << heat.str();
  for (const auto& b : blocks) {
    auto f = open_out(opts.out_dir / ("heatmap_" + b.dist + "_k" + std::to_string(b.degree) + "_a" +
                                      format_double(b.alpha) + ".csv"));
    std::vector<std::string> header{"mean_flow_size"};
    for (double r : b.rates) header.push_back(format_double(r));
    write_row(f, header);
    for (double m : b.means) {
      std::vector<std::string> row{format_double(m)};
      for (double r : b.rates) row.push_back(b.cells.at({m, r}));
      write_row(f, row);
    }
  }
  json resolved = base.resolved();
  resolved["grid"] = grid.resolved();
  write_json(opts.out_dir / "sweep_config.json", resolved);
  out << heat.str();
  return failures ? 1 : 0;
}

int cmd_compare(const json& config, const CommandOptions& opts, std::ostream& out) {
  json cfg = config;
  if (opts.seed) cfg["seed"] = *opts.seed;
  const RunConfig base = apply_flags(parse_run_config_impl(cfg, false), opts);
  const CompareSpec spec = parse_compare(cfg, base);
  fs::create_directories(opts.out_dir);

  auto alpha_for = [&](const std::string& d) {
    auto it = spec.alphas.find(d);
    return it != spec.alphas.end() ? it->second : base.scheduler.alpha;
  };
  struct Task {
    std::string dist;
    double mean;
    int repeat;
    std::uint64_t seed;
  };
  std::vector<Task> tasks;
  for (const auto& d : spec.distributions) {
    WorkloadSpec probe = base.workload;
    probe.distribution = d;
    const double mean = spec.mean_scale * anchor_for(probe);
    for (int rep = 0; rep < spec.repeats; ++rep)
      tasks.push_back({d, mean, rep, cell_seed(spec.base_seed, d, mean, base.workload.cfg.host_rate_bps, rep)});
  }
  const std::size_t per_task = spec.degrees.size() * spec.policies.size();
  std::vector<RunOutcome> results(tasks.size() * per_task);

  parallel_for(tasks.size(), opts.jobs, [&](std::size_t ti) {
    const Task& t = tasks[ti];
    try {
      WorkloadSpec w = base.workload;
      w.distribution = t.dist;
      w.cfg.mean_flow_size = t.mean;
      w.mean_given = true;
      w.cfg.seed = t.seed;
      const TrafficTrace trace = synthesize_trace(w.cfg, w.make_distribution(), base.scheduler, base.horizon());
      std::size_t slot = ti * per_task;
      for (int k : spec.degrees)
        for (PolicyKind pk : spec.policies) {
          auto& res = results[slot++];
          try {
            SchedulerParams p = base.scheduler;
            p.degree = k;
            p.max_reqs = std::max(p.max_reqs, 2 * k);
            p.alpha = alpha_for(t.dist);
            EngineOptions eo;
            eo.reconf_penalty = base.reconf_penalty;
            eo.keep_series = false;
            res.report = run(trace, Policy{pk, p}, eo);
          } catch (const std::exception& e) {
            res.error = e.what();
          }
        }
    } catch (const std::exception& e) {
      for (std::size_t i = ti * per_task; i < (ti + 1) * per_task; ++i) results[i].error = e.what();
    }
  });

  bool failures = false;
  {
    auto f = open_out(opts.out_dir / "compare_runs.csv");
    std::vector<std::string> cols{"distribution", "mean_flow_size", "degree", "alpha", "repeat", "seed"};
    for (auto& c : summary_columns()) cols.push_back(c);
    cols.push_back("error");
    write_row(f, cols);
    for (std::size_t ti = 0; ti < tasks.size(); ++ti) {
      std::size_t slot = ti * per_task;
      const auto& t = tasks[ti];
      for (int k : spec.degrees)
        for (PolicyKind pk : spec.policies) {
          const auto& res = results[slot++];
          std::vector<std::string> row{t.dist, format_double(t.mean), std::to_string(k), format_double(alpha_for(t.dist)),
                                       std::to_string(t.repeat), std::to_string(t.seed)};
          if (res.error.empty()) {
            for (auto& v : summary_values(res.report)) row.push_back(v);
          } else {
            failures = true;
            row.push_back(to_string(pk));
            row.resize(row.size() + summary_columns().size() - 1);
          }
          row.push_back(res.error);
          write_row(f, row);
        }
    }
  }

  std::ostringstream table;
  write_row(table, {"distribution", "degree", "policy", "alpha", "runs", "ratio_mean", "ratio_std",
                    "reconfig_ratio_mean", "errors"});
  for (const auto& d : spec.distributions)
    for (std::size_t ki = 0; ki < spec.degrees.size(); ++ki)
      for (std::size_t pi = 0; pi < spec.policies.size(); ++pi) {
        std::vector<double> ratios, reconf;
        std::size_t errors = 0;
        for (std::size_t ti = 0; ti < tasks.size(); ++ti) {
          if (tasks[ti].dist != d) continue;
          const auto& res = results[ti * per_task + ki * spec.policies.size() + pi];
          if (!res.error.empty()) {
            ++errors;
            continue;
          }
          ratios.push_back(res.report.optical_throughput_ratio);
          reconf.push_back(res.report.reconfig_ratio);
        }
        write_row(table, {d, std::to_string(spec.degrees[ki]), to_string(spec.policies[pi]), format_double(alpha_for(d)),
                          std::to_string(ratios.size()), ratios.empty() ? "" : format_double(mean_of(ratios)),
                          ratios.empty() ? "" : format_double(stddev_of(ratios)),
                          reconf.empty() ? "" : format_double(mean_of(reconf)), std::to_string(errors)});
      }
  open_out(opts.out_dir / "compare.csv") << table.str();
  json resolved = base.resolved();
  resolved["compare"] = spec.resolved();
  write_json(opts.out_dir / "compare_config.json", resolved);
  out << table.str();
  return failures ? 1 : 0;
}

}  // namespace ocs::cli
