// sinrsched: topology generation, scheduling runs, rate sweeps and audits.

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sinr/geometry.hpp"
#include "sinr/harness.hpp"
#include "sinr/io.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitViolation = 3;
constexpr int kExitIo = 4;

int exit_code(sinr::ErrorCode c) {
  switch (c) {
    case sinr::ErrorCode::Io: return kExitIo;
    case sinr::ErrorCode::InvariantViolation: return kExitViolation;
    default: return kExitConfig;
  }
}

// Flags shared by every subcommand; unset optionals fall back to the
// power-mode defaults.
struct Options {
  int nodes = 100;
  double area = 80.0;
  double rmin = 1.0;
  double rmax = 5.0;
  std::uint64_t seed = 1;
  std::string out;
  std::string topo;
  std::string algo = "ds";
  std::string power = "linear";
  double c = 1.0;
  double beta = 1.0;
  std::optional<double> power_max;
  double kappa = 3.0;
  double sigma = 1.0;
  double eta = 1.0;
  double xi = 1e-4;
  std::optional<double> epsilon;
  std::optional<int> K;
  std::string M = "auto";
  std::optional<double> km_ratio;
  std::uint64_t slots = 2000;
  double rate = 0.1;
  int a_max = 50;
  bool audit = false;
  std::string audit_out;
  std::string schedule_out;
  std::vector<double> rates;
  int seeds = 3;
  std::string schedule;
  std::size_t enumeration_cap = sinr::kDefaultEnumerationCap;
  std::string profile = "desk";
};

void add_topology_flags(CLI::App* app, Options& o) {
  app->add_option("--nodes", o.nodes, "Node count (even)")->check(CLI::PositiveNumber);
  app->add_option("--area", o.area, "Side of the deployment square")->check(CLI::PositiveNumber);
  app->add_option("--seed", o.seed, "RNG seed");
  app->add_option("--profile", o.profile, "desk (100 nodes, 80 area, 2000 slots) or full (500, 200, 10000)")
      ->check(CLI::IsMember({"desk", "full"}));
}

void add_model_flags(CLI::App* app, Options& o) {
  app->add_option("--rmin", o.rmin, "Minimum link length r");
  app->add_option("--rmax", o.rmax, "Maximum link length R");
  app->add_option("--power", o.power, "Power assignment")->check(CLI::IsMember({"linear", "uniform"}));
  app->add_option("--c", o.c, "Linear power constant");
  app->add_option("--beta", o.beta, "Linear power exponent");
  app->add_option("--power-max", o.power_max, "Maximum (or uniform) transmit power");
  app->add_option("--kappa", o.kappa, "Path-loss exponent");
  app->add_option("--sigma", o.sigma, "SINR threshold");
  app->add_option("--eta", o.eta, "Path-loss constant");
  app->add_option("--xi", o.xi, "Ambient noise");
}

void add_schedule_flags(CLI::App* app, Options& o) {
  app->add_option("--topo", o.topo, "Topology CSV (generated from --nodes/--area/--seed when absent)");
  app->add_option("--algo", o.algo, "Scheduler")->check(CLI::IsMember({"ds", "gms", "ra"}));
  app->add_option("--epsilon", o.epsilon, "Interference split parameter in (0, 1)");
  app->add_option("--K", o.K, "Cells per super-subSquare side");
  app->add_option("--M", o.M, "Margin cells: auto or an integer");
  app->add_option("--km-ratio", o.km_ratio, "K/M when only M is given");
  app->add_option("--slots", o.slots, "Slots per run");
  app->add_option("--a-max", o.a_max, "Arrival truncation per link and slot");
  app->add_option("--enum-cap", o.enumeration_cap, "Largest local instance solved exactly");
}

void apply_profile(CLI::App* app, Options& o) {
  if (o.profile != "full") return;
  if (app->count("--nodes") == 0) o.nodes = 500;
  if (app->count("--area") == 0) o.area = 200.0;
  if (app->get_option_no_throw("--slots") && app->count("--slots") == 0) o.slots = 10000;
}

sinr::ExperimentConfig make_config(const Options& o) {
  const auto mode = o.power == "linear" ? sinr::PowerMode::Linear : sinr::PowerMode::Uniform;
  sinr::ExperimentConfig cfg = sinr::default_config(mode);
  cfg.topology = sinr::TopologyConfig{o.nodes, o.area, o.seed};
  cfg.sinr = sinr::SINRParams{o.eta, o.kappa, o.sigma, o.xi, o.rmin, o.rmax};
  if (mode == sinr::PowerMode::Linear) {
    cfg.power = sinr::PowerModel::linear(o.c, o.beta, o.power_max.value_or(o.c * std::pow(o.rmax, o.beta)));
  } else {
    cfg.power = sinr::PowerModel::uniform(o.power_max.value_or(1.0));
  }
  if (o.epsilon) cfg.epsilon = *o.epsilon;
  cfg.K = o.K;
  if (o.M != "auto") {
    try {
      std::size_t used = 0;
      const int m = std::stoi(o.M, &used);
      if (used != o.M.size()) throw std::invalid_argument(o.M);
      cfg.M = m;
    } catch (const std::logic_error&) {
      throw sinr::Error(sinr::ErrorCode::InvalidParams, "--M must be 'auto' or an integer, got '" + o.M + "'");
    }
  }
  cfg.km_ratio = o.km_ratio;
  cfg.algorithm = sinr::parse_algorithm(o.algo);
  cfg.slots = o.slots;
  cfg.rate = o.rate;
  cfg.seed = o.seed;
  cfg.a_max = o.a_max;
  cfg.audit = o.audit;
  cfg.keep_schedules = !o.schedule_out.empty();
  cfg.enumeration_cap = o.enumeration_cap;
  cfg.seeds = o.seeds;
  if (!(cfg.epsilon > 0 && cfg.epsilon < 1)) throw sinr::Error(sinr::ErrorCode::InvalidParams, "epsilon must lie in (0, 1)");
  sinr::validate(cfg.sinr, cfg.power);
  return cfg;
}

sinr::NetworkTopology load_or_generate(const Options& o, const sinr::ExperimentConfig& cfg) {
  if (!o.topo.empty()) return sinr::read_topology(o.topo, cfg.sinr.r, cfg.sinr.R);
  sinr::Rng rng(cfg.topology.seed);
  return sinr::generate_network(rng, cfg.topology, cfg.sinr, cfg.power);
}

void describe_partition(const sinr::ExperimentConfig& cfg) {
  if (cfg.algorithm != sinr::Algorithm::DS) return;
  const auto p = sinr::resolve_partition(cfg);
  std::cerr << "partition: K=" << p.K << " M=" << p.M << " d=" << p.d << (cfg.M ? "" : " (analytic margin)") << '\n';
}

std::string sibling(const std::string& out, const std::string& suffix) {
  std::filesystem::path p(out);
  return (p.parent_path() / (p.stem().string() + suffix + ".csv")).string();
}

int cmd_generate(const Options& o) {
  const auto cfg = make_config(o);
  sinr::Rng rng(o.seed);
  const auto net = sinr::generate_network(rng, cfg.topology, cfg.sinr, cfg.power);
  sinr::write_topology(std::filesystem::path(o.out), net);
  std::cerr << "generated " << net.num_links() << " links\n";
  return kExitOk;
}

int cmd_run(const Options& o) {
  const auto cfg = make_config(o);
  const auto net = load_or_generate(o, cfg);
  describe_partition(cfg);
  const auto result = sinr::run_experiment(cfg, net);
  sinr::emit_csv(std::filesystem::path(o.out), result.records);
  if (cfg.audit) sinr::emit_csv(std::filesystem::path(o.audit_out.empty() ? sibling(o.out, "_audit") : o.audit_out), result.audit);
  if (cfg.keep_schedules) sinr::emit_csv(std::filesystem::path(o.schedule_out), result.schedule);

  const auto& v = result.violations;
  std::cerr << "final backlog " << result.records.back().total_backlog << ", mean I_out "
            << sinr::format_double(result.mean_I_out) << " vs eps*I_max " << sinr::format_double(result.eps_imax)
            << "\nviolations: infeasible_slots=" << v.infeasible_slots << " outside=" << v.outside
            << " inside=" << v.inside << " total=" << v.total << " of " << v.link_slots << " link-slots\n";
  // With an explicit margin the outside bound is a measurement, not a guarantee.
  const bool outside_binding = !cfg.M;
  const bool violated = v.infeasible_slots > 0 || v.total > 0 || v.inside > 0 || (outside_binding && v.outside > 0);
  return violated ? kExitViolation : kExitOk;
}

int cmd_sweep(const Options& o) {
  if (o.rates.empty()) throw sinr::Error(sinr::ErrorCode::InvalidParams, "--rates is required");
  const auto cfg = make_config(o);
  const auto net = load_or_generate(o, cfg);
  describe_partition(cfg);
  const auto result = sinr::sweep_rates(cfg, net, o.rates);
  sinr::emit_csv(std::filesystem::path(o.out), result.rows);
  for (const auto& r : result.rates) {
    std::cout << "rate " << sinr::format_double(r.rate) << ": mean final backlog "
              << sinr::format_double(r.mean_final_backlog) << ", max " << r.max_final_backlog << ", mean slope "
              << sinr::format_double(r.mean_slope) << (r.stable ? ", stable" : ", unstable") << '\n';
  }
  if (result.supportable_rate) {
    std::cout << "supportable rate " << sinr::format_double(*result.supportable_rate) << '\n';
  } else {
    std::cout << "no stable rate\n";
  }
  for (double a : result.anomalies) std::cout << "anomaly: rate " << sinr::format_double(a) << " unstable below a stable rate\n";
  return kExitOk;
}

int cmd_audit(const Options& o) {
  if (o.topo.empty() || o.schedule.empty()) {
    throw sinr::Error(sinr::ErrorCode::InvalidParams, "audit needs --topo and --schedule");
  }
  const auto cfg = make_config(o);
  const auto net = sinr::read_topology(o.topo, cfg.sinr.r, cfg.sinr.R);
  const sinr::InterferenceModeld model(net, cfg.sinr, cfg.power);
  const auto entries = sinr::read_schedule(o.schedule);

  std::map<sinr::Slot, std::vector<sinr::ScheduleEntry>> by_slot;
  for (const auto& e : entries) {
    if (e.link_id >= net.num_links()) {
      throw sinr::Error(sinr::ErrorCode::InvalidParams, "schedule names unknown link " + std::to_string(e.link_id));
    }
    by_slot[e.slot].push_back(e);
  }
  const bool grouped = !entries.empty() && entries.front().group.has_value();
  std::optional<sinr::PartitionParams> params;
  if (!grouped && !entries.empty()) params = sinr::resolve_partition(cfg);

  std::vector<sinr::AuditRow> rows;
  std::size_t infeasible = 0, outside = 0, inside = 0, total = 0;
  for (const auto& [slot, list] : by_slot) {
    std::vector<sinr::LinkId> ids;
    std::map<sinr::LinkId, sinr::GroupId> groups;
    std::optional<sinr::LinkPartition> part;
    if (params) part = sinr::partition_links(net, sinr::frame_for_slot(slot, *params));
    for (const auto& e : list) {
      ids.push_back(e.link_id);
      if (e.group) {
        groups[e.link_id] = *e.group;
      } else if (part) {
        // Group by super-subSquare of this slot's frame; links outside every
        // block each form their own group.
        const auto it = part->owner.find(e.link_id);
        groups[e.link_id] = it == part->owner.end()
                                ? (sinr::GroupId{1} << 63) + e.link_id
                                : static_cast<sinr::GroupId>(std::distance(part->blocks.begin(),
                                                                            part->blocks.find(it->second)));
      }
    }
    const sinr::Schedule s(ids);
    if (s.size() != ids.size()) throw sinr::Error(sinr::ErrorCode::InvalidParams, "duplicate link in slot " + std::to_string(slot));
    if (!sinr::is_feasible(model, s)) ++infeasible;
    for (const auto& row : sinr::audit_schedule(model, s, groups, cfg.epsilon, slot)) {
      outside += row.outside_violation;
      inside += row.inside_violation;
      total += row.total_violation;
      rows.push_back(row);
    }
  }
  sinr::emit_csv(std::filesystem::path(o.out), rows);
  std::cerr << "audited " << by_slot.size() << " slots, " << rows.size() << " link-slots: infeasible_slots=" << infeasible
            << " outside=" << outside << " inside=" << inside << " total=" << total << '\n';
  return infeasible + outside + inside + total > 0 ? kExitViolation : kExitOk;
}

// Fills options not given on the command line from `key = value` lines.
void apply_config_file(CLI::App* sub, const std::string& path) {
  std::ifstream is(path);
  if (!is) throw sinr::Error(sinr::ErrorCode::Io, "cannot open config " + path);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
    };
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw sinr::Error(sinr::ErrorCode::InvalidParams, path + ":" + std::to_string(lineno) + ": expected key = value");
    }
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
    std::replace(key.begin(), key.end(), '_', '-');
    CLI::Option* opt = key == "config" ? nullptr : sub->get_option_no_throw("--" + key);
    if (!opt) {
      throw sinr::Error(sinr::ErrorCode::InvalidParams,
                        path + ":" + std::to_string(lineno) + ": unknown key '" + key + "' for " + sub->get_name());
    }
    if (opt->count() > 0) continue;
    try {
      opt->add_result(value);
      opt->run_callback();
    } catch (const CLI::Error& e) {
      throw sinr::Error(sinr::ErrorCode::InvalidParams, path + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SINR link scheduling simulator"};
  app.require_subcommand(1);
  Options o;

  auto* gen = app.add_subcommand("generate", "Generate a random topology");
  add_topology_flags(gen, o);
  add_model_flags(gen, o);
  gen->add_option("--out", o.out, "Topology CSV");

  auto* run = app.add_subcommand("run", "Simulate one scheduler");
  add_topology_flags(run, o);
  add_model_flags(run, o);
  add_schedule_flags(run, o);
  run->add_option("--rate", o.rate, "Mean Poisson arrivals per link and slot");
  run->add_flag("--audit", o.audit, "Write the per-link audit CSV");
  run->add_option("--audit-out", o.audit_out, "Audit CSV path (default <out>_audit.csv)");
  run->add_option("--schedule-out", o.schedule_out, "Write slot,link_id,group rows");
  run->add_option("--out", o.out, "Metrics CSV");

  auto* sweep = app.add_subcommand("sweep", "Rate sweep with stability detection");
  add_topology_flags(sweep, o);
  add_model_flags(sweep, o);
  add_schedule_flags(sweep, o);
  sweep->add_option("--rates", o.rates, "Ascending arrival rates")->delimiter(',');
  sweep->add_option("--seeds", o.seeds, "Traffic seeds per rate")->check(CLI::PositiveNumber);
  sweep->add_option("--out", o.out, "Sweep CSV");

  auto* audit = app.add_subcommand("audit", "Audit a recorded schedule");
  add_model_flags(audit, o);
  add_schedule_flags(audit, o);
  audit->add_option("--schedule", o.schedule, "Schedule CSV: slot,link_id[,group]");
  audit->add_option("--out", o.out, "Audit CSV");

  std::string config_path;
  for (auto* sub : {gen, run, sweep, audit}) {
    sub->add_option("--config", config_path, "key = value file mirroring the flags; command line wins");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  try {
    CLI::App* active = app.get_subcommands().front();
    if (!config_path.empty()) apply_config_file(active, config_path);
    for (const char* name : {"--out", "--rates", "--schedule"}) {
      const CLI::Option* opt = active->get_option_no_throw(name);
      if (opt && opt->count() == 0) {
        throw sinr::Error(sinr::ErrorCode::InvalidParams, std::string(name) + " is required");
      }
    }
    if (*gen) {
      apply_profile(gen, o);
      return cmd_generate(o);
    }
    if (*run) {
      apply_profile(run, o);
      return cmd_run(o);
    }
    if (*sweep) {
      apply_profile(sweep, o);
      return cmd_sweep(o);
    }
    return cmd_audit(o);
  } catch (const sinr::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  }
}
