#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sinr/geometry.hpp"
#include "sinr/interference.hpp"
#include "sinr/mwisl.hpp"
#include "sinr/scheduler.hpp"
#include "sinr/traffic.hpp"

namespace sinr {

enum class Algorithm { DS, GMS, RA };

Algorithm parse_algorithm(const std::string& s);
std::string to_string(Algorithm a);

struct TopologyConfig {
  int nodes = 100;     // even; half senders, half receivers
  double area = 80.0;  // side of the square holding the senders
  std::uint64_t seed = 1;
};

struct StabilityCriterion {
  double window_fraction = 0.4;  // trailing share of slots fitted
  double per_link_slope = 0.05;  // threshold is this times |E| packets/slot
};

struct ExperimentConfig {
  TopologyConfig topology;
  SINRParams sinr;
  PowerModel power = PowerModel::linear(1.0, 1.0, 5.0);
  double epsilon = 0.8;
  std::optional<int> K;  // cells per super-subSquare side
  std::optional<int> M;  // margin cells; empty selects the analytic margin
  std::optional<double> km_ratio;  // K / M when only M is given
  Algorithm algorithm = Algorithm::DS;
  Slot slots = 2000;
  double rate = 0.1;
  std::uint64_t seed = 1;
  int a_max = 50;
  bool audit = false;
  bool keep_schedules = false;
  std::size_t enumeration_cap = kDefaultEnumerationCap;
  NoiseExponent noise_exponent = NoiseExponent::KappaMinusBeta;
  StabilityCriterion stability;
  int seeds = 3;
};

// Desk-scale defaults for each power mode (epsilon, K/M and powers).
ExperimentConfig default_config(PowerMode mode);

// Resolves K and M. Explicit M uses K (or K/M ratio, default 6 linear and 9
// uniform). Automatic M takes the smallest margin satisfying the separation
// bound for J = K - 2M, or J = 1 when K is not given.
PartitionParams resolve_partition(const ExperimentConfig& cfg);

// Analytic margin for a sub-square of J cells.
int analytic_margin(const ExperimentConfig& cfg, int J);

// Senders uniform in the area, receivers uniform in the annulus r..R around
// their sender and schedulable alone. Node 2k sends link k to node 2k+1.
NetworkTopology generate_network(Rng& rng, const TopologyConfig& cfg, const SINRParams& sp, const PowerModel& pm);

struct MetricsRecord {
  Slot slot = 0;
  std::int64_t total_backlog = 0;
  std::size_t active_links = 0;
  double mean_I_out = 0;
  double max_inside_affectness = 0;
  double max_total_affectness = 0;
};

struct AuditRow {
  Slot slot = 0;
  LinkId link_id = 0;
  double I_out = 0;
  double eps_Imax = 0;
  double inside_affectness = 0;
  double total_affectness = 0;
  double Imax_l = 0;
  bool outside_violation = false;
  bool inside_violation = false;
  bool total_violation = false;
};

struct ScheduleRow {
  Slot slot = 0;
  LinkId link_id = 0;
  GroupId group = 0;
};

// Per active link: interference from links of other groups, affectness from
// its own group, and total affectness. Links missing from `groups` share one
// group.
std::vector<AuditRow> audit_schedule(const InterferenceModeld& m, const Schedule& s,
                                     const std::map<LinkId, GroupId>& groups, double epsilon, Slot slot = 0);

struct ViolationCounts {
  std::size_t infeasible_slots = 0;
  std::size_t outside = 0;
  std::size_t inside = 0;
  std::size_t total = 0;
  std::size_t link_slots = 0;

  bool any() const { return infeasible_slots + outside + inside + total > 0; }
};

struct RunResult {
  std::vector<MetricsRecord> records;
  std::vector<AuditRow> audit;        // filled when cfg.audit
  std::vector<ScheduleRow> schedule;  // filled when cfg.keep_schedules
  ViolationCounts violations;
  std::optional<PartitionParams> partition;
  double mean_I_out = 0;  // over all active link-slots
  double eps_imax = 0;
};

RunResult run_experiment(const ExperimentConfig& cfg, const NetworkTopology& net);

struct SweepRow {
  double rate = 0;
  std::uint64_t seed = 0;
  std::int64_t final_backlog = 0;
  double slope = 0;
  bool stable = false;
};

struct RateSummary {
  double rate = 0;
  double mean_final_backlog = 0;
  std::int64_t max_final_backlog = 0;
  double mean_slope = 0;
  bool stable = false;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::vector<RateSummary> rates;
  std::optional<double> supportable_rate;  // largest stable rate
  std::vector<double> anomalies;           // unstable rates below a stable one
};

// Fills supportable_rate and anomalies from the per-rate summaries.
void classify_rates(SweepResult& result);

bool is_stable(std::span<const double> backlog, std::size_t n_links, const StabilityCriterion& c);

// One run per (rate, seed), seeds cfg.seed .. cfg.seed + cfg.seeds - 1.
SweepResult sweep_rates(const ExperimentConfig& cfg, const NetworkTopology& net, const std::vector<double>& rates);

}  // namespace sinr
