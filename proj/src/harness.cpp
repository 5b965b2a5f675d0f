#include "sinr/harness.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace sinr {

namespace {

constexpr int kGenerationBudget = 10000;

Rng stream(std::uint64_t seed, std::uint64_t id) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(id)};
  return Rng(seq);
}

}  // namespace

Algorithm parse_algorithm(const std::string& s) {
  if (s == "ds" || s == "DS") return Algorithm::DS;
  if (s == "gms" || s == "GMS") return Algorithm::GMS;
  if (s == "ra" || s == "RA") return Algorithm::RA;
  throw Error(ErrorCode::InvalidParams, "unknown algorithm '" + s + "'");
}

std::string to_string(Algorithm a) {
  switch (a) {
    case Algorithm::DS: return "ds";
    case Algorithm::GMS: return "gms";
    case Algorithm::RA: return "ra";
  }
  return "?";
}

ExperimentConfig default_config(PowerMode mode) {
  ExperimentConfig cfg;
  if (mode == PowerMode::Linear) {
    cfg.power = PowerModel::linear(1.0, 1.0, 5.0);
    cfg.epsilon = 0.8;
  } else {
    cfg.power = PowerModel::uniform(1.0);
    cfg.epsilon = 0.9;
  }
  return cfg;
}

int analytic_margin(const ExperimentConfig& cfg, int J) {
  const SINRParams& sp = cfg.sinr;
  if (cfg.power.mode == PowerMode::Linear) {
    const auto ub = optsize_bound_linear(sp, cfg.power, J, cfg.epsilon, cfg.noise_exponent);
    return separation_margin_linear(sp, cfg.power, ub, cfg.epsilon);
  }
  const auto ub = optsize_bound_uniform(sp, J);
  return separation_margin_uniform(sp, cfg.power.P, ub, cfg.epsilon);
}

PartitionParams resolve_partition(const ExperimentConfig& cfg) {
  const double d = cfg.sinr.R;
  if (cfg.M) {
    int K = 0;
    if (cfg.K) {
      K = *cfg.K;
    } else {
      const double ratio = cfg.km_ratio.value_or(cfg.power.mode == PowerMode::Linear ? 6.0 : 9.0);
      K = static_cast<int>(std::lround(ratio * *cfg.M));
    }
    return PartitionParams::make(K, *cfg.M, d);
  }
  if (!cfg.K) {
    const int M = analytic_margin(cfg, 1);
    return PartitionParams::make(2 * M + 1, M, d);
  }
  const int K = *cfg.K;
  for (int M = 1; K - 2 * M >= 1; ++M) {
    if (M >= analytic_margin(cfg, K - 2 * M)) return PartitionParams::make(K, M, d);
  }
  const int need = 2 * analytic_margin(cfg, 1) + 1;
  throw Error(ErrorCode::InvalidParams,
              "K=" + std::to_string(K) + " admits no analytic margin; use K >= " + std::to_string(need));
}

NetworkTopology generate_network(Rng& rng, const TopologyConfig& cfg, const SINRParams& sp, const PowerModel& pm) {
  if (cfg.nodes < 2 || cfg.nodes % 2 != 0) throw Error(ErrorCode::InvalidParams, "node count must be even");
  if (!(cfg.area > 0)) throw Error(ErrorCode::InvalidParams, "area side must be positive");
  validate(sp, pm);
  std::uniform_real_distribution<double> coord(0.0, cfg.area);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> angle(0.0, 2 * std::numbers::pi);
  const int n_links = cfg.nodes / 2;
  std::vector<Point2d> nodes;
  std::vector<std::pair<NodeId, NodeId>> endpoints;
  nodes.reserve(static_cast<std::size_t>(cfg.nodes));
  for (int k = 0; k < n_links; ++k) {
    const Point2d s(coord(rng), coord(rng));
    std::optional<Point2d> receiver;
    for (int attempt = 0; attempt < kGenerationBudget && !receiver; ++attempt) {
      // Uniform in the disk of radius R conditioned on the annulus [r, R].
      const double rho = std::sqrt(unit(rng) * (sp.R * sp.R - sp.r * sp.r) + sp.r * sp.r);
      const double theta = angle(rng);
      const Point2d v = s + rho * Point2d(std::cos(theta), std::sin(theta));
      const double len = (v - s).norm();
      if (len < sp.r * (1 - kLengthTolerance) || len > sp.R * (1 + kLengthTolerance)) continue;
      if (!(max_tolerable_interference(len, pm, sp) > 0)) continue;
      receiver = v;
    }
    if (!receiver) throw Error(ErrorCode::GenerationFailed, "receiver placement exceeded rejection budget");
    const auto id = static_cast<NodeId>(nodes.size());
    nodes.push_back(s);
    nodes.push_back(*receiver);
    endpoints.emplace_back(id, id + 1);
  }
  return NetworkTopology(std::move(nodes), endpoints, sp.r, sp.R);
}

std::vector<AuditRow> audit_schedule(const InterferenceModeld& m, const Schedule& s,
                                     const std::map<LinkId, GroupId>& groups, double epsilon, Slot slot) {
  constexpr GroupId kUngrouped = ~GroupId{0};
  auto group = [&](LinkId l) {
    auto it = groups.find(l);
    return it == groups.end() ? kUngrouped : it->second;
  };
  const double eps_imax = epsilon * network_imax(m.sinr(), m.power_model());
  std::vector<AuditRow> rows;
  rows.reserve(s.size());
  for (LinkId l : s) {
    AuditRow row;
    row.slot = slot;
    row.link_id = l;
    double inside = 0;
    for (LinkId j : s) {
      if (j == l) continue;
      if (group(j) == group(l)) {
        inside += m.gain(l, j);
      } else {
        row.I_out += m.gain(l, j);
      }
    }
    row.eps_Imax = eps_imax;
    row.inside_affectness = m.noise_scale(l) * inside / m.signal(l);
    row.total_affectness = affectness(m, l, s.without(l));
    row.Imax_l = m.imax(l);
    row.outside_violation = row.I_out > eps_imax * (1 + kFeasibilitySlack);
    row.inside_violation = !within_affectness(row.inside_affectness, 1 - epsilon);
    row.total_violation = !within_affectness(row.total_affectness, 1.0);
    rows.push_back(row);
  }
  return rows;
}

RunResult run_experiment(const ExperimentConfig& cfg, const NetworkTopology& net) {
  validate(cfg.sinr, cfg.power);
  if (!(cfg.epsilon > 0) || !(cfg.epsilon < 1)) throw Error(ErrorCode::InvalidParams, "epsilon must lie in (0, 1)");
  const InterferenceModeld model(net, cfg.sinr, cfg.power);
  const auto n = static_cast<Eigen::Index>(net.num_links());

  Rng init_rng = stream(cfg.seed, 1);
  Rng arrival_rng = stream(cfg.seed, 2);
  Rng pick_rng = stream(cfg.seed, 3);
  const ArrivalConfig arrivals{cfg.rate, cfg.a_max, cfg.seed};

  RunResult out;
  out.eps_imax = cfg.epsilon * network_imax(cfg.sinr, cfg.power);
  std::optional<LocalizedScheduler> ds;
  if (cfg.algorithm == Algorithm::DS) {
    out.partition = resolve_partition(cfg);
    ds.emplace(model, *out.partition, cfg.epsilon, LocalSolverOptions{cfg.enumeration_cap});
  }

  QueueState q = initial_queues(init_rng, n);
  double i_out_sum = 0;
  out.records.reserve(cfg.slots);
  for (Slot t = 0; t < cfg.slots; ++t) {
    Schedule s;
    std::map<LinkId, GroupId> groups;
    switch (cfg.algorithm) {
      case Algorithm::DS: {
        SlotDecision d = ds->step(q);
        s = std::move(d.schedule);
        groups = std::move(d.groups);
        break;
      }
      case Algorithm::GMS: s = gms_step(model, q); break;
      case Algorithm::RA: s = random_step(model, q, pick_rng); break;
    }

    const std::vector<AuditRow> rows = audit_schedule(model, s, groups, cfg.epsilon, t);
    MetricsRecord rec;
    rec.slot = t;
    rec.active_links = s.size();
    for (const AuditRow& row : rows) {
      rec.mean_I_out += row.I_out;
      rec.max_inside_affectness = std::max(rec.max_inside_affectness, row.inside_affectness);
      rec.max_total_affectness = std::max(rec.max_total_affectness, row.total_affectness);
      // Group bounds only mean something for the localized scheduler.
      if (cfg.algorithm == Algorithm::DS) {
        out.violations.outside += row.outside_violation;
        out.violations.inside += row.inside_violation;
      }
      out.violations.total += row.total_violation;
    }
    i_out_sum += rec.mean_I_out;
    out.violations.link_slots += rows.size();
    if (!rows.empty()) rec.mean_I_out /= static_cast<double>(rows.size());
    if (!is_feasible(model, s)) ++out.violations.infeasible_slots;
    if (cfg.audit) out.audit.insert(out.audit.end(), rows.begin(), rows.end());
    if (cfg.keep_schedules) {
      for (LinkId l : s) {
        auto it = groups.find(l);
        out.schedule.push_back(ScheduleRow{t, l, it == groups.end() ? 0 : it->second});
      }
    }

    q = update_queues(q, s, sample_arrivals(arrivals, arrival_rng, n));
    rec.total_backlog = total_backlog(q);
    out.records.push_back(rec);
  }
  if (out.violations.link_slots > 0) out.mean_I_out = i_out_sum / static_cast<double>(out.violations.link_slots);
  return out;
}

bool is_stable(std::span<const double> backlog, std::size_t n_links, const StabilityCriterion& c) {
  const auto window = std::max<std::size_t>(
      2, static_cast<std::size_t>(std::lround(c.window_fraction * static_cast<double>(backlog.size()))));
  return backlog_slope(backlog, window) < c.per_link_slope * static_cast<double>(n_links);
}

void classify_rates(SweepResult& result) {
  result.supportable_rate.reset();
  result.anomalies.clear();
  bool seen_stable_above = false;
  for (auto it = result.rates.rbegin(); it != result.rates.rend(); ++it) {
    if (it->stable) {
      if (!result.supportable_rate) result.supportable_rate = it->rate;
      seen_stable_above = true;
    } else if (seen_stable_above) {
      result.anomalies.push_back(it->rate);
    }
  }
  std::reverse(result.anomalies.begin(), result.anomalies.end());
}

SweepResult sweep_rates(const ExperimentConfig& cfg, const NetworkTopology& net, const std::vector<double>& rates) {
  if (!std::is_sorted(rates.begin(), rates.end())) throw Error(ErrorCode::InvalidParams, "rates must be ascending");
  if (cfg.seeds < 1) throw Error(ErrorCode::InvalidParams, "need at least one seed");
  if (cfg.slots < 2) throw Error(ErrorCode::InvalidParams, "stability detection needs at least 2 slots");
  SweepResult out;
  const std::size_t n_links = net.num_links();
  const double threshold = cfg.stability.per_link_slope * static_cast<double>(n_links);
  for (double rate : rates) {
    RateSummary summary;
    summary.rate = rate;
    for (int k = 0; k < cfg.seeds; ++k) {
      ExperimentConfig run_cfg = cfg;
      run_cfg.rate = rate;
      run_cfg.seed = cfg.seed + static_cast<std::uint64_t>(k);
      run_cfg.audit = false;
      run_cfg.keep_schedules = false;
      const RunResult r = run_experiment(run_cfg, net);
      std::vector<double> series;
      series.reserve(r.records.size());
      for (const auto& rec : r.records) series.push_back(static_cast<double>(rec.total_backlog));
      const auto window = std::max<std::size_t>(
          2, static_cast<std::size_t>(std::lround(cfg.stability.window_fraction * static_cast<double>(series.size()))));
      SweepRow row;
      row.rate = rate;
      row.seed = run_cfg.seed;
      row.final_backlog = r.records.back().total_backlog;
      row.slope = backlog_slope(series, window);
      row.stable = row.slope < threshold;
      summary.mean_final_backlog += static_cast<double>(row.final_backlog);
      summary.max_final_backlog = std::max(summary.max_final_backlog, row.final_backlog);
      summary.mean_slope += row.slope;
      out.rows.push_back(row);
    }
    summary.mean_final_backlog /= cfg.seeds;
    summary.mean_slope /= cfg.seeds;
    summary.stable = summary.mean_slope < threshold;
    out.rates.push_back(summary);
  }
  classify_rates(out);
  return out;
}

}  // namespace sinr
