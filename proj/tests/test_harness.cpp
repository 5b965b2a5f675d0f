#include <gtest/gtest.h>

#include <sstream>

#include "sinr/harness.hpp"
#include "sinr/io.hpp"
#include "support.hpp"

using namespace sinr;

namespace {

std::size_t line_count(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

template <class Rows>
std::string csv(const Rows& rows) {
  std::ostringstream os;
  emit_csv(os, rows);
  return os.str();
}

NetworkTopology desk_net(std::uint64_t seed, PowerMode mode = PowerMode::Linear) {
  const ExperimentConfig cfg = default_config(mode);
  Rng rng(seed);
  return generate_network(rng, cfg.topology, cfg.sinr, cfg.power);
}

}  // namespace

TEST(Generate, PaperScaleCountAndLengths) {
  const ExperimentConfig cfg = default_config(PowerMode::Linear);
  Rng rng(1);
  const auto net = generate_network(rng, TopologyConfig{500, 200.0, 1}, cfg.sinr, cfg.power);
  EXPECT_EQ(net.num_links(), 250u);
  for (const auto& l : net.links()) {
    EXPECT_GE(l.length, cfg.sinr.r * (1 - 1e-12));
    EXPECT_LE(l.length, cfg.sinr.R * (1 + 1e-12));
    EXPECT_GE(l.sender.minCoeff(), 0.0);
    EXPECT_LE(l.sender.maxCoeff(), 200.0);
    EXPECT_EQ(l.sender_node, 2 * l.id);
    EXPECT_EQ(l.receiver_node, 2 * l.id + 1);
  }
}

TEST(Generate, EveryLinkFeasibleAlone) {
  for (PowerMode mode : {PowerMode::Linear, PowerMode::Uniform}) {
    const ExperimentConfig cfg = default_config(mode);
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      const auto net = desk_net(seed, mode);
      for (LinkId l = 0; l < net.num_links(); ++l) {
        EXPECT_TRUE(test::oracle_feasible(net, cfg.sinr, cfg.power, {l}));
      }
    }
  }
}

TEST(Generate, DegenerateAnnulusGivesExactRadius) {
  ExperimentConfig cfg = default_config(PowerMode::Uniform);
  cfg.sinr.r = cfg.sinr.R;
  Rng rng(3);
  const auto net = generate_network(rng, TopologyConfig{40, 50.0, 3}, cfg.sinr, cfg.power);
  for (const auto& l : net.links()) EXPECT_NEAR(l.length, cfg.sinr.R, 1e-12);
}

TEST(Generate, DeterministicAndValidated) {
  EXPECT_EQ(csv(std::vector<MetricsRecord>{}), csv(std::vector<MetricsRecord>{}));
  std::ostringstream a, b;
  write_topology(a, desk_net(5));
  write_topology(b, desk_net(5));
  EXPECT_EQ(a.str(), b.str());
  const ExperimentConfig cfg = default_config(PowerMode::Linear);
  Rng rng(1);
  EXPECT_THROW(generate_network(rng, TopologyConfig{101, 80.0, 1}, cfg.sinr, cfg.power), Error);
  EXPECT_THROW(generate_network(rng, TopologyConfig{100, 0.0, 1}, cfg.sinr, cfg.power), Error);
}

TEST(ResolvePartition, ExplicitAndAnalytic) {
  ExperimentConfig cfg = default_config(PowerMode::Linear);
  cfg.M = 2;
  EXPECT_EQ(resolve_partition(cfg).K, 12);
  cfg.K = 7;
  EXPECT_EQ(resolve_partition(cfg).K, 7);
  cfg.M = 4;
  EXPECT_THROW(resolve_partition(cfg), Error);  // K <= 2M

  ExperimentConfig u = default_config(PowerMode::Uniform);
  u.M = 1;
  EXPECT_EQ(resolve_partition(u).K, 9);
  u.km_ratio = 5;
  EXPECT_EQ(resolve_partition(u).K, 5);

  ExperimentConfig a = default_config(PowerMode::Linear);
  const int m1 = analytic_margin(a, 1);
  const PartitionParams p = resolve_partition(a);
  EXPECT_EQ(p.M, m1);
  EXPECT_EQ(p.K, 2 * m1 + 1);
  EXPECT_EQ(p.d, a.sinr.R);

  a.K = 10 * m1;
  const PartitionParams pk = resolve_partition(a);
  EXPECT_GE(pk.M, analytic_margin(a, pk.J()));
  if (pk.M > 1) EXPECT_LT(pk.M - 1, analytic_margin(a, pk.K - 2 * (pk.M - 1)));
  a.K = 5;
  EXPECT_THROW(resolve_partition(a), Error);
}

TEST(Audit, SingletonHasNoInterference) {
  const auto net = desk_net(2);
  const ExperimentConfig cfg = default_config(PowerMode::Linear);
  const InterferenceModeld m(net, cfg.sinr, cfg.power);
  const auto rows = audit_schedule(m, {3}, {}, 0.8, 9);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].slot, 9u);
  EXPECT_EQ(rows[0].I_out, 0.0);
  EXPECT_EQ(rows[0].inside_affectness, 0.0);
  EXPECT_EQ(rows[0].total_affectness, 0.0);
  EXPECT_DOUBLE_EQ(rows[0].Imax_l, m.imax(3));
  EXPECT_DOUBLE_EQ(rows[0].eps_Imax, 0.8 * network_imax(cfg.sinr, cfg.power));
}

TEST(Audit, SplitsInterferenceByGroup) {
  const auto net = test::make_net({{0, 0, 1, 0}, {0, 3, 1, 3}, {5, 0, 6, 0}}, 1.0, 5.0);
  const ExperimentConfig cfg = default_config(PowerMode::Uniform);
  const InterferenceModeld m(net, cfg.sinr, cfg.power);
  const auto rows = audit_schedule(m, {0, 1, 2}, {{0, 1}, {1, 1}, {2, 2}}, 0.9);
  EXPECT_DOUBLE_EQ(rows[0].I_out, m.gain(0, 2));
  EXPECT_NEAR(rows[0].inside_affectness, m.noise_scale(0) * m.gain(0, 1) / m.signal(0), 1e-15);
  EXPECT_NEAR(rows[0].total_affectness, affectness(m, 0, {1, 2}), 1e-15);
  EXPECT_DOUBLE_EQ(rows[2].I_out, m.gain(2, 0) + m.gain(2, 1));
  EXPECT_EQ(rows[2].inside_affectness, 0.0);
}

TEST(RunExperiment, ZeroRateGmsDrainsAndStaysEmpty) {
  ExperimentConfig cfg = default_config(PowerMode::Linear);
  cfg.algorithm = Algorithm::GMS;
  cfg.rate = 0;
  cfg.slots = 3000;
  const RunResult r = run_experiment(cfg, desk_net(1));
  const auto first_zero = std::find_if(r.records.begin(), r.records.end(),
                                       [](const MetricsRecord& m) { return m.total_backlog == 0; });
  ASSERT_NE(first_zero, r.records.end());
  // Backlog is recorded after service, so the draining slot itself still has an active link.
  for (auto it = std::next(first_zero); it != r.records.end(); ++it) {
    EXPECT_EQ(it->total_backlog, 0);
    EXPECT_EQ(it->active_links, 0u);
  }
  EXPECT_FALSE(r.violations.any());
}

TEST(RunExperiment, OverloadGrows) {
  for (Algorithm a : {Algorithm::DS, Algorithm::GMS, Algorithm::RA}) {
    ExperimentConfig cfg = default_config(PowerMode::Uniform);
    cfg.algorithm = a;
    cfg.M = 1;
    cfg.rate = 5;
    cfg.slots = 300;
    const RunResult r = run_experiment(cfg, desk_net(4, PowerMode::Uniform));
    std::vector<double> series;
    for (const auto& rec : r.records) series.push_back(static_cast<double>(rec.total_backlog));
    EXPECT_GT(backlog_slope(series, 120), 0.0);
    EXPECT_FALSE(is_stable(series, 50, cfg.stability));
  }
}

TEST(RunExperiment, DsAuditsHoldOnDeskAndWideTopologies) {
  for (PowerMode mode : {PowerMode::Linear, PowerMode::Uniform}) {
    ExperimentConfig cfg = default_config(mode);
    cfg.slots = 400;
    cfg.rate = 0.3;
    cfg.audit = true;
    Rng rng(8);
    const auto wide = generate_network(rng, TopologyConfig{1200, 500.0, 8}, cfg.sinr, cfg.power);
    const RunResult r = run_experiment(cfg, wide);
    EXPECT_GT(r.violations.link_slots, 0u);
    EXPECT_EQ(r.violations.outside, 0u);
    EXPECT_EQ(r.violations.inside, 0u);
    EXPECT_EQ(r.violations.total, 0u);
    EXPECT_EQ(r.violations.infeasible_slots, 0u);
    EXPECT_EQ(r.audit.size(), r.violations.link_slots);
    for (const auto& row : r.audit) EXPECT_LE(row.I_out, row.eps_Imax);

    cfg.M = 1;
    const RunResult e = run_experiment(cfg, desk_net(8, mode));
    EXPECT_EQ(e.violations.inside, 0u);
    EXPECT_EQ(e.violations.total, 0u);
    EXPECT_EQ(e.violations.infeasible_slots, 0u);
  }
}

TEST(RunExperiment, SameSeedSameRecordsDifferentSeedDiffers) {
  ExperimentConfig cfg = default_config(PowerMode::Linear);
  cfg.M = 1;
  cfg.slots = 200;
  const auto net = desk_net(3);
  const std::string a = csv(run_experiment(cfg, net).records);
  EXPECT_EQ(a, csv(run_experiment(cfg, net).records));
  cfg.seed = 2;
  EXPECT_NE(a, csv(run_experiment(cfg, net).records));
}

TEST(RunExperiment, RejectsBadEpsilon) {
  ExperimentConfig cfg = default_config(PowerMode::Linear);
  cfg.epsilon = 1.0;
  EXPECT_THROW(run_experiment(cfg, desk_net(1)), Error);
}

TEST(Sweep, ZeroRateStableAndOverloadNot) {
  ExperimentConfig cfg = default_config(PowerMode::Linear);
  cfg.algorithm = Algorithm::GMS;
  cfg.slots = 500;
  cfg.seeds = 2;
  const SweepResult r = sweep_rates(cfg, desk_net(1), {0.0, 5.0});
  ASSERT_EQ(r.rows.size(), 4u);
  ASSERT_EQ(r.rates.size(), 2u);
  EXPECT_TRUE(r.rates[0].stable);
  EXPECT_FALSE(r.rates[1].stable);
  ASSERT_TRUE(r.supportable_rate.has_value());
  EXPECT_EQ(*r.supportable_rate, 0.0);
  EXPECT_TRUE(r.anomalies.empty());
  EXPECT_EQ(r.rows[1].seed, cfg.seed + 1);
  EXPECT_THROW(sweep_rates(cfg, desk_net(1), {0.3, 0.1}), Error);
}

TEST(Sweep, ClassifyFlagsUnstableBelowStable) {
  SweepResult r;
  for (auto [rate, stable] : std::vector<std::pair<double, bool>>{{0.1, true}, {0.2, false}, {0.3, true}, {0.4, false}}) {
    RateSummary s;
    s.rate = rate;
    s.stable = stable;
    r.rates.push_back(s);
  }
  classify_rates(r);
  EXPECT_EQ(r.supportable_rate, 0.3);
  EXPECT_EQ(r.anomalies, std::vector<double>{0.2});
  for (auto& s : r.rates) s.stable = false;
  classify_rates(r);
  EXPECT_FALSE(r.supportable_rate.has_value());
  EXPECT_TRUE(r.anomalies.empty());
}

TEST(Csv, HeadersAndLineCounts) {
  EXPECT_EQ(csv(std::vector<MetricsRecord>{}),
            "slot,total_backlog,active_links,mean_I_out,max_inside_affectness,max_total_affectness\n");
  EXPECT_EQ(line_count(csv(std::vector<MetricsRecord>(3))), 4u);
  EXPECT_EQ(csv(std::vector<SweepRow>{}), "rate,seed,final_backlog,slope,stable\n");
  EXPECT_EQ(csv(std::vector<AuditRow>{}), "slot,link_id,I_out,eps_Imax,inside_affectness,total_affectness,Imax_l\n");
  SweepRow row{0.25, 3, 120, -0.5, true};
  EXPECT_EQ(csv(std::vector<SweepRow>{row}), "rate,seed,final_backlog,slope,stable\n0.25,3,120,-0.5,1\n");
  EXPECT_EQ(csv(std::vector<SweepRow>{row}).find('\r'), std::string::npos);
}

TEST(Csv, ShortestRoundTripDoubles) {
  for (double v : {0.1, 1.0 / 3, 1e-300, 123456789.125, -2.5e-7, 0.0}) {
    EXPECT_EQ(std::stod(format_double(v)), v);
  }
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_EQ(format_double(3.0), "3");
}

TEST(Csv, UnwritablePathIsIoError) {
  try {
    emit_csv(std::filesystem::path("/nonexistent-dir/x.csv"), std::vector<SweepRow>{});
    FAIL() << "expected an I/O error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Io);
  }
}

TEST(TopologyIo, RoundTripIsExact) {
  const auto net = desk_net(6);
  std::stringstream ss;
  write_topology(ss, net);
  const auto back = read_topology(ss, net.r(), net.R());
  ASSERT_EQ(back.num_links(), net.num_links());
  for (LinkId l = 0; l < net.num_links(); ++l) {
    EXPECT_EQ(back.link(l).sender, net.link(l).sender);
    EXPECT_EQ(back.link(l).receiver, net.link(l).receiver);
  }
}

TEST(TopologyIo, LinkIdsFollowSenderNodeId) {
  std::stringstream ss(
      "node_id,x,y,role,peer_id\r\n"
      "40,0,0,receiver,7\n"
      "7,1,0,sender,40\n"
      "3,5,5,sender,12\n"
      "12,5,7,receiver,3\n");
  const auto net = read_topology(ss, 1.0, 5.0);
  ASSERT_EQ(net.num_links(), 2u);
  EXPECT_EQ(net.link(0).sender, Point2d(5, 5));
  EXPECT_EQ(net.link(1).sender, Point2d(1, 0));
  EXPECT_DOUBLE_EQ(net.link(0).length, 2.0);
}

TEST(TopologyIo, RejectsMalformedInput) {
  std::stringstream bad_header("id,x,y\n");
  EXPECT_THROW(read_topology(bad_header, 1, 5), Error);
  std::stringstream unpaired("node_id,x,y,role,peer_id\n0,0,0,sender,1\n1,1,0,sender,0\n");
  EXPECT_THROW(read_topology(unpaired, 1, 5), Error);
  std::stringstream junk("node_id,x,y,role,peer_id\n0,zero,0,sender,1\n1,1,0,receiver,0\n");
  EXPECT_THROW(read_topology(junk, 1, 5), Error);
  std::stringstream too_long("node_id,x,y,role,peer_id\n0,0,0,sender,1\n1,9,0,receiver,0\n");
  EXPECT_THROW(read_topology(too_long, 1, 5), Error);
}

TEST(ScheduleIo, ReadsWithAndWithoutGroups) {
  std::stringstream grouped("slot,link_id,group\n0,3,1\n0,4,2\n");
  const auto g = read_schedule(grouped);
  ASSERT_EQ(g.size(), 2u);
  EXPECT_EQ(g[1].link_id, 4u);
  EXPECT_EQ(g[1].group, 2u);
  std::stringstream plain("slot,link_id\n5,1\n");
  const auto p = read_schedule(plain);
  ASSERT_EQ(p.size(), 1u);
  EXPECT_EQ(p[0].slot, 5u);
  EXPECT_FALSE(p[0].group.has_value());
  std::stringstream bad("slot,link\n");
  EXPECT_THROW(read_schedule(bad), Error);
}
