#include <gtest/gtest.h>

#include <vector>

#include "sinr/traffic.hpp"

using namespace sinr;

TEST(Arrivals, ZeroRateIsAllZeros) {
  Rng rng(1);
  EXPECT_TRUE(sample_arrivals({0.0, 50, 1}, rng, 100).isZero());
}

TEST(Arrivals, TruncatedAtAMax) {
  Rng rng(2);
  const ArrivalVector a = sample_arrivals({3.0, 1, 1}, rng, 10000);
  EXPECT_EQ(a.minCoeff(), 0);
  EXPECT_EQ(a.maxCoeff(), 1);
}

TEST(Arrivals, RejectsBadConfig) {
  Rng rng(3);
  EXPECT_THROW(sample_arrivals({-0.1, 50, 1}, rng, 5), Error);
  EXPECT_THROW(sample_arrivals({0.1, 0, 1}, rng, 5), Error);
}

TEST(Arrivals, MeanOverMillionDraws) {
  Rng rng(4);
  const ArrivalVector a = sample_arrivals({0.2, 50, 1}, rng, 1000000);
  const double mean = static_cast<double>(a.sum()) / 1e6;
  EXPECT_NEAR(mean, 0.2, 0.002);
}

TEST(Arrivals, SameSeedSameDraws) {
  Rng a(9), b(9);
  EXPECT_EQ(sample_arrivals({0.7, 50, 1}, a, 500), sample_arrivals({0.7, 50, 1}, b, 500));
}

TEST(UpdateQueues, Examples) {
  QueueState q(3);
  q << 5, 0, 3;
  ArrivalVector a(3);
  a << 2, 0, 1;
  const QueueState next = update_queues(q, {0, 1}, a);
  EXPECT_EQ(next(0), 6);  // served
  EXPECT_EQ(next(1), 0);  // clamped at zero
  EXPECT_EQ(next(2), 4);  // not served
  EXPECT_THROW(update_queues(q, {3}, a), Error);
  EXPECT_THROW(update_queues(q, {}, ArrivalVector::Zero(2)), Error);
}

TEST(UpdateQueues, RandomTriplesMatchFormulaAndConserve) {
  Rng rng(5);
  std::uniform_int_distribution<std::int64_t> qd(0, 5), ad(0, 3);
  std::bernoulli_distribution coin(0.5);
  for (int trial = 0; trial < 2000; ++trial) {
    const Eigen::Index n = 1 + trial % 17;
    QueueState q(n);
    ArrivalVector a(n);
    Schedule s;
    for (Eigen::Index l = 0; l < n; ++l) {
      q(l) = qd(rng);
      a(l) = ad(rng);
      if (coin(rng)) s.insert(static_cast<LinkId>(l));
    }
    const QueueState next = update_queues(q, s, a);
    std::int64_t departures = 0;
    for (Eigen::Index l = 0; l < n; ++l) {
      const std::int64_t served = s.contains(static_cast<LinkId>(l)) ? 1 : 0;
      ASSERT_EQ(next(l), std::max<std::int64_t>(0, q(l) - served) + a(l));
      departures += std::min(q(l), served);
    }
    ASSERT_EQ(total_backlog(next), total_backlog(q) - departures + a.sum());
  }
}

TEST(TotalBacklog, Sum) { EXPECT_EQ(total_backlog(QueueState::Constant(250, 100)), 25000); }

TEST(InitialQueues, RangeAndSpread) {
  Rng rng(6);
  const QueueState q = initial_queues(rng, 20000);
  EXPECT_GE(q.minCoeff(), 100);
  EXPECT_LE(q.maxCoeff(), 300);
  EXPECT_EQ(q.minCoeff(), 100);
  EXPECT_EQ(q.maxCoeff(), 300);
  EXPECT_NEAR(static_cast<double>(q.sum()) / 20000, 200.0, 2.0);
}

TEST(BacklogSlope, ConstantAndLinear) {
  const std::vector<double> flat(50, 7.0);
  EXPECT_DOUBLE_EQ(backlog_slope(flat, 20), 0.0);
  std::vector<double> line;
  for (int t = 0; t < 100; ++t) line.push_back(3.0 * t + 11);
  EXPECT_NEAR(backlog_slope(line, 40), 3.0, 1e-12);
  EXPECT_NEAR(backlog_slope(line, 2), 3.0, 1e-12);
}

TEST(BacklogSlope, UsesTrailingWindowOnly) {
  std::vector<double> series;
  for (int t = 0; t < 60; ++t) series.push_back(t < 30 ? 1000.0 - 10 * t : 700.0 + 2 * (t - 30));
  EXPECT_NEAR(backlog_slope(series, 30), 2.0, 1e-12);
}

TEST(BacklogSlope, RejectsShortInput) {
  const std::vector<double> s{1, 2, 3};
  EXPECT_THROW(backlog_slope(s, 1), Error);
  EXPECT_THROW(backlog_slope(s, 4), Error);
}
