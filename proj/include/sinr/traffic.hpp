#pragma once

#include <cstdint>
#include <random>
#include <span>

#include <Eigen/Core>

#include "sinr/types.hpp"

namespace sinr {

using Rng = std::mt19937_64;

// Per-link backlogs Q(t); every entry is nonnegative.
using QueueState = Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1>;
using ArrivalVector = Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1>;

struct ArrivalConfig {
  double lambda = 0.0;  // mean packets per slot per link
  int a_max = 50;       // per-slot cap
  std::uint64_t seed = 1;
};

// Independent Poisson(lambda) draws per link, truncated at a_max.
ArrivalVector sample_arrivals(const ArrivalConfig& cfg, Rng& rng, Eigen::Index n_links);

// Q' = max(0, Q - S) + A, one packet served per active link.
QueueState update_queues(const QueueState& q, const Schedule& s, const ArrivalVector& a);

std::int64_t total_backlog(const QueueState& q);

// Least-squares slope of the trailing `window` samples (packets per slot).
double backlog_slope(std::span<const double> series, std::size_t window);

// Independent uniform integer draws from [lo, hi].
QueueState initial_queues(Rng& rng, Eigen::Index n_links, std::int64_t lo = 100, std::int64_t hi = 300);

}  // namespace sinr
