#include "sinr/traffic.hpp"

#include <algorithm>
#include <string>

namespace sinr {

ArrivalVector sample_arrivals(const ArrivalConfig& cfg, Rng& rng, Eigen::Index n_links) {
  if (!(cfg.lambda >= 0)) throw Error(ErrorCode::InvalidParams, "arrival rate must be nonnegative");
  if (cfg.a_max < 1) throw Error(ErrorCode::InvalidParams, "a_max must be >= 1");
  ArrivalVector a = ArrivalVector::Zero(n_links);
  if (cfg.lambda == 0) return a;
  std::poisson_distribution<std::int64_t> poisson(cfg.lambda);
  for (Eigen::Index l = 0; l < n_links; ++l) a(l) = std::min<std::int64_t>(poisson(rng), cfg.a_max);
  return a;
}

QueueState update_queues(const QueueState& q, const Schedule& s, const ArrivalVector& a) {
  if (q.size() != a.size()) throw Error(ErrorCode::InvalidParams, "queue and arrival vectors differ in size");
  QueueState served = QueueState::Zero(q.size());
  for (LinkId l : s) {
    if (static_cast<Eigen::Index>(l) >= q.size()) {
      throw Error(ErrorCode::InvalidParams, "scheduled link " + std::to_string(l) + " out of range");
    }
    served(l) = 1;
  }
  return (q - served).cwiseMax(0) + a;
}

std::int64_t total_backlog(const QueueState& q) { return q.sum(); }

double backlog_slope(std::span<const double> series, std::size_t window) {
  if (window < 2 || series.size() < window) {
    throw Error(ErrorCode::InvalidParams, "slope needs a window of at least 2 samples");
  }
  const auto tail = series.subspan(series.size() - window);
  const auto n = static_cast<double>(window);
  double mean_x = (n - 1) / 2;
  double mean_y = 0;
  for (double y : tail) mean_y += y;
  mean_y /= n;
  double sxy = 0;
  double sxx = 0;
  for (std::size_t i = 0; i < window; ++i) {
    const double dx = static_cast<double>(i) - mean_x;
    sxy += dx * (tail[i] - mean_y);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

QueueState initial_queues(Rng& rng, Eigen::Index n_links, std::int64_t lo, std::int64_t hi) {
  std::uniform_int_distribution<std::int64_t> dist(lo, hi);
  QueueState q(n_links);
  for (Eigen::Index l = 0; l < n_links; ++l) q(l) = dist(rng);
  return q;
}

}  // namespace sinr
