#pragma once

#include <array>
#include <cmath>
#include <random>
#include <vector>

#include "sinr/geometry.hpp"
#include "sinr/interference.hpp"
#include "sinr/traffic.hpp"

namespace sinr::test {

// {sender x, sender y, receiver x, receiver y}
using Seg = std::array<double, 4>;

inline NetworkTopology make_net(const std::vector<Seg>& segs, double r, double R) {
  std::vector<Point2d> nodes;
  std::vector<std::pair<NodeId, NodeId>> ends;
  for (const auto& s : segs) {
    const auto id = static_cast<NodeId>(nodes.size());
    nodes.emplace_back(s[0], s[1]);
    nodes.emplace_back(s[2], s[3]);
    ends.emplace_back(id, id + 1);
  }
  return NetworkTopology(std::move(nodes), ends, r, R);
}

// n links, senders uniform in [0, area]^2, lengths uniform in [r, R].
inline NetworkTopology random_net(Rng& rng, int n, double area, double r, double R) {
  std::uniform_real_distribution<double> coord(0, area), len(r, R), ang(0, 2 * M_PI);
  std::vector<Seg> segs;
  for (int k = 0; k < n; ++k) {
    const double x = coord(rng), y = coord(rng), l = len(rng), a = ang(rng);
    segs.push_back({x, y, x + l * std::cos(a), y + l * std::sin(a)});
  }
  return make_net(segs, r, R);
}

// Straight-from-the-definition SINR in long double, sharing no code with the
// library beyond the network coordinates.
inline long double oracle_power(const Link<double>& l, const PowerModel& pm) {
  if (pm.mode == PowerMode::Uniform) return pm.P;
  return static_cast<long double>(pm.c) * std::pow(static_cast<long double>(l.length), (long double)pm.beta);
}

inline long double oracle_sinr(const NetworkTopology& net, const SINRParams& sp, const PowerModel& pm, LinkId l,
                               const Schedule& s) {
  const auto& v = net.link(l);
  const long double eta = sp.eta, kappa = sp.kappa;
  const long double signal = oracle_power(v, pm) * eta * std::pow((long double)v.length, -kappa);
  long double interference = 0;
  for (LinkId w : s) {
    if (w == l) continue;
    const auto& u = net.link(w);
    const long double dx = (long double)u.sender.x() - v.receiver.x();
    const long double dy = (long double)u.sender.y() - v.receiver.y();
    interference += oracle_power(u, pm) * eta * std::pow(std::sqrt(dx * dx + dy * dy), -kappa);
  }
  return signal / (interference + sp.xi);
}

// Feasible with the same 1e-9 relative slack the library documents.
inline bool oracle_feasible(const NetworkTopology& net, const SINRParams& sp, const PowerModel& pm,
                            const Schedule& s) {
  for (LinkId l : s) {
    if (oracle_sinr(net, sp, pm, l, s) < sp.sigma * (1 - 1e-9L)) return false;
  }
  return true;
}

inline SINRParams desk_params() { return SINRParams{1.0, 3.0, 1.0, 1e-4, 1.0, 5.0}; }

inline QueueState random_queues(Rng& rng, Eigen::Index n, std::int64_t lo, std::int64_t hi) {
  std::uniform_int_distribution<std::int64_t> d(lo, hi);
  QueueState q(n);
  for (Eigen::Index i = 0; i < n; ++i) q(i) = d(rng);
  return q;
}

}  // namespace sinr::test
