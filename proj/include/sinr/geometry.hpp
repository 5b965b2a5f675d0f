#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "sinr/types.hpp"

namespace sinr {

template <typename Scalar>
using Point2 = Eigen::Matrix<Scalar, 2, 1>;
using Point2d = Point2<double>;

// Directed link from a sender to a receiver. The length is derived once at
// construction.
template <typename Scalar>
struct Link {
  LinkId id = 0;
  NodeId sender_node = 0;
  NodeId receiver_node = 0;
  Point2<Scalar> sender = Point2<Scalar>::Zero();
  Point2<Scalar> receiver = Point2<Scalar>::Zero();
  Scalar length = 0;
};

// Relative tolerance applied to the r <= length <= R check so that links
// placed exactly on the bounding circle survive a round trip through sqrt.
inline constexpr double kLengthTolerance = 1e-12;

template <typename Scalar>
class Network {
 public:
  using Point = Point2<Scalar>;

  Network() = default;

  // `endpoints[k]` is the (sender, receiver) node pair of link k.
  Network(std::vector<Point> nodes, const std::vector<std::pair<NodeId, NodeId>>& endpoints, Scalar r,
          Scalar R)
      : nodes_(std::move(nodes)), r_(r), R_(R) {
    if (!(r > 0) || !(R >= r) || !std::isfinite(static_cast<double>(R))) {
      throw Error(ErrorCode::InvalidParams, "link length bounds require 0 < r <= R");
    }
    for (const Point& p : nodes_) {
      if (!p.allFinite()) throw Error(ErrorCode::InvalidParams, "node coordinates must be finite");
    }
    links_.reserve(endpoints.size());
    for (std::size_t k = 0; k < endpoints.size(); ++k) {
      const auto [u, v] = endpoints[k];
      if (u >= nodes_.size() || v >= nodes_.size() || u == v) {
        throw Error(ErrorCode::InvalidParams, "link " + std::to_string(k) + " has invalid endpoints");
      }
      Link<Scalar> l;
      l.id = static_cast<LinkId>(k);
      l.sender_node = u;
      l.receiver_node = v;
      l.sender = nodes_[u];
      l.receiver = nodes_[v];
      l.length = (l.receiver - l.sender).norm();
      const Scalar tol = static_cast<Scalar>(kLengthTolerance);
      if (l.length < r * (1 - tol) || l.length > R * (1 + tol)) {
        throw Error(ErrorCode::InvalidParams, "link " + std::to_string(k) + " length " +
                                                  std::to_string(static_cast<double>(l.length)) +
                                                  " outside [r, R]");
      }
      links_.push_back(l);
    }
  }

  const std::vector<Point>& nodes() const { return nodes_; }
  const std::vector<Link<Scalar>>& links() const { return links_; }
  const Link<Scalar>& link(LinkId id) const { return links_.at(id); }
  std::size_t num_links() const { return links_.size(); }
  Scalar r() const { return r_; }
  Scalar R() const { return R_; }

  Point bbox_min() const {
    Point lo = Point::Constant(std::numeric_limits<Scalar>::max());
    for (const Point& p : nodes_) lo = lo.cwiseMin(p);
    return nodes_.empty() ? Point::Zero() : lo;
  }

 private:
  std::vector<Point> nodes_;
  std::vector<Link<Scalar>> links_;
  Scalar r_ = 1;
  Scalar R_ = 1;
};

using NetworkTopology = Network<double>;

// Side d of a cell, K cells per super-subSquare side, M margin cells.
struct PartitionParams {
  int K = 3;
  int M = 1;
  double d = 1.0;

  int J() const { return K - 2 * M; }

  static PartitionParams make(int K, int M, double d) {
    if (M < 1) throw Error(ErrorCode::InvalidParams, "partition margin M must be >= 1");
    if (K - 2 * M < 1) throw Error(ErrorCode::InvalidParams, "partition requires K > 2M");
    if (!(d > 0)) throw Error(ErrorCode::InvalidParams, "cell side must be positive");
    return PartitionParams{K, M, d};
  }
};

struct PartitionFrame {
  PartitionParams params;
  int a = 0;
  int b = 0;

  static PartitionFrame make(const PartitionParams& params, int a, int b) {
    if (a < 0 || a >= params.K || b < 0 || b >= params.K) {
      throw Error(ErrorCode::InvalidParams, "shift must lie in [0, K)");
    }
    return PartitionFrame{params, a, b};
  }
};

struct CellIndex {
  std::int64_t i = 0;
  std::int64_t j = 0;
  friend auto operator<=>(const CellIndex&, const CellIndex&) = default;
};

// Index (i, j) of a super-subSquare in the shifted frame.
struct BlockIndex {
  std::int64_t i = 0;
  std::int64_t j = 0;
  friend auto operator<=>(const BlockIndex&, const BlockIndex&) = default;
};

struct ShiftPair {
  int a = 0;
  int b = 0;
  friend bool operator==(const ShiftPair&, const ShiftPair&) = default;
};

namespace detail {

inline std::int64_t floor_div(std::int64_t x, std::int64_t k) {
  std::int64_t q = x / k;
  if ((x % k != 0) && ((x < 0) != (k < 0))) --q;
  return q;
}

inline std::int64_t floor_mod(std::int64_t x, std::int64_t k) { return x - floor_div(x, k) * k; }

inline bool in_core(std::int64_t local, int K, int M) { return local >= M && local < K - M; }

}  // namespace detail

// Half-open cells [i*d, (i+1)*d); the absolute cell index is taken first and
// then shifted by the integer frame offset, so a point keeps the same absolute
// cell in every frame.
template <typename Scalar>
CellIndex cell_of(const Point2<Scalar>& p, const PartitionFrame& frame) {
  const double d = frame.params.d;
  const auto ix = static_cast<std::int64_t>(std::floor(static_cast<double>(p.x()) / d));
  const auto iy = static_cast<std::int64_t>(std::floor(static_cast<double>(p.y()) / d));
  return CellIndex{ix - frame.a, iy - frame.b};
}

inline BlockIndex block_of(const CellIndex& c, int K) {
  return BlockIndex{detail::floor_div(c.i, K), detail::floor_div(c.j, K)};
}

inline bool in_sub_square(const CellIndex& c, const PartitionParams& p) {
  return detail::in_core(detail::floor_mod(c.i, p.K), p.K, p.M) &&
         detail::in_core(detail::floor_mod(c.j, p.K), p.K, p.M);
}

// (a_t, b_t): a_t = t mod K, b advances by one exactly in the slots where a_t
// wraps to zero. Closed form of that recurrence.
inline ShiftPair shift_for_slot(Slot t, int K) {
  if (K < 3) throw Error(ErrorCode::InvalidParams, "shift cycle requires K >= 3");
  const auto k = static_cast<Slot>(K);
  return ShiftPair{static_cast<int>(t % k), static_cast<int>((t / k) % k)};
}

inline PartitionFrame frame_for_slot(Slot t, const PartitionParams& params) {
  const ShiftPair s = shift_for_slot(t, params.K);
  return PartitionFrame::make(params, s.a, s.b);
}

// Virtual cover: the node bounding box sits K cells inside the cover edge.
template <typename Scalar>
Point2<Scalar> cover_origin(const Network<Scalar>& net, const PartitionParams& params) {
  const Scalar inset = static_cast<Scalar>(params.K * params.d);
  return net.bbox_min() - Point2<Scalar>::Constant(inset);
}

struct BlockLinks {
  std::vector<LinkId> super_links;  // both endpoints in the super-subSquare
  std::vector<LinkId> sub_links;    // both endpoints in its sub-square
};

struct LinkPartition {
  std::map<BlockIndex, BlockLinks> blocks;
  Schedule removed;  // links in no sub-square this frame

  // Block holding the link in its super-subSquare, if any.
  std::map<LinkId, BlockIndex> owner;
};

template <typename Scalar>
LinkPartition partition_links(const Network<Scalar>& net, const PartitionFrame& frame) {
  const PartitionParams& p = frame.params;
  const Point2<Scalar> origin = cover_origin(net, p);
  LinkPartition out;
  std::vector<LinkId> removed;
  for (const Link<Scalar>& l : net.links()) {
    const CellIndex cs = cell_of<Scalar>(l.sender - origin, frame);
    const CellIndex cr = cell_of<Scalar>(l.receiver - origin, frame);
    const BlockIndex bs = block_of(cs, p.K);
    const BlockIndex br = block_of(cr, p.K);
    if (bs != br) {
      removed.push_back(l.id);
      continue;
    }
    BlockLinks& block = out.blocks[bs];
    block.super_links.push_back(l.id);
    out.owner.emplace(l.id, bs);
    if (in_sub_square(cs, p) && in_sub_square(cr, p)) {
      block.sub_links.push_back(l.id);
    } else {
      removed.push_back(l.id);
    }
  }
  out.removed = Schedule(std::move(removed));
  return out;
}

// Number of the K^2 frames that place `cell` in a margin strip of its
// super-subSquare.
inline int removed_strip_appearances(const CellIndex& cell, int K, int M) {
  if (M < 1 || 2 * M >= K) throw Error(ErrorCode::InvalidParams, "requires 0 < 2M < K");
  int count = 0;
  for (int a = 0; a < K; ++a) {
    const bool x_core = detail::in_core(detail::floor_mod(cell.i - a, K), K, M);
    for (int b = 0; b < K; ++b) {
      const bool y_core = detail::in_core(detail::floor_mod(cell.j - b, K), K, M);
      if (!(x_core && y_core)) ++count;
    }
  }
  return count;
}

}  // namespace sinr
