#include <map>

#include "csv_detail.hpp"
#include "sinr/io.hpp"

namespace sinr {

void write_topology(std::ostream& os, const NetworkTopology& net) {
  std::vector<std::optional<std::pair<bool, NodeId>>> role(net.nodes().size());
  for (const auto& l : net.links()) {
    role[l.sender_node] = {true, l.receiver_node};
    role[l.receiver_node] = {false, l.sender_node};
  }
  os << "node_id,x,y,role,peer_id\n";
  for (std::size_t k = 0; k < net.nodes().size(); ++k) {
    if (!role[k]) continue;
    const auto& p = net.nodes()[k];
    os << k << ',' << format_double(p.x()) << ',' << format_double(p.y()) << ','
       << (role[k]->first ? "sender" : "receiver") << ',' << role[k]->second << '\n';
  }
}

void write_topology(const std::filesystem::path& path, const NetworkTopology& net) {
  auto os = detail::open_out(path);
  write_topology(static_cast<std::ostream&>(os), net);
  detail::finish(os, path);
}

NetworkTopology read_topology(std::istream& is, double r, double R) {
  std::string line;
  if (!detail::next_row(is, line)) throw Error(ErrorCode::Io, "topology file is empty");
  if (detail::split_row(line) != std::vector<std::string>{"node_id", "x", "y", "role", "peer_id"}) {
    throw Error(ErrorCode::Io, "topology header must be node_id,x,y,role,peer_id");
  }
  struct Row {
    Point2d p;
    bool sender;
    std::uint64_t peer;
  };
  std::map<std::uint64_t, Row> rows;
  while (detail::next_row(is, line)) {
    const auto f = detail::split_row(line);
    if (f.size() != 5) throw Error(ErrorCode::Io, "topology row has wrong field count: " + line);
    const auto id = detail::parse_uint(f[0], "node_id");
    if (f[3] != "sender" && f[3] != "receiver") throw Error(ErrorCode::Io, "unknown role '" + f[3] + "'");
    Row row{Point2d(detail::parse_double(f[1], "x"), detail::parse_double(f[2], "y")), f[3] == "sender",
            detail::parse_uint(f[4], "peer_id")};
    if (!rows.emplace(id, row).second) throw Error(ErrorCode::Io, "duplicate node_id " + f[0]);
  }
  std::map<std::uint64_t, NodeId> dense;
  std::vector<Point2d> nodes;
  for (const auto& [id, row] : rows) {
    dense[id] = static_cast<NodeId>(nodes.size());
    nodes.push_back(row.p);
  }
  std::vector<std::pair<NodeId, NodeId>> endpoints;
  for (const auto& [id, row] : rows) {
    const auto peer = rows.find(row.peer);
    if (peer == rows.end()) throw Error(ErrorCode::Io, "node " + std::to_string(id) + " names a missing peer");
    if (peer->second.sender == row.sender || peer->second.peer != id) {
      throw Error(ErrorCode::Io, "node " + std::to_string(id) + " is not paired with a reciprocal peer");
    }
    if (row.sender) endpoints.emplace_back(dense[id], dense[row.peer]);
  }
  try {
    return NetworkTopology(std::move(nodes), endpoints, r, R);
  } catch (const Error& e) {
    throw Error(ErrorCode::InvalidParams, std::string("topology rejected: ") + e.what());
  }
}

NetworkTopology read_topology(const std::filesystem::path& path, double r, double R) {
  auto is = detail::open_in(path);
  return read_topology(is, r, R);
}

}  // namespace sinr
