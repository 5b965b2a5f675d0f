#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sinr/harness.hpp"

namespace sinr {

// Shortest decimal string that parses back to the same double.
std::string format_double(double v);

// Topology CSV: node_id,x,y,role,peer_id. Node ids are remapped densely in
// ascending order; link ids follow ascending sender node id.
void write_topology(std::ostream& os, const NetworkTopology& net);
void write_topology(const std::filesystem::path& path, const NetworkTopology& net);
NetworkTopology read_topology(std::istream& is, double r, double R);
NetworkTopology read_topology(const std::filesystem::path& path, double r, double R);

void emit_csv(std::ostream& os, const std::vector<MetricsRecord>& records);
void emit_csv(std::ostream& os, const std::vector<SweepRow>& rows);
void emit_csv(std::ostream& os, const std::vector<AuditRow>& rows);
void emit_csv(std::ostream& os, const std::vector<ScheduleRow>& rows);

template <class Rows>
void emit_csv(const std::filesystem::path& path, const Rows& rows);

struct ScheduleEntry {
  Slot slot = 0;
  LinkId link_id = 0;
  std::optional<GroupId> group;
};

// Schedule CSV: slot,link_id[,group].
std::vector<ScheduleEntry> read_schedule(std::istream& is);
std::vector<ScheduleEntry> read_schedule(const std::filesystem::path& path);

}  // namespace sinr
