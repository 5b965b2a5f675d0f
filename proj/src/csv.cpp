#include "sinr/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "csv_detail.hpp"

namespace sinr {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace detail {

std::vector<std::string> split_row(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) {
    const auto b = field.find_first_not_of(" \t\r");
    const auto e = field.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? std::string() : field.substr(b, e - b + 1));
  }
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

bool next_row(std::istream& is, std::string& line) {
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") != std::string::npos) return true;
  }
  return false;
}

double parse_double(const std::string& s, const std::string& what) {
  double v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw Error(ErrorCode::Io, "malformed " + what + " '" + s + "'");
  }
  return v;
}

std::uint64_t parse_uint(const std::string& s, const std::string& what) {
  std::uint64_t v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw Error(ErrorCode::Io, "malformed " + what + " '" + s + "'");
  }
  return v;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw Error(ErrorCode::Io, "cannot open " + path.string() + " for writing");
  return os;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error(ErrorCode::Io, "cannot open " + path.string() + " for reading");
  return is;
}

void finish(std::ofstream& os, const std::filesystem::path& path) {
  os.flush();
  if (!os) throw Error(ErrorCode::Io, "write to " + path.string() + " failed");
}

}  // namespace detail

void emit_csv(std::ostream& os, const std::vector<MetricsRecord>& records) {
  os << "slot,total_backlog,active_links,mean_I_out,max_inside_affectness,max_total_affectness\n";
  for (const auto& r : records) {
    os << r.slot << ',' << r.total_backlog << ',' << r.active_links << ',' << format_double(r.mean_I_out) << ','
       << format_double(r.max_inside_affectness) << ',' << format_double(r.max_total_affectness) << '\n';
  }
}

void emit_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  os << "rate,seed,final_backlog,slope,stable\n";
  for (const auto& r : rows) {
    os << format_double(r.rate) << ',' << r.seed << ',' << r.final_backlog << ',' << format_double(r.slope) << ','
       << (r.stable ? 1 : 0) << '\n';
  }
}

void emit_csv(std::ostream& os, const std::vector<AuditRow>& rows) {
  os << "slot,link_id,I_out,eps_Imax,inside_affectness,total_affectness,Imax_l\n";
  for (const auto& r : rows) {
    os << r.slot << ',' << r.link_id << ',' << format_double(r.I_out) << ',' << format_double(r.eps_Imax) << ','
       << format_double(r.inside_affectness) << ',' << format_double(r.total_affectness) << ','
       << format_double(r.Imax_l) << '\n';
  }
}

void emit_csv(std::ostream& os, const std::vector<ScheduleRow>& rows) {
  os << "slot,link_id,group\n";
  for (const auto& r : rows) os << r.slot << ',' << r.link_id << ',' << r.group << '\n';
}

template <class Rows>
void emit_csv(const std::filesystem::path& path, const Rows& rows) {
  auto os = detail::open_out(path);
  emit_csv(static_cast<std::ostream&>(os), rows);
  detail::finish(os, path);
}

template void emit_csv(const std::filesystem::path&, const std::vector<MetricsRecord>&);
template void emit_csv(const std::filesystem::path&, const std::vector<SweepRow>&);
template void emit_csv(const std::filesystem::path&, const std::vector<AuditRow>&);
template void emit_csv(const std::filesystem::path&, const std::vector<ScheduleRow>&);

std::vector<ScheduleEntry> read_schedule(std::istream& is) {
  std::string line;
  if (!detail::next_row(is, line)) throw Error(ErrorCode::Io, "schedule file is empty");
  const auto header = detail::split_row(line);
  const bool grouped = header.size() == 3 && header[2] == "group";
  if (header.size() < 2 || header[0] != "slot" || header[1] != "link_id" || (header.size() == 3 && !grouped) ||
      header.size() > 3) {
    throw Error(ErrorCode::Io, "schedule header must be slot,link_id[,group]");
  }
  std::vector<ScheduleEntry> out;
  while (detail::next_row(is, line)) {
    const auto f = detail::split_row(line);
    if (f.size() != header.size()) throw Error(ErrorCode::Io, "schedule row has wrong field count: " + line);
    ScheduleEntry e;
    e.slot = detail::parse_uint(f[0], "slot");
    e.link_id = static_cast<LinkId>(detail::parse_uint(f[1], "link_id"));
    if (grouped) e.group = detail::parse_uint(f[2], "group");
    out.push_back(e);
  }
  return out;
}

std::vector<ScheduleEntry> read_schedule(const std::filesystem::path& path) {
  auto is = detail::open_in(path);
  return read_schedule(is);
}

}  // namespace sinr
