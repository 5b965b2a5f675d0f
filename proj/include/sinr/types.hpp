#pragma once

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace sinr {

using LinkId = std::uint32_t;
using NodeId = std::uint32_t;
using Weight = std::int64_t;
using Slot = std::uint64_t;

enum class ErrorCode {
  InvalidParams,
  NonSchedulableLink,
  Degenerate,
  InstanceTooLarge,
  GenerationFailed,
  Io,
  InvariantViolation,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// A set of simultaneously active links, kept sorted and unique so that
// iteration is always in ascending link-id order.
class Schedule {
 public:
  using const_iterator = std::vector<LinkId>::const_iterator;

  Schedule() = default;
  Schedule(std::initializer_list<LinkId> ids) : ids_(ids) { normalize(); }
  explicit Schedule(std::vector<LinkId> ids) : ids_(std::move(ids)) { normalize(); }

  bool contains(LinkId id) const { return std::binary_search(ids_.begin(), ids_.end(), id); }

  void insert(LinkId id) {
    auto it = std::lower_bound(ids_.begin(), ids_.end(), id);
    if (it == ids_.end() || *it != id) ids_.insert(it, id);
  }

  void erase(LinkId id) {
    auto it = std::lower_bound(ids_.begin(), ids_.end(), id);
    if (it != ids_.end() && *it == id) ids_.erase(it);
  }

  Schedule with(LinkId id) const {
    Schedule s = *this;
    s.insert(id);
    return s;
  }

  Schedule without(LinkId id) const {
    Schedule s = *this;
    s.erase(id);
    return s;
  }

  std::size_t size() const { return ids_.size(); }
  bool empty() const { return ids_.empty(); }
  const_iterator begin() const { return ids_.begin(); }
  const_iterator end() const { return ids_.end(); }
  const std::vector<LinkId>& ids() const { return ids_; }

  friend bool operator==(const Schedule&, const Schedule&) = default;

  // Lexicographic order on the sorted id sequence; used for deterministic
  // tie-breaking between equal-weight sets.
  friend bool operator<(const Schedule& a, const Schedule& b) {
    return std::lexicographical_compare(a.ids_.begin(), a.ids_.end(), b.ids_.begin(), b.ids_.end());
  }

 private:
  void normalize() {
    std::sort(ids_.begin(), ids_.end());
    ids_.erase(std::unique(ids_.begin(), ids_.end()), ids_.end());
  }

  std::vector<LinkId> ids_;
};

inline Schedule set_union(const Schedule& a, const Schedule& b) {
  std::vector<LinkId> out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return Schedule(std::move(out));
}

inline Schedule set_intersection(const Schedule& a, const Schedule& b) {
  std::vector<LinkId> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return Schedule(std::move(out));
}

}  // namespace sinr
