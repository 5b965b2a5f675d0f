#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "sinr/geometry.hpp"
#include "sinr/interference.hpp"
#include "sinr/mwisl.hpp"
#include "sinr/traffic.hpp"
#include "sinr/types.hpp"

namespace sinr {

// Identifies the local computation (block, slot) that first activated a link.
// Links keep their group while they are carried forward unchanged.
using GroupId = std::uint64_t;

enum class BlockChoice { KeptPrevious, AdoptedNew };

struct BlockDecision {
  BlockChoice choice = BlockChoice::AdoptedNew;
  Schedule previous;   // S(t-1) restricted to the super-subSquare
  Schedule candidate;  // freshly computed set for the sub-square
  Weight previous_weight = 0;
  Weight candidate_weight = 0;
  std::string note;  // set when the local solver failed
};

struct SlotDecision {
  Schedule schedule;
  std::map<BlockIndex, BlockDecision> blocks;
  std::map<LinkId, GroupId> groups;
  std::size_t links_examined = 0;
};

struct SchedulerState {
  Schedule prev_schedule;
  Slot slot = 0;
  PartitionParams params;
  double epsilon = 0.5;
  std::map<LinkId, GroupId> groups;
  GroupId next_group = 0;
};

struct LocalSolverOptions {
  std::size_t enumeration_cap = kDefaultEnumerationCap;
};

Weight weight_of(const Schedule& s, const QueueState& q);

// One pick-and-compare slot over the given frame. Linear power solves each
// sub-square exactly by enumeration, uniform power with the weight-class
// heuristic; zero-weight links are never candidates.
SlotDecision localized_step(const InterferenceModeld& m, const QueueState& q, const SchedulerState& state,
                            const PartitionFrame& frame, const LocalSolverOptions& opts = {});

// Owns the cross-slot state of the localized algorithm.
class LocalizedScheduler {
 public:
  LocalizedScheduler(const InterferenceModeld& m, const PartitionParams& params, double epsilon,
                     LocalSolverOptions opts = {});

  SlotDecision step(const QueueState& q);

  const SchedulerState& state() const { return state_; }

 private:
  const InterferenceModeld* model_;
  SchedulerState state_;
  LocalSolverOptions opts_;
};

// Greedy maximal schedule: heaviest queue first, kept when still feasible.
Schedule gms_step(const InterferenceModeld& m, const QueueState& q);

// Random maximal schedule: random order, kept when still feasible.
Schedule random_step(const InterferenceModeld& m, const QueueState& q, Rng& rng);

}  // namespace sinr
