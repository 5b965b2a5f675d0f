#include "sinr/scheduler.hpp"

#include <algorithm>
#include <numeric>

namespace sinr {

namespace {

Schedule solve_local(const InterferenceModeld& m, const LocalInstance& inst, const LocalSolverOptions& opts) {
  if (m.power_model().mode == PowerMode::Linear) return enumerate_mwisl(m, inst, opts.enumeration_cap);
  return weight_class_mwisl(m, inst);
}

std::vector<LinkId> backlogged(const QueueState& q) {
  std::vector<LinkId> out;
  for (Eigen::Index l = 0; l < q.size(); ++l) {
    if (q(l) > 0) out.push_back(static_cast<LinkId>(l));
  }
  return out;
}

}  // namespace

Weight weight_of(const Schedule& s, const QueueState& q) {
  Weight w = 0;
  for (LinkId l : s) w += q(l);
  return w;
}

SlotDecision localized_step(const InterferenceModeld& m, const QueueState& q, const SchedulerState& state,
                            const PartitionFrame& frame, const LocalSolverOptions& opts) {
  const LinkPartition part = partition_links(m.network(), frame);
  const double threshold = 1 - state.epsilon;
  GroupId next_group = state.next_group;

  SlotDecision out;
  std::vector<LinkId> active;
  for (const auto& [index, block] : part.blocks) {
    BlockDecision bd;
    bd.previous = set_intersection(state.prev_schedule, Schedule(block.super_links));

    std::vector<LinkId> links;
    std::vector<Weight> weights;
    for (LinkId l : block.sub_links) {
      if (q(l) > 0) {
        links.push_back(l);
        weights.push_back(q(l));
      }
    }
    try {
      bd.candidate = solve_local(m, LocalInstance::make(std::move(links), std::move(weights), threshold), opts);
    } catch (const Error& e) {
      bd.candidate = Schedule();
      bd.note = e.what();
    }
    bd.previous_weight = weight_of(bd.previous, q);
    bd.candidate_weight = weight_of(bd.candidate, q);
    out.links_examined += block.super_links.size();

    // Keep the previous set only when strictly heavier.
    if (bd.previous_weight > bd.candidate_weight) {
      bd.choice = BlockChoice::KeptPrevious;
      for (LinkId l : bd.previous) {
        active.push_back(l);
        auto it = state.groups.find(l);
        out.groups[l] = it != state.groups.end() ? it->second : next_group++;
      }
    } else {
      bd.choice = BlockChoice::AdoptedNew;
      if (!bd.candidate.empty()) {
        const GroupId g = next_group++;
        for (LinkId l : bd.candidate) {
          active.push_back(l);
          out.groups[l] = g;
        }
      }
    }
    out.blocks.emplace(index, std::move(bd));
  }
  out.schedule = Schedule(std::move(active));
  return out;
}

LocalizedScheduler::LocalizedScheduler(const InterferenceModeld& m, const PartitionParams& params, double epsilon,
                                       LocalSolverOptions opts)
    : model_(&m), opts_(opts) {
  if (!(epsilon > 0) || !(epsilon < 1)) throw Error(ErrorCode::InvalidParams, "epsilon must lie in (0, 1)");
  state_.params = params;
  state_.epsilon = epsilon;
}

SlotDecision LocalizedScheduler::step(const QueueState& q) {
  const PartitionFrame frame = frame_for_slot(state_.slot, state_.params);
  SlotDecision d = localized_step(*model_, q, state_, frame, opts_);
  state_.prev_schedule = d.schedule;
  state_.groups = d.groups;
  GroupId top = state_.next_group;
  for (const auto& [l, g] : d.groups) top = std::max(top, g + 1);
  state_.next_group = top;
  ++state_.slot;
  return d;
}

Schedule gms_step(const InterferenceModeld& m, const QueueState& q) {
  std::vector<LinkId> order = backlogged(q);
  std::stable_sort(order.begin(), order.end(), [&](LinkId a, LinkId b) { return q(a) > q(b); });
  ActiveSet<double> chosen(m);
  for (LinkId l : order) {
    if (chosen.admits(l)) chosen.insert(l);
  }
  return chosen.members();
}

Schedule random_step(const InterferenceModeld& m, const QueueState& q, Rng& rng) {
  std::vector<LinkId> order = backlogged(q);
  std::shuffle(order.begin(), order.end(), rng);
  ActiveSet<double> chosen(m);
  for (LinkId l : order) {
    if (chosen.admits(l)) chosen.insert(l);
  }
  return chosen.members();
}

}  // namespace sinr
