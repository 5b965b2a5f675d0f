#include "sinr/mwisl.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace sinr {

namespace {

void require_epsilon(double epsilon) {
  if (!(epsilon > 0) || !(epsilon < 1)) throw Error(ErrorCode::InvalidParams, "epsilon must lie in (0, 1)");
}

void require_kappa(const SINRParams& sp) {
  if (!(sp.kappa > 2)) throw Error(ErrorCode::InvalidParams, "separation margin requires kappa > 2");
}

int margin_from_ratio(double ratio, double kappa) {
  const double m = std::ceil(std::pow(ratio, 1.0 / kappa));
  return std::max(1, static_cast<int>(m));
}

// Instance links sorted by id, weights carried along.
struct SortedInstance {
  std::vector<LinkId> ids;
  std::vector<Weight> weights;
};

SortedInstance sorted(const LocalInstance& inst) {
  std::vector<std::size_t> order(inst.links.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return inst.links[a] < inst.links[b]; });
  SortedInstance out;
  for (std::size_t k : order) {
    out.ids.push_back(inst.links[k]);
    out.weights.push_back(inst.weights[k]);
  }
  return out;
}

bool better(Weight w, const Schedule& s, Weight best_w, const Schedule& best) {
  return w > best_w || (w == best_w && s < best);
}

class BranchAndBound {
 public:
  BranchAndBound(const InterferenceModeld& m, const LocalInstance& inst) : m_(m), thr_(inst.threshold) {
    SortedInstance s = sorted(inst);
    ids_ = std::move(s.ids);
    weights_ = std::move(s.weights);
    const std::size_t k = ids_.size();
    suffix_.assign(k + 1, 0);
    for (std::size_t i = k; i-- > 0;) suffix_[i] = suffix_[i + 1] + weights_[i];
    levels_.assign(k + 1, std::vector<double>(k, 0.0));
  }

  Schedule solve() {
    descend(0, 0);
    return best_;
  }

 private:
  double affectness_of(std::size_t i, double interference) const {
    return m_.noise_scale(ids_[i]) * interference / m_.signal(ids_[i]);
  }

  void descend(std::size_t pos, Weight weight) {
    if (weight + suffix_[pos] < best_weight_) return;
    if (pos == ids_.size()) {
      const Schedule current(chosen_);
      if (better(weight, current, best_weight_, best_)) {
        best_weight_ = weight;
        best_ = current;
      }
      return;
    }
    const std::vector<double>& acc = levels_[pos];
    if (admissible(pos, acc)) {
      std::vector<double>& next = levels_[pos + 1];
      for (std::size_t i = 0; i < ids_.size(); ++i) {
        next[i] = (i == pos) ? acc[i] : acc[i] + m_.gain(ids_[i], ids_[pos]);
      }
      chosen_.push_back(ids_[pos]);
      descend(pos + 1, weight + weights_[pos]);
      chosen_.pop_back();
    }
    levels_[pos + 1] = acc;
    descend(pos + 1, weight);
  }

  bool admissible(std::size_t pos, const std::vector<double>& acc) const {
    if (!within_affectness(affectness_of(pos, acc[pos]), thr_)) return false;
    for (LinkId id : chosen_) {
      const auto i = static_cast<std::size_t>(std::lower_bound(ids_.begin(), ids_.end(), id) - ids_.begin());
      if (!within_affectness(affectness_of(i, acc[i] + m_.gain(ids_[i], ids_[pos])), thr_)) return false;
    }
    return true;
  }

  const InterferenceModeld& m_;
  double thr_;
  std::vector<LinkId> ids_;
  std::vector<Weight> weights_;
  std::vector<Weight> suffix_;
  std::vector<std::vector<double>> levels_;  // interference from chosen links, per depth
  std::vector<LinkId> chosen_;
  Schedule best_;
  Weight best_weight_ = 0;
};

}  // namespace

LocalInstance LocalInstance::make(std::vector<LinkId> links, std::vector<Weight> weights, double threshold) {
  if (links.size() != weights.size()) throw Error(ErrorCode::InvalidParams, "links and weights differ in size");
  if (!(threshold > 0) || !(threshold < 1)) throw Error(ErrorCode::InvalidParams, "threshold must lie in (0, 1)");
  if (std::any_of(weights.begin(), weights.end(), [](Weight w) { return w < 0; })) {
    throw Error(ErrorCode::InvalidParams, "weights must be nonnegative");
  }
  if (Schedule(links).size() != links.size()) throw Error(ErrorCode::InvalidParams, "duplicate link ids");
  return LocalInstance{std::move(links), std::move(weights), threshold};
}

Weight LocalInstance::weight_of(LinkId id) const {
  for (std::size_t k = 0; k < links.size(); ++k) {
    if (links[k] == id) return weights[k];
  }
  return 0;
}

std::int64_t optsize_bound_linear(const SINRParams& sp, const PowerModel& pm, int J, double epsilon,
                                  NoiseExponent form) {
  if (pm.mode != PowerMode::Linear) throw Error(ErrorCode::InvalidParams, "linear bound needs linear power");
  if (J < 1) throw Error(ErrorCode::InvalidParams, "J must be >= 1");
  require_epsilon(epsilon);
  const double exponent = form == NoiseExponent::KappaMinusBeta ? sp.kappa - pm.beta : pm.beta - sp.kappa;
  const double bracket = 1.0 / sp.sigma - sp.xi * std::pow(sp.r, exponent) / (pm.c * sp.eta);
  if (!(bracket > 0)) throw Error(ErrorCode::Degenerate, "no link can be scheduled: size bound bracket <= 0");
  const double side = std::numbers::sqrt2 * J * sp.R;
  return static_cast<std::int64_t>(std::ceil(std::pow(side, sp.kappa) / (1 - epsilon) * bracket)) + 1;
}

int separation_margin_linear(const SINRParams& sp, const PowerModel& pm, std::int64_t opt_ub, double epsilon) {
  return separation_margin_linear(sp, pm, opt_ub, epsilon, network_imax(sp, pm));
}

int separation_margin_linear(const SINRParams& sp, const PowerModel& pm, std::int64_t opt_ub, double epsilon,
                             double imax) {
  require_kappa(sp);
  require_epsilon(epsilon);
  if (!(imax > 0)) throw Error(ErrorCode::InvalidParams, "I_max must be positive");
  const double num = 2 * std::numbers::pi * pm.c * sp.eta * std::pow(sp.R, pm.beta - sp.kappa) *
                     static_cast<double>(opt_ub);
  return margin_from_ratio(num / ((sp.kappa - 2) * epsilon * imax), sp.kappa);
}

std::int64_t optsize_bound_uniform(const SINRParams& sp, int J) {
  if (J < 1) throw Error(ErrorCode::InvalidParams, "J must be >= 1");
  const double rho = std::numbers::sqrt2 * J * sp.R / sp.r;
  const double value = std::pow(rho + 1, sp.kappa) / sp.sigma * (1 - std::pow(sp.r / sp.R, sp.kappa));
  const auto bound = static_cast<std::int64_t>(std::ceil(value));
  if (bound <= 0) throw Error(ErrorCode::Degenerate, "uniform size bound is zero (r == R)");
  return bound;
}

int separation_margin_uniform(const SINRParams& sp, double P, std::int64_t x_ub, double epsilon) {
  return separation_margin_uniform(sp, P, x_ub, epsilon, network_imax(sp, PowerModel::uniform(P)));
}

int separation_margin_uniform(const SINRParams& sp, double P, std::int64_t x_ub, double epsilon, double imax) {
  require_kappa(sp);
  require_epsilon(epsilon);
  if (!(imax > 0)) throw Error(ErrorCode::InvalidParams, "I_max must be positive");
  const double num = 2 * std::numbers::pi * sp.eta * P * static_cast<double>(x_ub);
  const double den = (sp.kappa - 2) * epsilon * imax * std::pow(sp.R, sp.kappa);
  return margin_from_ratio(num / den, sp.kappa);
}

Schedule enumerate_mwisl(const InterferenceModeld& m, const LocalInstance& inst, std::size_t cap) {
  if (inst.links.size() > cap) {
    throw Error(ErrorCode::InstanceTooLarge, "local instance of " + std::to_string(inst.links.size()) +
                                                 " links exceeds enumeration cap " + std::to_string(cap));
  }
  return BranchAndBound(m, inst).solve();
}

Schedule shortest_first_isl(const InterferenceModeld& m, const std::vector<LinkId>& links, double threshold) {
  std::vector<LinkId> order = links;
  const auto& net = m.network();
  std::sort(order.begin(), order.end(), [&](LinkId a, LinkId b) {
    const double la = net.link(a).length;
    const double lb = net.link(b).length;
    return la < lb || (la == lb && a < b);
  });
  ActiveSet<double> chosen(m);
  for (LinkId l : order) {
    if (chosen.admits_within(l, threshold)) chosen.insert(l);
  }
  return chosen.members();
}

std::vector<std::vector<LinkId>> weight_classes(const LocalInstance& inst) {
  const auto n = static_cast<Weight>(inst.links.size());
  if (n == 0) return {};
  const Weight w_max = *std::max_element(inst.weights.begin(), inst.weights.end());
  if (w_max <= 0) return {};

  // Phase I: drop weight <= w_max / n, but never the heaviest links.
  std::vector<std::size_t> survivors;
  for (std::size_t k = 0; k < inst.links.size(); ++k) {
    const Weight w = inst.weights[k];
    if (w == w_max || w * n > w_max) survivors.push_back(k);
  }
  Weight w_min = w_max;
  for (std::size_t k : survivors) w_min = std::min(w_min, inst.weights[k]);

  // Phase II: g = max(1, ceil(log2(w_max / w_min))) classes
  // [2^i w_min, 2^(i+1) w_min), the last one closed at w_max.
  int g = 1;
  while ((w_min << g) < w_max) ++g;
  std::vector<std::vector<LinkId>> classes(static_cast<std::size_t>(g));
  for (std::size_t k : survivors) {
    int i = 0;
    while (i + 1 < g && inst.weights[k] >= (w_min << (i + 1))) ++i;
    classes[static_cast<std::size_t>(i)].push_back(inst.links[k]);
  }
  return classes;
}

Schedule weight_class_mwisl(const InterferenceModeld& m, const LocalInstance& inst) {
  Schedule best;
  Weight best_weight = -1;
  for (const auto& cls : weight_classes(inst)) {
    if (cls.empty()) continue;
    Schedule s = shortest_first_isl(m, cls, inst.threshold);
    Weight w = 0;
    for (LinkId l : s) w += inst.weight_of(l);
    if (w > best_weight) {
      best_weight = w;
      best = std::move(s);
    }
  }
  return best;
}

WeightedSet brute_force_oracle(const InterferenceModeld& m, const LocalInstance& inst) {
  if (inst.links.size() > kOracleCap) {
    throw Error(ErrorCode::InstanceTooLarge, "oracle accepts at most 15 links");
  }
  const SortedInstance s = sorted(inst);
  const std::size_t k = s.ids.size();
  WeightedSet best;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k); ++mask) {
    std::vector<LinkId> members;
    Weight w = 0;
    for (std::size_t i = 0; i < k; ++i) {
      if (mask & (std::uint64_t{1} << i)) {
        members.push_back(s.ids[i]);
        w += s.weights[i];
      }
    }
    const Schedule set(std::move(members));
    bool ok = true;
    for (LinkId l : set) {
      if (!within_affectness(affectness(m, l, set.without(l)), inst.threshold)) {
        ok = false;
        break;
      }
    }
    if (ok && better(w, set, best.weight, best.links)) best = WeightedSet{set, w};
  }
  return best;
}

}  // namespace sinr
