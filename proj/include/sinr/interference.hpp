#pragma once

#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "sinr/geometry.hpp"
#include "sinr/types.hpp"

namespace sinr {

// Physical constants of the SINR model.
struct SINRParams {
  double eta = 1.0;    // reference loss factor
  double kappa = 3.0;  // path-loss exponent, > 2
  double sigma = 1.0;  // SINR threshold
  double xi = 1e-4;    // ambient noise
  double r = 1.0;      // shortest link length
  double R = 5.0;      // longest link length
};

enum class PowerMode { Linear, Uniform };

struct PowerModel {
  PowerMode mode = PowerMode::Uniform;
  double c = 1.0;     // Linear only
  double beta = 1.0;  // Linear only, 0 < beta < kappa
  double P = 1.0;     // maximum (Linear) or common (Uniform) power

  static PowerModel linear(double c, double beta, double P) { return {PowerMode::Linear, c, beta, P}; }
  static PowerModel uniform(double P) { return {PowerMode::Uniform, 1.0, 1.0, P}; }
};

// Verdicts against sigma (or an affectness bound) accept values within this
// relative slack of the threshold.
inline constexpr double kFeasibilitySlack = 1e-9;

inline void validate(const SINRParams& sp, const PowerModel& pm) {
  auto fail = [](const std::string& m) { throw Error(ErrorCode::InvalidParams, m); };
  if (!(sp.kappa > 2)) fail("path-loss exponent kappa must exceed 2");
  if (!(sp.sigma > 0)) fail("SINR threshold sigma must be positive");
  if (!(sp.eta > 0)) fail("reference loss eta must be positive");
  if (!(sp.xi >= 0)) fail("ambient noise xi must be nonnegative");
  if (!(sp.r > 0) || !(sp.R >= sp.r)) fail("link length bounds require 0 < r <= R");
  if (sp.eta * std::pow(sp.r, -sp.kappa) > 1 + 1e-12) fail("path gain eta*r^-kappa exceeds 1");
  if (!(pm.P > 0)) fail("power P must be positive");
  if (pm.mode == PowerMode::Linear) {
    if (!(pm.c > 0)) fail("linear power coefficient c must be positive");
    if (!(pm.beta > 0) || !(pm.beta < sp.kappa)) fail("linear exponent requires 0 < beta < kappa");
    if (pm.c * std::pow(sp.R, pm.beta) > pm.P * (1 + 1e-12)) fail("linear power c*R^beta exceeds P");
  }
  if (sp.xi > 0) {
    const double radius = std::pow(sp.eta * pm.P / (sp.sigma * sp.xi), 1.0 / sp.kappa);
    if (sp.R > radius) fail("R exceeds the maximum transmission radius");
  }
}

template <typename Scalar>
Scalar transmit_power(Scalar length, const PowerModel& pm) {
  if (pm.mode == PowerMode::Uniform) return static_cast<Scalar>(pm.P);
  return static_cast<Scalar>(pm.c) * std::pow(length, static_cast<Scalar>(pm.beta));
}

template <typename Scalar>
Scalar transmit_power(const Link<Scalar>& l, const PowerModel& pm) {
  return transmit_power(l.length, pm);
}

// Received power at distance `dist` from a sender transmitting at `power`.
template <typename Scalar>
Scalar received_power(Scalar power, Scalar dist, const SINRParams& sp) {
  return power * static_cast<Scalar>(sp.eta) * std::pow(dist, -static_cast<Scalar>(sp.kappa));
}

// Maximum interference a link can bear: signal / sigma - xi.
template <typename Scalar>
Scalar max_tolerable_interference(Scalar length, const PowerModel& pm, const SINRParams& sp) {
  const Scalar signal = received_power(transmit_power(length, pm), length, sp);
  return signal / static_cast<Scalar>(sp.sigma) - static_cast<Scalar>(sp.xi);
}

// I_max: the tolerable interference of a length-R link. Throws when it is not
// positive, i.e. R lies at or beyond the maximum transmission radius.
template <typename Scalar = double>
Scalar network_imax(const SINRParams& sp, const PowerModel& pm) {
  const Scalar v = max_tolerable_interference(static_cast<Scalar>(sp.R), pm, sp);
  if (!(v > 0)) {
    throw Error(ErrorCode::NonSchedulableLink, "I_max <= 0: length-R links cannot meet sigma");
  }
  return v;
}

// Cached pairwise gains of a topology under one power assignment.
//
// gain(i, j) is the power received at the receiver of link i from the sender
// of link j; the diagonal is zero. Every link must be schedulable alone, which
// is checked here (construction error otherwise).
template <typename Scalar>
class InterferenceModel {
 public:
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  InterferenceModel(Network<Scalar> net, const SINRParams& sp, const PowerModel& pm)
      : net_(std::move(net)), sp_(sp), pm_(pm) {
    const auto n = static_cast<Eigen::Index>(net_.num_links());
    power_.resize(n);
    signal_.resize(n);
    noise_scale_.resize(n);
    imax_.resize(n);
    gain_.setZero(n, n);
    const Scalar sigma = static_cast<Scalar>(sp_.sigma);
    const Scalar xi = static_cast<Scalar>(sp_.xi);
    for (const Link<Scalar>& l : net_.links()) {
      power_(l.id) = transmit_power(l, pm_);
      signal_(l.id) = received_power(power_(l.id), l.length, sp_);
      imax_(l.id) = signal_(l.id) / sigma - xi;
      if (!(signal_(l.id) > sigma * xi)) {
        throw Error(ErrorCode::NonSchedulableLink,
                    "link " + std::to_string(l.id) + " cannot meet sigma even without interference");
      }
      noise_scale_(l.id) = sigma / (1 - sigma * xi / signal_(l.id));
    }
    for (const Link<Scalar>& victim : net_.links()) {
      for (const Link<Scalar>& src : net_.links()) {
        if (src.id == victim.id) continue;
        const Scalar dist = (victim.receiver - src.sender).norm();
        gain_(victim.id, src.id) = received_power(power_(src.id), dist, sp_);
      }
    }
  }

  const Network<Scalar>& network() const { return net_; }
  const SINRParams& sinr() const { return sp_; }
  const PowerModel& power_model() const { return pm_; }
  std::size_t num_links() const { return net_.num_links(); }

  Scalar gain(LinkId victim, LinkId source) const { return gain_(victim, source); }
  Scalar power(LinkId l) const { return power_(l); }
  Scalar signal(LinkId l) const { return signal_(l); }
  // c_l = sigma / (1 - sigma xi / signal_l)
  Scalar noise_scale(LinkId l) const { return noise_scale_(l); }
  Scalar imax(LinkId l) const { return imax_(l); }

  const Matrix& gains() const { return gain_; }

 private:
  Network<Scalar> net_;
  SINRParams sp_;
  PowerModel pm_;
  Vector power_;
  Vector signal_;
  Vector noise_scale_;
  Vector imax_;
  Matrix gain_;
};

using InterferenceModeld = InterferenceModel<double>;

// Cumulative interference at l's receiver from `others`, summed in ascending
// link-id order. A member equal to l contributes nothing.
template <typename Scalar>
Scalar interference_at(const InterferenceModel<Scalar>& m, LinkId l, const Schedule& others) {
  Scalar sum = 0;
  for (LinkId j : others) sum += m.gain(l, j);
  return sum;
}

template <typename Scalar>
Scalar sinr_of(const InterferenceModel<Scalar>& m, LinkId l, const Schedule& others) {
  return m.signal(l) / (interference_at(m, l, others) + static_cast<Scalar>(m.sinr().xi));
}

template <typename Scalar>
bool meets_sigma(const InterferenceModel<Scalar>& m, LinkId l, Scalar interference) {
  const Scalar slack = static_cast<Scalar>(1 - kFeasibilitySlack);
  return m.signal(l) >= static_cast<Scalar>(m.sinr().sigma) * slack *
                            (interference + static_cast<Scalar>(m.sinr().xi));
}

template <typename Scalar>
bool is_feasible(const InterferenceModel<Scalar>& m, const Schedule& s) {
  for (LinkId l : s) {
    if (!meets_sigma(m, l, interference_at(m, l, s.without(l)))) return false;
  }
  return true;
}

// r_{l*}(l): interference of l* on l relative to l's signal; zero for l* = l.
template <typename Scalar>
Scalar relative_interference(const InterferenceModel<Scalar>& m, LinkId l_star, LinkId l) {
  if (l_star == l) return 0;
  return m.gain(l, l_star) / m.signal(l);
}

// a_S(l) = c_l * sum_{l* in S} r_{l*}(l), evaluated as c_l * I_S(l) / signal_l.
template <typename Scalar>
Scalar affectness(const InterferenceModel<Scalar>& m, LinkId l, const Schedule& s) {
  return m.noise_scale(l) * interference_at(m, l, s) / m.signal(l);
}

template <typename Scalar>
bool within_affectness(Scalar value, double bound) {
  return value <= static_cast<Scalar>(bound * (1 + kFeasibilitySlack));
}

template <typename Scalar>
bool is_p_signal(const InterferenceModel<Scalar>& m, const Schedule& s, double p) {
  if (!(p >= 1)) throw Error(ErrorCode::InvalidParams, "p-signal requires p >= 1");
  for (LinkId l : s) {
    if (!within_affectness(affectness(m, l, s.without(l)), 1.0 / p)) return false;
  }
  return true;
}

// Incrementally maintained active set: per-link interference from the current
// members, so admission tests cost O(|members|).
template <typename Scalar>
class ActiveSet {
 public:
  explicit ActiveSet(const InterferenceModel<Scalar>& m)
      : model_(&m), interference_(Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::Zero(
                        static_cast<Eigen::Index>(m.num_links()))) {}

  // Would the set stay SINR-feasible with `c` added?
  bool admits(LinkId c) const {
    if (!meets_sigma(*model_, c, interference_(c))) return false;
    for (LinkId i : members_) {
      if (!meets_sigma(*model_, i, interference_(i) + model_->gain(i, c))) return false;
    }
    return true;
  }

  // Would every member's affectness (within the set) stay <= bound?
  bool admits_within(LinkId c, double bound) const {
    if (!within_affectness(affectness_with(c, c), bound)) return false;
    for (LinkId i : members_) {
      if (!within_affectness(affectness_with(i, c), bound)) return false;
    }
    return true;
  }

  void insert(LinkId c) {
    members_.insert(c);
    for (Eigen::Index i = 0; i < interference_.size(); ++i) {
      if (static_cast<LinkId>(i) != c) interference_(i) += model_->gain(static_cast<LinkId>(i), c);
    }
  }

  const Schedule& members() const { return members_; }

 private:
  Scalar affectness_with(LinkId i, LinkId c) const {
    const Scalar extra = (i == c) ? Scalar(0) : model_->gain(i, c);
    return model_->noise_scale(i) * (interference_(i) + extra) / model_->signal(i);
  }

  const InterferenceModel<Scalar>* model_;
  Schedule members_;
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> interference_;
};

// First-fit refinement of a p-signal set into p'-signal bins. Links are placed
// heaviest first (ties by id); a link joins the first bin that stays a
// p'-signal set with it, or opens a new bin.
template <typename Scalar>
std::vector<Schedule> refine_to_p_signal(const InterferenceModel<Scalar>& m, const Schedule& s, double p,
                                         double p_prime, const std::vector<Weight>& weights = {}) {
  if (!(p >= 1) || !(p_prime > p)) throw Error(ErrorCode::InvalidParams, "refinement requires 1 <= p < p'");
  std::vector<LinkId> order(s.begin(), s.end());
  auto weight = [&](LinkId l) { return l < weights.size() ? weights[l] : Weight{0}; };
  std::stable_sort(order.begin(), order.end(),
                   [&](LinkId x, LinkId y) { return weight(x) > weight(y); });
  const double bound = 1.0 / p_prime;
  std::vector<ActiveSet<Scalar>> bins;
  for (LinkId l : order) {
    bool placed = false;
    for (ActiveSet<Scalar>& bin : bins) {
      if (bin.admits_within(l, bound)) {
        bin.insert(l);
        placed = true;
        break;
      }
    }
    if (!placed) {
      bins.emplace_back(m);
      bins.back().insert(l);
    }
  }
  std::vector<Schedule> out;
  out.reserve(bins.size());
  for (const auto& bin : bins) out.push_back(bin.members());
  return out;
}

}  // namespace sinr
