#pragma once

#include <cstdint>
#include <vector>

#include "sinr/interference.hpp"
#include "sinr/types.hpp"

namespace sinr {

// Links of one sub-square with their queue weights. A subset is admissible
// when every member's affectness from the other members is <= threshold.
struct LocalInstance {
  std::vector<LinkId> links;
  std::vector<Weight> weights;  // aligned with `links`
  double threshold = 0.5;       // 1 - epsilon

  static LocalInstance make(std::vector<LinkId> links, std::vector<Weight> weights, double threshold);

  Weight weight_of(LinkId id) const;
};

struct WeightedSet {
  Schedule links;
  Weight weight = 0;
};

// Which power of r appears in the noise term of the linear-power size bound.
enum class NoiseExponent {
  KappaMinusBeta,  // r^(kappa - beta), as derived in the bound's proof
  BetaMinusKappa,  // r^(beta - kappa), as printed in the bound's statement
};

inline constexpr std::size_t kDefaultEnumerationCap = 20;
inline constexpr std::size_t kOracleCap = 15;

// Upper bound on the size of an admissible local set in a J x J-cell square,
// linear power.
std::int64_t optsize_bound_linear(const SINRParams& sp, const PowerModel& pm, int J, double epsilon,
                                  NoiseExponent form = NoiseExponent::KappaMinusBeta);

// Margin M (cells) keeping outside interference <= epsilon * I_max, linear power.
int separation_margin_linear(const SINRParams& sp, const PowerModel& pm, std::int64_t opt_ub, double epsilon);
int separation_margin_linear(const SINRParams& sp, const PowerModel& pm, std::int64_t opt_ub, double epsilon,
                             double imax);

// Size bound for the shortest-first local solver, uniform power. Throws
// Degenerate when the bound is zero (r == R).
std::int64_t optsize_bound_uniform(const SINRParams& sp, int J);

int separation_margin_uniform(const SINRParams& sp, double P, std::int64_t x_ub, double epsilon);
int separation_margin_uniform(const SINRParams& sp, double P, std::int64_t x_ub, double epsilon, double imax);

// Exact local MWISL by branch-and-bound enumeration. Ties go to the
// lexicographically smallest id set. Throws InstanceTooLarge above `cap`.
Schedule enumerate_mwisl(const InterferenceModeld& m, const LocalInstance& inst,
                         std::size_t cap = kDefaultEnumerationCap);

// Scans links by nondecreasing length (ties by id) and keeps each one that
// leaves every chosen link's affectness <= threshold.
Schedule shortest_first_isl(const InterferenceModeld& m, const std::vector<LinkId>& links, double threshold);

// Weight-class heuristic: drop light links, split the rest into doubling
// weight classes, solve each with shortest_first_isl, keep the heaviest.
Schedule weight_class_mwisl(const InterferenceModeld& m, const LocalInstance& inst);

// Exhaustive reference solver over all 2^n subsets.
WeightedSet brute_force_oracle(const InterferenceModeld& m, const LocalInstance& inst);

// Doubling weight classes used by weight_class_mwisl (exposed for testing).
// Returns the surviving links grouped by class, lowest class first.
std::vector<std::vector<LinkId>> weight_classes(const LocalInstance& inst);

}  // namespace sinr
