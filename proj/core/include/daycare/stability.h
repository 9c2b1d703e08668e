#ifndef DAYCARE_STABILITY_H_
#define DAYCARE_STABILITY_H_

#include <cstdint>
#include <vector>

#include "daycare/model.h"

namespace daycare {

struct GroupOccupancy {
  int daycare = 0;
  int group = 0;
  int count = 0;
  int quota = 0;
};

struct FeasibilityReport {
  bool feasible = true;
  std::vector<GroupOccupancy> occupancy;   // every (daycare, group)
  std::vector<GroupOccupancy> violations;  // count > quota
};

// Per-(daycare, group) occupancy against the transferable quotas.
FeasibilityReport CheckFeasibility(const Instance& instance,
                                   const Matching& matching);

inline bool IsFeasible(const Instance& instance, const Matching& matching) {
  return CheckFeasibility(instance, matching).feasible;
}

struct RationalityReport {
  bool rational = true;
  std::vector<int> violating_families;
};

// A family with an initial enrollment is rational iff it holds some listed
// tuple: its initial tuple is the last one, so every listed tuple is weakly
// preferred to it.
RationalityReport CheckIndividualRationality(const Instance& instance,
                                             const Matching& matching);

inline bool IsIndividuallyRational(const Instance& instance,
                                   const Matching& matching) {
  return CheckIndividualRationality(instance, matching).rational;
}

enum class BlockKind { kNone, kJustifiedEnvy, kWaste };

const char* BlockKindName(BlockKind kind);

struct BlockingVerdict {
  int family = 0;
  Position position = 0;
  bool blocks = false;
  std::vector<int> displaced;  // Re(f, p), sorted by child index
  BlockKind kind = BlockKind::kNone;
};

// Which children occupy a daycare when a family's deviation is tested.
enum class Occupancy {
  // The deviating family's own children leave their current seats first.
  kVacateOnMove,
  // The family's current seats stay occupied (literal reading of the
  // definition; stricter for families that move within a daycare).
  kLiteral,
};

struct BlockingOptions {
  Occupancy occupancy = Occupancy::kVacateOnMove;
};

// Whether family `family` and the daycares of its tuple `position` form a
// blocking coalition against `matching`.
BlockingVerdict Blocks(const Instance& instance, const Matching& matching,
                       int family, Position position,
                       const BlockingOptions& options = {});

// Every blocking (family, position) pair, in family then position order.
std::vector<BlockingVerdict> EnumerateBlocking(
    const Instance& instance, const Matching& matching,
    const BlockingOptions& options = {});

bool IsStable(const Instance& instance, const Matching& matching,
              const BlockingOptions& options = {});

// Every family weakly prefers `a` to `b` (unmatched is worst) and at least
// one strictly.
bool ParetoDominates(const Instance& instance, const Matching& a,
                     const Matching& b);

inline constexpr std::uint64_t kDefaultEnumerationLimit = 1'000'000;

// Product over families of (number of tuples + 1).
std::uint64_t ParetoEnumerationSize(const Instance& instance);

// Exhaustively searches for a feasible matching that Pareto-dominates
// `matching`. Throws LimitExceeded when ParetoEnumerationSize() > limit.
bool BruteForceParetoOptimal(const Instance& instance, const Matching& matching,
                             std::uint64_t limit = kDefaultEnumerationLimit);

}  // namespace daycare

#endif  // DAYCARE_STABILITY_H_
