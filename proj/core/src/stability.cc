#include "daycare/stability.h"

#include <algorithm>
#include <string>

#include "daycare/choice.h"
#include "daycare/error.h"

namespace daycare {
namespace {

// Children seated at each real daycare.
std::vector<std::vector<int>> SeatsByDaycare(const Instance& instance,
                                             const Matching& matching) {
  std::vector<std::vector<int>> seats(instance.num_daycares());
  for (int c = 0; c < instance.num_children(); ++c) {
    const int d = matching.daycare_of(c);
    if (d != kDummy) seats[d].push_back(c);
  }
  return seats;
}

BlockingVerdict EvaluateCoalition(const Instance& instance,
                                  const Matching& matching,
                                  const std::vector<std::vector<int>>& seats,
                                  int family, Position position,
                                  const BlockingOptions& options) {
  BlockingVerdict verdict;
  verdict.family = family;
  verdict.position = position;

  const Position current = matching.position_of(family);
  if (current != kUnmatched && current <= position) return verdict;

  const Family& fam = instance.family(family);
  const auto& tuple = fam.preferences[position];
  std::vector<int> displaced;
  std::vector<int> visited;
  for (int d : tuple) {
    if (d == kDummy) continue;
    if (std::find(visited.begin(), visited.end(), d) != visited.end()) continue;
    visited.push_back(d);

    std::vector<int> applicants;
    for (size_t i = 0; i < tuple.size(); ++i) {
      if (tuple[i] == d) applicants.push_back(fam.children[i]);
    }
    std::vector<int> occupants;
    for (int c : seats[d]) {
      if (options.occupancy == Occupancy::kLiteral ||
          instance.child(c).family != family) {
        occupants.push_back(c);
      }
    }
    std::vector<int> pool = occupants;
    pool.insert(pool.end(), applicants.begin(), applicants.end());
    const ChoiceResult choice = Choose(instance, d, pool, occupants);
    auto chosen = [&](int c) {
      return std::find(choice.chosen.begin(), choice.chosen.end(), c) !=
             choice.chosen.end();
    };
    if (!std::all_of(applicants.begin(), applicants.end(), chosen)) {
      return verdict;
    }
    for (int c : occupants) {
      if (!chosen(c)) displaced.push_back(c);
    }
  }
  std::sort(displaced.begin(), displaced.end());
  displaced.erase(std::unique(displaced.begin(), displaced.end()),
                  displaced.end());
  verdict.blocks = true;
  verdict.kind =
      displaced.empty() ? BlockKind::kWaste : BlockKind::kJustifiedEnvy;
  verdict.displaced = std::move(displaced);
  return verdict;
}

}  // namespace

FeasibilityReport CheckFeasibility(const Instance& instance,
                                   const Matching& matching) {
  FeasibilityReport report;
  std::vector<std::vector<int>> counts(instance.num_daycares());
  for (int d = 0; d < instance.num_daycares(); ++d) {
    counts[d].assign(instance.daycare(d).groups.size(), 0);
  }
  for (int c = 0; c < instance.num_children(); ++c) {
    const int d = matching.daycare_of(c);
    if (d != kDummy) ++counts[d][instance.GroupOf(d, c)];
  }
  for (int d = 0; d < instance.num_daycares(); ++d) {
    const Daycare& daycare = instance.daycare(d);
    for (size_t g = 0; g < daycare.groups.size(); ++g) {
      GroupOccupancy entry{d, static_cast<int>(g), counts[d][g],
                           daycare.groups[g].quota};
      report.occupancy.push_back(entry);
      if (entry.count > entry.quota) {
        report.feasible = false;
        report.violations.push_back(entry);
      }
    }
  }
  return report;
}

RationalityReport CheckIndividualRationality(const Instance& instance,
                                             const Matching& matching) {
  RationalityReport report;
  for (int f = 0; f < instance.num_families(); ++f) {
    if (instance.family(f).has_initial &&
        matching.position_of(f) == kUnmatched) {
      report.rational = false;
      report.violating_families.push_back(f);
    }
  }
  return report;
}

const char* BlockKindName(BlockKind kind) {
  switch (kind) {
    case BlockKind::kJustifiedEnvy:
      return "justified-envy";
    case BlockKind::kWaste:
      return "waste";
    case BlockKind::kNone:
      break;
  }
  return "none";
}

BlockingVerdict Blocks(const Instance& instance, const Matching& matching,
                       int family, Position position,
                       const BlockingOptions& options) {
  if (family < 0 || family >= instance.num_families()) {
    throw InvalidArgument("family index out of range");
  }
  if (position < 0 || position >= instance.family(family).num_positions()) {
    throw InvalidArgument("family " + instance.family(family).id +
                          ": position " + std::to_string(position + 1) +
                          " out of range");
  }
  return EvaluateCoalition(instance, matching,
                           SeatsByDaycare(instance, matching), family, position,
                           options);
}

std::vector<BlockingVerdict> EnumerateBlocking(const Instance& instance,
                                               const Matching& matching,
                                               const BlockingOptions& options) {
  const auto seats = SeatsByDaycare(instance, matching);
  std::vector<BlockingVerdict> blocking;
  for (int f = 0; f < instance.num_families(); ++f) {
    const Position current = matching.position_of(f);
    const int limit =
        current == kUnmatched ? instance.family(f).num_positions() : current;
    for (Position p = 0; p < limit; ++p) {
      BlockingVerdict verdict =
          EvaluateCoalition(instance, matching, seats, f, p, options);
      if (verdict.blocks) blocking.push_back(std::move(verdict));
    }
  }
  return blocking;
}

bool IsStable(const Instance& instance, const Matching& matching,
              const BlockingOptions& options) {
  return EnumerateBlocking(instance, matching, options).empty();
}

bool ParetoDominates(const Instance& instance, const Matching& a,
                     const Matching& b) {
  bool strict = false;
  for (int f = 0; f < instance.num_families(); ++f) {
    // Unmatched ranks below every listed tuple.
    const int worst = instance.family(f).num_positions();
    const int pa = a.position_of(f) == kUnmatched ? worst : a.position_of(f);
    const int pb = b.position_of(f) == kUnmatched ? worst : b.position_of(f);
    if (pa > pb) return false;
    if (pa < pb) strict = true;
  }
  return strict;
}

std::uint64_t ParetoEnumerationSize(const Instance& instance) {
  std::uint64_t size = 1;
  constexpr std::uint64_t kCap = std::uint64_t{1} << 62;
  for (const Family& f : instance.families()) {
    size *= static_cast<std::uint64_t>(f.num_positions() + 1);
    if (size > kCap) return kCap;
  }
  return size;
}

bool BruteForceParetoOptimal(const Instance& instance, const Matching& matching,
                             std::uint64_t limit) {
  const std::uint64_t size = ParetoEnumerationSize(instance);
  if (size > limit) throw LimitExceeded(size, limit);

  const int num_families = instance.num_families();
  std::vector<std::vector<int>> load(instance.num_daycares());
  for (int d = 0; d < instance.num_daycares(); ++d) {
    load[d].assign(instance.daycare(d).groups.size(), 0);
  }
  // Only weakly better positions can take part in a dominating matching.
  auto place = [&](int f, Position p, int delta) {
    if (p == kUnmatched) return true;
    const Family& fam = instance.family(f);
    bool ok = true;
    for (size_t i = 0; i < fam.children.size(); ++i) {
      const int d = fam.preferences[p][i];
      if (d == kDummy) continue;
      int& slot = load[d][instance.GroupOf(d, fam.children[i])];
      slot += delta;
      if (slot > instance.daycare(d)
                     .groups[instance.GroupOf(d, fam.children[i])]
                     .quota) {
        ok = false;
      }
    }
    return ok;
  };

  auto search = [&](auto&& self, int f, bool strict) -> bool {
    if (f == num_families) return strict;
    const Position current = matching.position_of(f);
    const int last = current == kUnmatched
                         ? instance.family(f).num_positions() - 1
                         : current;
    for (Position p = 0; p <= last; ++p) {
      const bool ok = place(f, p, +1);
      const bool found = ok && self(self, f + 1, strict || p != current);
      place(f, p, -1);
      if (found) return true;
    }
    if (current == kUnmatched) return self(self, f + 1, strict);
    return false;
  };
  return !search(search, 0, false);
}

}  // namespace daycare
