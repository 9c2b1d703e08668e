#include "daycare/model.h"

#include <algorithm>
#include <numeric>
#include <utility>

#include "daycare/error.h"

namespace daycare {
namespace {

int Lookup(const std::unordered_map<std::string, int>& index,
           std::string_view id) {
  auto it = index.find(std::string(id));
  return it == index.end() ? -1 : it->second;
}

}  // namespace

int Instance::ChildIndex(std::string_view id) const {
  return Lookup(child_index_, id);
}

int Instance::FamilyIndex(std::string_view id) const {
  return Lookup(family_index_, id);
}

int Instance::DaycareIndex(std::string_view id) const {
  if (id == kDummyId) return kDummy;
  auto it = daycare_index_.find(std::string(id));
  return it == daycare_index_.end() ? kUnknownDaycare : it->second;
}

int Instance::GradeIndex(std::string_view id) const {
  return Lookup(grade_index_, id);
}

const std::string& Instance::DaycareName(int d) const {
  static const std::string kDummyName(kDummyId);
  return d == kDummy ? kDummyName : daycares_[d].id;
}

int Instance::num_positions() const {
  int total = 0;
  for (const Family& f : families_) total += f.num_positions();
  return total;
}

std::vector<std::vector<int>> ProjectPreferences(const Family& family) {
  std::vector<std::vector<int>> projected(family.children.size());
  for (auto& list : projected) list.reserve(family.preferences.size());
  for (const auto& tuple : family.preferences) {
    for (size_t i = 0; i < projected.size(); ++i) {
      projected[i].push_back(tuple[i]);
    }
  }
  return projected;
}

GroupLookup GradeGroupOf(const Daycare& daycare, int grade) {
  if (grade < 0 || grade >= static_cast<int>(daycare.group_of_grade.size())) {
    throw InvalidArgument("unknown grade index " + std::to_string(grade) +
                          " at daycare " + daycare.id);
  }
  const int g = daycare.group_of_grade[grade];
  const GradeGroup& group = daycare.groups[g];
  return {g, group.grades, group.quota};
}

Matching Matching::FromPositions(const Instance& instance,
                                 std::vector<Position> positions) {
  if (static_cast<int>(positions.size()) != instance.num_families()) {
    throw MatchingError("expected " + std::to_string(instance.num_families()) +
                        " family positions, got " +
                        std::to_string(positions.size()));
  }
  Matching m;
  m.assignment_.assign(instance.num_children(), kDummy);
  for (int f = 0; f < instance.num_families(); ++f) {
    const Family& family = instance.family(f);
    const Position p = positions[f];
    if (p == kUnmatched) continue;
    if (p < 0 || p >= family.num_positions()) {
      throw MatchingError("family " + family.id + ": position " +
                          std::to_string(p + 1) + " out of range");
    }
    const auto& tuple = family.preferences[p];
    for (size_t i = 0; i < family.children.size(); ++i) {
      m.assignment_[family.children[i]] = tuple[i];
    }
  }
  m.positions_ = std::move(positions);
  return m;
}

Matching Matching::FromAssignment(const Instance& instance,
                                  std::vector<int> assignment) {
  if (static_cast<int>(assignment.size()) != instance.num_children()) {
    throw MatchingError("expected " + std::to_string(instance.num_children()) +
                        " child assignments, got " +
                        std::to_string(assignment.size()));
  }
  Matching m;
  m.positions_.assign(instance.num_families(), kUnmatched);
  for (int f = 0; f < instance.num_families(); ++f) {
    const Family& family = instance.family(f);
    std::vector<int> tuple;
    tuple.reserve(family.children.size());
    for (int c : family.children) {
      const int d = assignment[c];
      if (d != kDummy && (d < 0 || d >= instance.num_daycares())) {
        throw MatchingError("child " + instance.child(c).id +
                            ": daycare index out of range");
      }
      tuple.push_back(d);
    }
    const bool all_dummy = std::all_of(tuple.begin(), tuple.end(),
                                       [](int d) { return d == kDummy; });
    if (all_dummy) continue;
    auto it =
        std::find(family.preferences.begin(), family.preferences.end(), tuple);
    if (it == family.preferences.end()) {
      throw MatchingError("family " + family.id +
                          ": assignment is not a listed preference tuple");
    }
    m.positions_[f] = static_cast<Position>(it - family.preferences.begin());
  }
  m.assignment_ = std::move(assignment);
  return m;
}

Matching Matching::AllUnmatched(const Instance& instance) {
  return FromPositions(
      instance, std::vector<Position>(instance.num_families(), kUnmatched));
}

Matching Matching::Initial(const Instance& instance) {
  std::vector<Position> positions(instance.num_families(), kUnmatched);
  for (int f = 0; f < instance.num_families(); ++f) {
    const Family& family = instance.family(f);
    if (family.has_initial) positions[f] = family.num_positions() - 1;
  }
  return FromPositions(instance, std::move(positions));
}

int Matching::matched_children() const {
  return static_cast<int>(std::count_if(assignment_.begin(), assignment_.end(),
                                        [](int d) { return d != kDummy; }));
}

}  // namespace daycare
