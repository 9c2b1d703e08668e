#ifndef DAYCARE_MODEL_H_
#define DAYCARE_MODEL_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "daycare/document.h"

namespace daycare {

// Daycare index of the dummy daycare. Real daycares are 0..num_daycares()-1.
inline constexpr int kDummy = -1;
// Returned by Instance::DaycareIndex() for identifiers that name no daycare.
inline constexpr int kUnknownDaycare = -2;

// 0-based index into a family's preference list. Documents and reports use
// 1-based positions; the library uses 0-based positions throughout.
using Position = int;
inline constexpr Position kUnmatched = -1;

struct Child {
  std::string id;
  int grade = 0;
  int family = 0;
  int initial_daycare = kDummy;
};

struct Family {
  std::string id;
  std::vector<int> children;
  // Each tuple holds one daycare index (or kDummy) per child, aligned with
  // `children`.
  std::vector<std::vector<int>> preferences;
  bool has_initial = false;

  int num_positions() const { return static_cast<int>(preferences.size()); }
};

struct GradeGroup {
  std::vector<int> grades;
  int quota = 0;  // transferable quota: sum of the member grades' quotas
};

struct Daycare {
  std::string id;
  std::vector<int> quotas;  // indexed by grade
  std::vector<GradeGroup> groups;
  std::vector<int> group_of_grade;
  // Tie classes of child indices, best first; singletons in strict mode.
  std::vector<std::vector<int>> priority;
  // Tie-class index per child; -1 for children absent from the ranking.
  std::vector<int> rank;
};

// A validated market. Immutable; build one with ValidateInstance().
class Instance {
 public:
  Instance() = default;

  PriorityMode mode() const { return mode_; }
  std::span<const std::string> grades() const { return grades_; }
  std::span<const Child> children() const { return children_; }
  std::span<const Family> families() const { return families_; }
  std::span<const Daycare> daycares() const { return daycares_; }

  int num_grades() const { return static_cast<int>(grades_.size()); }
  int num_children() const { return static_cast<int>(children_.size()); }
  int num_families() const { return static_cast<int>(families_.size()); }
  int num_daycares() const { return static_cast<int>(daycares_.size()); }

  const Child& child(int c) const { return children_[c]; }
  const Family& family(int f) const { return families_[f]; }
  const Daycare& daycare(int d) const { return daycares_[d]; }

  // Lookups by identifier; -1 when absent. DaycareIndex() maps "d0" to
  // kDummy and unknown identifiers to kUnknownDaycare.
  int ChildIndex(std::string_view id) const;
  int FamilyIndex(std::string_view id) const;
  int DaycareIndex(std::string_view id) const;
  int GradeIndex(std::string_view id) const;

  // Identifier of a daycare index, including the dummy.
  const std::string& DaycareName(int d) const;

  // Group index of the child's grade at daycare d.
  int GroupOf(int d, int child) const {
    return daycares_[d].group_of_grade[children_[child].grade];
  }

  // True when child a has strictly higher priority than b at daycare d.
  bool Prefers(int d, int a, int b) const {
    return daycares_[d].rank[a] < daycares_[d].rank[b];
  }

  // Total number of (family, position) pairs.
  int num_positions() const;

 private:
  friend class InstanceBuilder;

  PriorityMode mode_ = PriorityMode::kStrict;
  std::vector<std::string> grades_;
  std::vector<Child> children_;
  std::vector<Family> families_;
  std::vector<Daycare> daycares_;
  std::unordered_map<std::string, int> child_index_;
  std::unordered_map<std::string, int> family_index_;
  std::unordered_map<std::string, int> daycare_index_;
  std::unordered_map<std::string, int> grade_index_;
};

// Projected preference list of each child of `family`: entry i holds the
// i-th coordinate of every tuple, in preference order.
std::vector<std::vector<int>> ProjectPreferences(const Family& family);

struct GroupLookup {
  int group = 0;
  std::span<const int> grades;
  int quota = 0;
};

// Grade group of `grade` at `daycare` and its transferable quota. Throws
// InvalidArgument for an unknown grade index.
GroupLookup GradeGroupOf(const Daycare& daycare, int grade);

// A total assignment of children to daycares, together with the matched
// position of every family.
class Matching {
 public:
  Matching() = default;

  // Every family at the given position (kUnmatched allowed). Throws
  // MatchingError on out-of-range positions.
  static Matching FromPositions(const Instance& instance,
                                std::vector<Position> positions);

  // Derives positions from a per-child assignment. Throws MatchingError when
  // a family's assignment is neither a listed tuple nor all-dummy.
  static Matching FromAssignment(const Instance& instance,
                                 std::vector<int> assignment);

  static Matching AllUnmatched(const Instance& instance);

  // Every child at its initial daycare.
  static Matching Initial(const Instance& instance);

  int daycare_of(int child) const { return assignment_[child]; }
  Position position_of(int family) const { return positions_[family]; }
  std::span<const int> assignment() const { return assignment_; }
  std::span<const Position> positions() const { return positions_; }

  // Children not at the dummy daycare.
  int matched_children() const;

  bool operator==(const Matching&) const = default;

 private:
  std::vector<int> assignment_;
  std::vector<Position> positions_;
};

}  // namespace daycare

#endif  // DAYCARE_MODEL_H_
