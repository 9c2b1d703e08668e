#ifndef DAYCARE_DOCUMENT_H_
#define DAYCARE_DOCUMENT_H_

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace daycare {

// Reserved identifier of the dummy daycare (the "unmatched" option).
inline constexpr char kDummyId[] = "d0";

inline constexpr int kSchemaVersion = 1;

enum class PriorityMode { kStrict, kIndifference };

// String-keyed market description as it appears on disk. Nothing here is
// validated beyond what the parser checks; see ValidateInstance().
struct InstanceDocument {
  struct ChildEntry {
    std::string id;
    std::string grade;

    bool operator==(const ChildEntry&) const = default;
  };

  struct DaycareEntry {
    std::string id;
    // Grades absent from the map have quota 0.
    std::map<std::string, int> quotas;
    // Empty means one singleton group per grade.
    std::vector<std::vector<std::string>> grade_groups;
    // Tie classes, highest priority first. Strict priorities use singletons.
    std::vector<std::vector<std::string>> priority;

    bool operator==(const DaycareEntry&) const = default;
  };

  struct FamilyEntry {
    std::string id;
    std::vector<ChildEntry> children;
    // Aligned with `children`; empty means every child is a new applicant.
    std::vector<std::string> initial;
    std::vector<std::vector<std::string>> preferences;

    bool operator==(const FamilyEntry&) const = default;
  };

  int schema_version = kSchemaVersion;
  PriorityMode mode = PriorityMode::kStrict;
  std::vector<std::string> grades;
  std::vector<DaycareEntry> daycares;
  std::vector<FamilyEntry> families;

  bool operator==(const InstanceDocument&) const = default;
};

}  // namespace daycare

#endif  // DAYCARE_DOCUMENT_H_
