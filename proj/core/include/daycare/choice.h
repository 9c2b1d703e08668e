#ifndef DAYCARE_CHOICE_H_
#define DAYCARE_CHOICE_H_

#include <span>
#include <vector>

#include "daycare/model.h"

namespace daycare {

struct ChoiceResult {
  std::vector<int> chosen;            // in acceptance order
  std::vector<int> rejected;          // in processing order
  std::vector<int> per_group_counts;  // indexed by group at the daycare
};

// Ch_d: scans the applicants from highest to lowest priority and accepts a
// child iff its grade group still has room under the transferable quota.
// Within a tie class children are scanned in instance order. Duplicate
// applicants are ignored. Throws InvalidArgument when an applicant is not
// ranked by the daycare or `daycare` is not a real daycare.
ChoiceResult Choose(const Instance& instance, int daycare,
                    std::span<const int> applicants);

// Same as Choose() but, within a tie class, children in `favored` are
// scanned before the others. Used by the blocking checker so that tied
// incumbents are never displaced.
ChoiceResult Choose(const Instance& instance, int daycare,
                    std::span<const int> applicants,
                    std::span<const int> favored);

}  // namespace daycare

#endif  // DAYCARE_CHOICE_H_
