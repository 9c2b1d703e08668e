#include "daycare/choice.h"

#include <algorithm>
#include <string>
#include <tuple>

#include "daycare/error.h"

namespace daycare {

ChoiceResult Choose(const Instance& instance, int daycare,
                    std::span<const int> applicants) {
  return Choose(instance, daycare, applicants, {});
}

ChoiceResult Choose(const Instance& instance, int daycare,
                    std::span<const int> applicants,
                    std::span<const int> favored) {
  if (daycare < 0 || daycare >= instance.num_daycares()) {
    throw InvalidArgument(
        "choice function requires a real daycare, got index " +
        std::to_string(daycare));
  }
  const Daycare& d = instance.daycare(daycare);

  std::vector<int> order(applicants.begin(), applicants.end());
  std::sort(order.begin(), order.end());
  order.erase(std::unique(order.begin(), order.end()), order.end());
  for (int c : order) {
    if (c < 0 || c >= instance.num_children() || d.rank[c] < 0) {
      throw InvalidArgument("daycare " + d.id + " does not rank applicant " +
                            (c >= 0 && c < instance.num_children()
                                 ? instance.child(c).id
                                 : std::to_string(c)));
    }
  }
  auto is_favored = [&](int c) {
    return std::find(favored.begin(), favored.end(), c) != favored.end();
  };
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return std::make_tuple(d.rank[a], !is_favored(a), a) <
           std::make_tuple(d.rank[b], !is_favored(b), b);
  });

  ChoiceResult result;
  result.per_group_counts.assign(d.groups.size(), 0);
  for (int c : order) {
    const int g = d.group_of_grade[instance.child(c).grade];
    if (result.per_group_counts[g] < d.groups[g].quota) {
      ++result.per_group_counts[g];
      result.chosen.push_back(c);
    } else {
      result.rejected.push_back(c);
    }
  }
  return result;
}

}  // namespace daycare
