#ifndef DAYCARE_SYNTHGEN_H_
#define DAYCARE_SYNTHGEN_H_

#include <cstdint>
#include <string>
#include <vector>

#include "daycare/document.h"
#include "daycare/model.h"

namespace daycare {

struct GenParams {
  int n_families = 10;
  // Shares of 1-, 2- and 3-child families; normalized when they do not sum
  // to 1.
  double share_one = 0.85;
  double share_two = 0.13;
  double share_three = 0.02;
  int n_daycares = 3;
  int n_grades = 6;
  int quota_min = 1;  // per grade, inclusive
  int quota_max = 3;
  // Probability that a daycare pools its grades into contiguous groups
  // instead of one group per grade.
  double transferable_group_prob = 0.5;
  int min_tuples = 1;  // excluding the appended initial tuple
  int max_tuples = 5;
  // Share of families with at least one initially enrolled child.
  double initial_share = 0.3;
  // Probability that a sibling tuple sends every child to one daycare.
  double same_daycare_bias = 0.6;
  // How strongly daycare priorities follow one municipal score (0 gives
  // independent priorities, 1 identical ones).
  double priority_correlation = 0.8;
  // Spread of daycare popularity; 0 makes every daycare equally popular.
  double popularity_spread = 1.0;
  PriorityMode mode = PriorityMode::kStrict;
  // Indifference mode: probability that a tie class grows by one more child,
  // and the largest class size.
  double tie_prob = 0.4;
  int max_tie_class = 4;
  std::uint64_t seed = 1;
};

// Named presets: "small", "tama-like", "shibuya-like", "large". Throws
// InvalidArgument for an unknown name.
GenParams Preset(const std::string& name);
std::vector<std::string> PresetNames();

// Throws InvalidArgument for out-of-range or unsatisfiable parameters.
void CheckParams(const GenParams& params);

// Deterministic for fixed parameters. The result always validates:
// incumbents outrank newcomers at their daycare, the initial matching fits
// every quota, and each enrolled family's initial tuple comes last.
InstanceDocument GenerateDocument(const GenParams& params);
Instance Generate(const GenParams& params);

// Strict instance whose priorities order every tie class uniformly at
// random. Deterministic per seed; everything else is unchanged.
Instance TieBreak(const Instance& instance, std::uint64_t seed);

}  // namespace daycare

#endif  // DAYCARE_SYNTHGEN_H_
