#ifndef DAYCARE_TESTS_RANDOM_MARKET_H_
#define DAYCARE_TESTS_RANDOM_MARKET_H_

// Small random markets for property tests, built independently of the
// library's generator so that both are exercised.

#include <cstdint>
#include <random>
#include <vector>

#include "daycare/document.h"
#include "daycare/model.h"

namespace daycare::testing {

struct MarketShape {
  int max_families = 6;
  int max_daycares = 4;
  int max_grades = 3;
  int max_tuples = 4;  // excluding the initial tuple
  int max_siblings = 3;
  double initial_prob = 0.3;
  double dummy_entry_prob = 0.15;
  bool ties = false;
};

InstanceDocument RandomDocument(const MarketShape& shape, std::mt19937_64& rng);
Instance RandomInstance(const MarketShape& shape, std::mt19937_64& rng);

// Uniform over the position vectors that are feasible (rejection sampling,
// falling back to the initial matching).
std::vector<Position> RandomFeasiblePositions(const Instance& instance,
                                              std::mt19937_64& rng);

// Uniform integer in [lo, hi].
int Uniform(std::mt19937_64& rng, int lo, int hi);

}  // namespace daycare::testing

#endif  // DAYCARE_TESTS_RANDOM_MARKET_H_
