#ifndef DAYCARE_TESTS_REFERENCE_H_
#define DAYCARE_TESTS_REFERENCE_H_

// Straightforward re-derivations of the market semantics used as oracles.
// They read only raw instance data and share no logic with the library.

#include <cstdint>
#include <vector>

#include "daycare/model.h"

namespace daycare::ref {

// Per-child daycare (kDummy when unmatched) for a family position vector.
std::vector<int> Assignment(const Instance& instance,
                            const std::vector<Position>& positions);

// Every (daycare, group) count within its pooled quota.
bool Feasible(const Instance& instance, const std::vector<Position>& positions);

int Matched(const Instance& instance, const std::vector<Position>& positions);

// Per group of `daycare`: applicants sorted by (rank, not favored, index),
// the first quota of them kept.
std::vector<int> Choose(const Instance& instance, int daycare,
                        const std::vector<int>& applicants,
                        const std::vector<int>& favored = {});

struct Block {
  int family = 0;
  Position position = 0;
  std::vector<int> displaced;  // sorted

  bool operator==(const Block&) const = default;
};

// Coalition test with the family's own seats vacated. `literal` keeps them.
bool Blocks(const Instance& instance, const std::vector<Position>& positions,
            int family, Position position, Block* out = nullptr,
            bool literal = false);

std::vector<Block> AllBlocks(const Instance& instance,
                             const std::vector<Position>& positions,
                             bool literal = false);

struct Optimum {
  int theta = 0;
  int matched = 0;
  std::vector<Position> positions;
  bool found = false;
};

// Exhaustive search over every position vector, optionally under a cap on
// blocking pairs. Ties go to the smallest vector, unmatched counting last.
Optimum BruteForce(const Instance& instance, int max_blocking = -1);

std::uint64_t SpaceSize(const Instance& instance);

}  // namespace daycare::ref

#endif  // DAYCARE_TESTS_REFERENCE_H_
