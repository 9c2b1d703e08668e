#ifndef DAYCARE_SOLVER_H_
#define DAYCARE_SOLVER_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "daycare/model.h"
#include "daycare/stability.h"

namespace daycare {

enum class Optimality { kProvenOptimal, kBestFound };

const char* OptimalityName(Optimality optimality);

struct SolveStatistics {
  std::uint64_t nodes = 0;
  std::uint64_t blocking_nodes = 0;   // minimizing blocking pairs
  std::uint64_t matched_nodes = 0;    // maximizing matched children
  std::uint64_t canonical_nodes = 0;  // picking the canonical optimum
  // False when the time or node limit cut the canonical pass short; the
  // objective values stay proven.
  bool canonical = true;
  // Disjoint pair sets found to each force a blocking pair.
  int cores = 0;
  std::int64_t wall_ms = 0;

  bool operator==(const SolveStatistics&) const = default;
};

struct SolveResult {
  Matching matching;
  // Minimum number of blocking pairs (or the imposed bound when one was
  // given, or the best value found when the time limit struck first).
  int theta = 0;
  int blocking = 0;  // blocking pairs of `matching`
  int matched_children = 0;
  Optimality optimality = Optimality::kProvenOptimal;
  SolveStatistics statistics;
  std::uint64_t seed = 0;
};

struct Progress {
  enum class Phase { kIncumbent, kBlocking, kMatched, kCanonical };
  Phase phase = Phase::kIncumbent;
  int blocking = 0;  // incumbent
  int matched = 0;   // incumbent
  std::uint64_t nodes = 0;
};

struct SolveOptions {
  std::optional<std::int64_t> time_limit_ms;
  std::uint64_t seed = 0;
  // kStrict on an instance with ties solves a seeded strict tie-breaking of
  // it. Defaults to the instance's own mode.
  std::optional<PriorityMode> mode;
  // Skip blocking minimization and require at most this many blocking pairs.
  std::optional<int> fixed_blocking_bound;
  // Among optimal matchings return the smallest position vector in family
  // order (unmatched counts as the last position).
  bool canonical = true;
  // Search nodes the canonical pass may spend. When it runs out the result
  // keeps the prefix fixed so far and statistics.canonical is false.
  std::optional<std::uint64_t> canonical_node_limit = 20'000;
  std::function<void(const Progress&)> on_progress;
};

// Lexicographic optimum: fewest blocking pairs, then most matched children,
// over feasible individually rational matchings. Throws Infeasible when no
// such matching exists (or none respects the fixed bound), and
// TimeLimitReached when the time limit strikes before any matching within
// the bound is found.
SolveResult Solve(const Instance& instance, const SolveOptions& options = {});

// Number of candidate matchings the oracle enumerates.
std::uint64_t OracleEnumerationSize(const Instance& instance);

// Exhaustive lexicographic optimum scored with the stability checker. Ties
// go to the smallest position vector. Throws LimitExceeded beyond `limit`.
SolveResult BruteForceOracle(const Instance& instance,
                             std::uint64_t limit = kDefaultEnumerationLimit);

struct TieBreakDraw {
  std::uint64_t seed = 0;
  int theta = 0;
  int matched_children = 0;
  bool proven = true;
};

struct TieBreakReport {
  int theta = 0;  // indifference mode
  int matched_children = 0;
  bool proven = true;
  std::vector<TieBreakDraw> draws;
  // Indifference-mode matched children >= every draw's.
  bool direction_holds = true;
};

// Solves an indifference-mode instance and `n_draws` random strict
// tie-breakings of it.
TieBreakReport TieBreakCompare(const Instance& instance, int n_draws,
                               std::uint64_t seed,
                               const SolveOptions& options = {});

}  // namespace daycare

#endif  // DAYCARE_SOLVER_H_
