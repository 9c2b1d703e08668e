#include "daycare/solver.h"

#include <algorithm>
#include <chrono>
#include <limits>
#include <optional>

#include "daycare/encoding.h"
#include "daycare/error.h"
#include "daycare/synthgen.h"
#include "search.h"

namespace daycare {
namespace {

using Clock = std::chrono::steady_clock;
using internal::QueryStatus;
using internal::SearchEngine;

// Seats per (daycare, group), used by the greedy incumbent and the oracle.
class Loads {
 public:
  explicit Loads(const Instance& instance) : instance_(instance) {
    for (int d = 0; d < instance.num_daycares(); ++d) {
      load_.emplace_back(instance.daycare(d).groups.size(), 0);
    }
  }

  // Adds (sign = 1) or removes (sign = -1) family f's seats at position p.
  void Apply(int f, Position p, int sign) {
    if (p == kUnmatched) return;
    const Family& family = instance_.family(f);
    for (size_t i = 0; i < family.children.size(); ++i) {
      const int d = family.preferences[p][i];
      if (d == kDummy) continue;
      load_[d][instance_.GroupOf(d, family.children[i])] += sign;
    }
  }

  // Whether f's seats at position p fit on top of the current load.
  bool Fits(int f, Position p) {
    Apply(f, p, 1);
    bool ok = true;
    const Family& family = instance_.family(f);
    for (size_t i = 0; i < family.children.size() && ok; ++i) {
      const int d = family.preferences[p][i];
      if (d == kDummy) continue;
      const int g = instance_.GroupOf(d, family.children[i]);
      ok = load_[d][g] <= instance_.daycare(d).groups[g].quota;
    }
    Apply(f, p, -1);
    return ok;
  }

 private:
  const Instance& instance_;
  std::vector<std::vector<int>> load_;
};

// Serial insertion from the initial matching: each family in turn moves to
// its best tuple that fits, until no family can improve.
std::vector<Position> GreedyPositions(const Instance& instance) {
  std::vector<Position> positions(instance.num_families(), kUnmatched);
  Loads loads(instance);
  for (int f = 0; f < instance.num_families(); ++f) {
    const Family& family = instance.family(f);
    if (family.has_initial) {
      positions[f] = family.num_positions() - 1;
      loads.Apply(f, positions[f], 1);
    }
  }
  bool changed = true;
  while (changed) {
    changed = false;
    for (int f = 0; f < instance.num_families(); ++f) {
      const Position current = positions[f];
      const Position limit =
          current == kUnmatched ? instance.family(f).num_positions() : current;
      loads.Apply(f, current, -1);
      for (Position p = 0; p < limit; ++p) {
        if (loads.Fits(f, p)) {
          positions[f] = p;
          changed = true;
          break;
        }
      }
      loads.Apply(f, positions[f], 1);
    }
  }
  return positions;
}

// Deferred acceptance over whole tuples. Families propose down their lists;
// a tuple is accepted when every group it touches has room for the family's
// applicants next to the higher-ranked children already held there, and the
// lowest-ranked holders are evicted together with their siblings. Families
// left with a blocking pair propose again from that tuple, for a bounded
// number of rounds. Returns the best (fewest blocking pairs, then most
// matched) matching seen, or nothing if none was feasible.
class ProposalHeuristic {
 public:
  ProposalHeuristic(const Instance& instance, const EncodedModel& model)
      : instance_(instance), model_(model) {
    held_.resize(instance.num_daycares());
    for (int d = 0; d < instance.num_daycares(); ++d) {
      held_[d].resize(instance.daycare(d).groups.size());
    }
  }

  std::optional<std::vector<Position>> Run(int max_rounds) {
    const int n = instance_.num_families();
    positions_.assign(n, kUnmatched);
    next_.assign(n, 0);
    for (int f = n - 1; f >= 0; --f) stack_.push_back(f);
    std::optional<std::vector<Position>> best;
    int best_blocking = 0;
    int best_matched = 0;
    for (int round = 0; round < max_rounds; ++round) {
      Drain();
      Evaluation eval;
      try {
        eval = Evaluate(model_, positions_);
      } catch (const ConstraintViolation&) {
        return best;
      }
      if (!best || eval.blocking < best_blocking ||
          (eval.blocking == best_blocking && eval.matched > best_matched)) {
        best = positions_;
        best_blocking = eval.blocking;
        best_matched = eval.matched;
      }
      if (eval.blocking == 0) break;
      for (int f = n - 1; f >= 0; --f) {
        for (Position p = 0; p < instance_.family(f).num_positions(); ++p) {
          if (eval.values[model_.blocks[f][p].beta]) {
            Withdraw(f);
            next_[f] = p;
            stack_.push_back(f);
            break;
          }
        }
      }
    }
    return best;
  }

 private:
  bool Accepts(int f, Position p) const {
    for (const GroupCondition& cond : model_.blocks[f][p].conditions) {
      const Daycare& daycare = instance_.daycare(cond.daycare);
      int threshold = -1;
      for (int c : cond.applicants) {
        threshold = std::max(threshold, daycare.rank[c]);
      }
      int count = 0;
      for (int c : held_[cond.daycare][cond.group]) {
        if (instance_.child(c).family == f) continue;
        const int r = daycare.rank[c];
        if (r < threshold ||
            (model_.mode == PriorityMode::kIndifference && r == threshold)) {
          ++count;
        }
      }
      if (count + static_cast<int>(cond.applicants.size()) > cond.quota) {
        return false;
      }
    }
    return true;
  }

  void Withdraw(int f) {
    const Position p = positions_[f];
    if (p == kUnmatched) return;
    const Family& family = instance_.family(f);
    for (size_t i = 0; i < family.children.size(); ++i) {
      const int d = family.preferences[p][i];
      if (d == kDummy) continue;
      const int c = family.children[i];
      auto& list = held_[d][instance_.GroupOf(d, c)];
      list.erase(std::find(list.begin(), list.end(), c));
    }
    positions_[f] = kUnmatched;
  }

  void Place(int f, Position p) {
    Withdraw(f);
    positions_[f] = p;
    const Family& family = instance_.family(f);
    for (size_t i = 0; i < family.children.size(); ++i) {
      const int d = family.preferences[p][i];
      if (d == kDummy) continue;
      const int c = family.children[i];
      held_[d][instance_.GroupOf(d, c)].push_back(c);
    }
    for (size_t i = 0; i < family.children.size(); ++i) {
      const int d = family.preferences[p][i];
      if (d == kDummy) continue;
      const Daycare& daycare = instance_.daycare(d);
      const int g = instance_.GroupOf(d, family.children[i]);
      auto& list = held_[d][g];
      if (static_cast<int>(list.size()) <= daycare.groups[g].quota) continue;
      // Holders tied with an applicant stay ahead of it.
      std::sort(list.begin(), list.end(), [&](int a, int b) {
        const int ka = daycare.rank[a] * 2 + (instance_.child(a).family == f);
        const int kb = daycare.rank[b] * 2 + (instance_.child(b).family == f);
        return ka != kb ? ka < kb : a < b;
      });
      while (static_cast<int>(list.size()) > daycare.groups[g].quota) {
        const int evicted = instance_.child(list.back()).family;
        if (evicted == f) break;  // cannot happen for an accepted tuple
        const Position from = positions_[evicted];
        Withdraw(evicted);
        next_[evicted] = from + 1;
        stack_.push_back(evicted);
      }
    }
  }

  void Drain() {
    while (!stack_.empty()) {
      const int f = stack_.back();
      stack_.pop_back();
      if (positions_[f] != kUnmatched) continue;
      const Family& family = instance_.family(f);
      for (Position p = next_[f]; p < family.num_positions(); ++p) {
        if (Accepts(f, p)) {
          Place(f, p);
          break;
        }
      }
      if (positions_[f] == kUnmatched && family.has_initial) {
        // Only reachable when the initial matching overfills a group.
        Place(f, family.num_positions() - 1);
      }
    }
  }

  const Instance& instance_;
  const EncodedModel& model_;
  std::vector<std::vector<std::vector<int>>> held_;
  std::vector<Position> positions_;
  std::vector<Position> next_;
  std::vector<int> stack_;
};

// Unmatched sorts after every listed position.
bool LexLess(const std::vector<Position>& a, const std::vector<Position>& b) {
  auto key = [](Position p) {
    return p == kUnmatched ? std::numeric_limits<int>::max() : p;
  };
  for (size_t i = 0; i < a.size(); ++i) {
    if (key(a[i]) != key(b[i])) return key(a[i]) < key(b[i]);
  }
  return false;
}

std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

struct Incumbent {
  std::vector<Position> positions;
  int blocking = 0;
  int matched = 0;
  bool valid = false;
};

class TwoPhaseSolver {
 public:
  static constexpr int kRounds = 50;
  static constexpr std::uint64_t kCoreNodes = 200'000;
  static constexpr int kTrimRounds = 3;

  TwoPhaseSolver(const Instance& instance, const SolveOptions& options)
      : instance_(instance),
        options_(options),
        model_(Encode(instance, {})),
        engine_(instance, model_, options.seed) {
    start_ = Clock::now();
    if (options.time_limit_ms) {
      deadline_ = start_ + std::chrono::milliseconds(*options.time_limit_ms);
      engine_.set_deadline(deadline_);
    }
    for (int f = 0; f < instance.num_families(); ++f) {
      int best = 0;
      for (const auto& tuple : instance.family(f).preferences) {
        best = std::max<int>(best, static_cast<int>(std::count_if(
                                       tuple.begin(), tuple.end(),
                                       [](int d) { return d != kDummy; })));
      }
      matched_bound_ += best;
    }
  }

  SolveResult Run() {
    bool proven = true;
    int theta = 0;
    std::vector<Position> greedy = GreedyPositions(instance_);
    Evaluation greedy_eval = Evaluate(model_, greedy);
    if (auto proposal = ProposalHeuristic(instance_, model_).Run(kRounds)) {
      const Evaluation eval = Evaluate(model_, *proposal);
      if (eval.blocking < greedy_eval.blocking ||
          (eval.blocking == greedy_eval.blocking &&
           eval.matched > greedy_eval.matched)) {
        greedy = std::move(*proposal);
        greedy_eval = eval;
      }
    }
    engine_.set_hint(greedy);
    Report(Progress::Phase::kIncumbent, greedy, greedy_eval);

    if (options_.fixed_blocking_bound) {
      theta = *options_.fixed_blocking_bound;
      if (theta < 0) throw InvalidArgument("blocking bound must be >= 0");
      if (greedy_eval.blocking <= theta) Offer(greedy, greedy_eval);
    } else {
      Offer(greedy, greedy_eval);
      proven = MinimizeBlocking();
      theta = best_.blocking;
    }

    if (proven) proven = MaximizeMatched(theta);
    if (!best_.valid) {
      if (proven) {
        throw Infeasible(
            "no feasible individually rational matching has at "
            "most " +
            std::to_string(theta) + " blocking pairs");
      }
      throw TimeLimitReached(
          "time limit reached before any matching with at most " +
          std::to_string(theta) + " blocking pairs was found");
    }
    if (proven && options_.canonical) Canonicalize(theta);

    SolveResult result;
    result.matching = Matching::FromPositions(instance_, best_.positions);
    result.theta = options_.fixed_blocking_bound ? theta
                   : proven                      ? theta
                                                 : best_.blocking;
    result.blocking = best_.blocking;
    result.matched_children = best_.matched;
    result.optimality =
        proven ? Optimality::kProvenOptimal : Optimality::kBestFound;
    result.statistics = stats_;
    result.statistics.nodes = engine_.nodes();
    result.statistics.wall_ms =
        std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() -
                                                              start_)
            .count();
    result.seed = options_.seed;
    return result;
  }

 private:
  // Checks a search solution against the model and returns its evaluation.
  Evaluation Verify(const std::vector<Position>& positions, int budget,
                    int target) {
    Evaluation eval = Evaluate(model_, positions);
    if (eval.blocking > budget || eval.matched < target) {
      throw Error("internal: search returned a matching outside its bounds");
    }
    return eval;
  }

  void Offer(const std::vector<Position>& positions, const Evaluation& eval) {
    best_.positions = positions;
    best_.blocking = eval.blocking;
    best_.matched = eval.matched;
    best_.valid = true;
  }

  void Report(Progress::Phase phase, const std::vector<Position>&,
              const Evaluation& eval) {
    if (!options_.on_progress) return;
    Progress progress;
    progress.phase = phase;
    progress.blocking = eval.blocking;
    progress.matched = eval.matched;
    progress.nodes = engine_.nodes();
    options_.on_progress(progress);
  }

  // Returns true when best_.blocking is proven minimal.
  bool MinimizeBlocking() {
    const std::uint64_t before = engine_.nodes();
    bool proven = true;
    if (best_.blocking > 0) {
      QueryStatus status =
          engine_.Search(0, 0, [&](const std::vector<Position>& positions) {
            const Evaluation eval = Verify(positions, 0, 0);
            Offer(positions, eval);
            Report(Progress::Phase::kBlocking, positions, eval);
            return false;
          });
      if (status == QueryStatus::kAborted) proven = false;
      if (status == QueryStatus::kExhausted) {
        ExtractCores(engine_.used_pairs());
        int lower = static_cast<int>(cores_.size());
        if (lower < best_.blocking) {
          // A budget equal to the core count leaves no pair outside the
          // cores free to block.
          status = engine_.Search(
              lower, 0, [&](const std::vector<Position>& positions) {
                const Evaluation eval = Verify(positions, lower, 0);
                Offer(positions, eval);
                Report(Progress::Phase::kBlocking, positions, eval);
                return false;
              });
          if (status == QueryStatus::kAborted) proven = false;
          if (status == QueryStatus::kExhausted) ++lower;
        }
        if (status == QueryStatus::kExhausted && lower < best_.blocking) {
          status = engine_.Search(
              best_.blocking - 1, 0,
              [&](const std::vector<Position>& positions) {
                const Evaluation eval = Verify(positions, engine_.budget(), 0);
                Offer(positions, eval);
                Report(Progress::Phase::kBlocking, positions, eval);
                if (eval.blocking <= lower) return false;
                engine_.set_budget(eval.blocking - 1);
                return true;
              });
          if (status == QueryStatus::kAborted) proven = false;
        }
      }
    }
    stats_.blocking_nodes = engine_.nodes() - before;
    return proven;
  }

  enum class Consistency { kYes, kNo, kUnknown };

  std::vector<int> BlockingPairs(const Evaluation& eval) const {
    std::vector<int> pairs;
    for (int f = 0; f < instance_.num_families(); ++f) {
      for (Position p = 0; p < instance_.family(f).num_positions(); ++p) {
        if (eval.values[model_.blocks[f][p].beta]) {
          pairs.push_back(engine_.pair_id(f, p));
        }
      }
    }
    return pairs;
  }

  // Whether some matching keeps every pair in `pairs` from blocking. Known
  // matchings answer most calls without a search.
  Consistency Test(const std::vector<int>& pairs, std::uint64_t node_limit) {
    std::vector<char> forbidden(engine_.num_pairs(), 0);
    for (int pair : pairs) forbidden[pair] = 1;
    for (const std::vector<int>& blocking : pool_) {
      if (std::none_of(blocking.begin(), blocking.end(),
                       [&](int pair) { return forbidden[pair] != 0; })) {
        return Consistency::kYes;
      }
    }
    engine_.set_forbidden(forbidden);
    engine_.set_node_limit(node_limit);
    const QueryStatus status = engine_.Search(
        engine_.num_pairs() + 1, 0,
        [&](const std::vector<Position>& positions) {
          const Evaluation eval = Evaluate(model_, positions);
          std::vector<int> blocking = BlockingPairs(eval);
          for (int pair : blocking) {
            if (forbidden[pair]) {
              throw Error(
                  "internal: search returned a forbidden blocking pair");
            }
          }
          pool_.push_back(std::move(blocking));
          if (eval.blocking < best_.blocking ||
              (eval.blocking == best_.blocking &&
               eval.matched > best_.matched)) {
            Offer(positions, eval);
            Report(Progress::Phase::kBlocking, positions, eval);
          }
          return false;
        });
    engine_.set_forbidden({});
    engine_.set_node_limit(std::nullopt);
    switch (status) {
      case QueryStatus::kFound:
        return Consistency::kYes;
      case QueryStatus::kExhausted:
        return Consistency::kNo;
      case QueryStatus::kAborted:
        break;
    }
    return Consistency::kUnknown;
  }

  // Disjoint sets of pairs each of which must contain a blocking pair;
  // their number bounds theta from below. `core` comes from the exhausted
  // stability query.
  void ExtractCores(std::vector<int> core) {
    std::vector<char> taken(engine_.num_pairs(), 0);
    while (!core.empty()) {
      // A refutation of the core alone may lean on fewer pairs.
      for (int round = 0; round < kTrimRounds && !TimedOut(); ++round) {
        if (Test(core, kCoreNodes) != Consistency::kNo) break;
        std::vector<int> trimmed = engine_.used_pairs();
        if (trimmed.size() >= core.size()) break;
        core = std::move(trimmed);
      }
      std::sort(core.begin(), core.end());
      for (int pair : core) taken[pair] = 1;
      cores_.push_back(std::move(core));
      core.clear();
      if (static_cast<int>(cores_.size()) >= best_.blocking || TimedOut()) {
        break;
      }
      std::vector<int> rest;
      for (int pair = 0; pair < engine_.num_pairs(); ++pair) {
        if (engine_.pair_can_block(pair) && !taken[pair]) rest.push_back(pair);
      }
      if (Test(rest, kCoreNodes) == Consistency::kNo) {
        core = engine_.used_pairs();
      }
    }
    stats_.cores = static_cast<int>(cores_.size());
    engine_.set_cores(cores_);
  }

  bool TimedOut() const { return deadline_ && Clock::now() >= *deadline_; }

  // Returns true when best_.matched is proven maximal under the bound.
  bool MaximizeMatched(int theta) {
    const std::uint64_t before = engine_.nodes();
    const int target = best_.valid ? best_.matched + 1 : 0;
    bool proven = true;
    if (!best_.valid || best_.matched < matched_bound_) {
      QueryStatus status = engine_.Search(
          theta, target, [&](const std::vector<Position>& positions) {
            Evaluation eval = Verify(positions, theta, engine_.target());
            if (!best_.valid || eval.matched > best_.matched ||
                (eval.matched == best_.matched &&
                 eval.blocking < best_.blocking)) {
              Offer(positions, eval);
            }
            Report(Progress::Phase::kMatched, positions, eval);
            if (eval.matched >= matched_bound_) return false;
            engine_.set_target(eval.matched + 1);
            return true;
          });
      if (status == QueryStatus::kAborted) proven = false;
    }
    stats_.matched_nodes = engine_.nodes() - before;
    return proven;
  }

  // Fixes families in order, each to the smallest position (unmatched
  // last) that still admits an optimal matching; the result is the smallest
  // optimal position vector unless the node or time budget runs out.
  void Canonicalize(int theta) {
    const std::uint64_t before = engine_.nodes();
    const int target = best_.matched;
    std::vector<Position> current = best_.positions;
    const size_t root = engine_.Mark();
    bool complete = true;
    for (int f = 0; f < instance_.num_families() && complete; ++f) {
      if (!engine_.Settle(theta, target)) break;
      const int have = engine_.ToValue(f, current[f]);
      for (int v = engine_.dom_min(f); v < have && complete; ++v) {
        if (!engine_.alive(f, v)) continue;
        const size_t mark = engine_.Mark();
        bool found = false;
        if (engine_.FixAtRoot(f, v)) {
          if (const auto& limit = options_.canonical_node_limit) {
            const std::uint64_t spent = engine_.nodes() - before;
            if (spent >= *limit) {
              complete = false;
              engine_.Rollback(mark);
              break;
            }
            engine_.set_node_limit(*limit - spent);
          }
          engine_.set_hint(current);
          const QueryStatus status = engine_.Search(
              theta, target, [&](const std::vector<Position>& positions) {
                Verify(positions, theta, target);
                current = positions;
                return false;
              });
          found = status == QueryStatus::kFound;
          complete = status != QueryStatus::kAborted;
        }
        engine_.Rollback(mark);
        if (found) break;
      }
      if (!engine_.FixAtRoot(f, engine_.ToValue(f, current[f]))) break;
    }
    engine_.set_node_limit(std::nullopt);
    engine_.Rollback(root);
    if (LexLess(current, best_.positions)) {
      const Evaluation eval = Verify(current, theta, target);
      Offer(current, eval);
      Report(Progress::Phase::kCanonical, current, eval);
    }
    stats_.canonical_nodes = engine_.nodes() - before;
    stats_.canonical = complete;
  }

  const Instance& instance_;
  const SolveOptions& options_;
  EncodedModel model_;
  SearchEngine engine_;
  Clock::time_point start_;
  std::optional<Clock::time_point> deadline_;
  int matched_bound_ = 0;
  Incumbent best_;
  // Blocking pairs of every matching met while extracting cores.
  std::vector<std::vector<int>> pool_;
  std::vector<std::vector<int>> cores_;
  SolveStatistics stats_;
};

}  // namespace

const char* OptimalityName(Optimality optimality) {
  return optimality == Optimality::kProvenOptimal ? "proven-optimal"
                                                  : "best-found";
}

SolveResult Solve(const Instance& instance, const SolveOptions& options) {
  if (options.mode == PriorityMode::kStrict &&
      instance.mode() == PriorityMode::kIndifference) {
    const Instance strict = TieBreak(instance, options.seed);
    SolveResult result = TwoPhaseSolver(strict, options).Run();
    // Positions index the same families; rebuild against the caller's
    // instance.
    result.matching = Matching::FromPositions(
        instance, std::vector<Position>(result.matching.positions().begin(),
                                        result.matching.positions().end()));
    return result;
  }
  return TwoPhaseSolver(instance, options).Run();
}

std::uint64_t OracleEnumerationSize(const Instance& instance) {
  std::uint64_t size = 1;
  for (const Family& family : instance.families()) {
    const std::uint64_t options =
        static_cast<std::uint64_t>(family.num_positions()) +
        (family.has_initial ? 0 : 1);
    if (options != 0 &&
        size > std::numeric_limits<std::uint64_t>::max() / options) {
      return std::numeric_limits<std::uint64_t>::max();
    }
    size *= options;
  }
  return size;
}

SolveResult BruteForceOracle(const Instance& instance, std::uint64_t limit) {
  const std::uint64_t size = OracleEnumerationSize(instance);
  if (size > limit) throw LimitExceeded(size, limit);
  const auto start = Clock::now();

  const int n = instance.num_families();
  std::vector<Position> positions(n, kUnmatched);
  std::vector<Position> best_positions;
  int best_blocking = 0;
  int best_matched = 0;
  std::uint64_t leaves = 0;
  Loads loads(instance);

  // Candidate values per family in ascending order, unmatched last.
  auto values = [&](int f) {
    std::vector<Position> out;
    for (Position p = 0; p < instance.family(f).num_positions(); ++p) {
      out.push_back(p);
    }
    if (!instance.family(f).has_initial) out.push_back(kUnmatched);
    return out;
  };
  std::vector<std::vector<Position>> domain(n);
  for (int f = 0; f < n; ++f) domain[f] = values(f);

  // Iterative enumeration; capacity is checked incrementally.
  std::vector<int> cursor(n, -1);
  int f = 0;
  while (f >= 0) {
    if (f == n) {
      ++leaves;
      const Matching m = Matching::FromPositions(instance, positions);
      const int blocking =
          static_cast<int>(EnumerateBlocking(instance, m).size());
      const int matched = m.matched_children();
      if (best_positions.empty() || blocking < best_blocking ||
          (blocking == best_blocking && matched > best_matched)) {
        best_positions = positions;
        best_blocking = blocking;
        best_matched = matched;
      }
      --f;
      continue;
    }
    if (cursor[f] >= 0) loads.Apply(f, positions[f], -1);
    ++cursor[f];
    while (cursor[f] < static_cast<int>(domain[f].size()) &&
           domain[f][cursor[f]] != kUnmatched &&
           !loads.Fits(f, domain[f][cursor[f]])) {
      ++cursor[f];
    }
    if (cursor[f] == static_cast<int>(domain[f].size())) {
      cursor[f] = -1;
      positions[f] = kUnmatched;
      --f;
      continue;
    }
    positions[f] = domain[f][cursor[f]];
    loads.Apply(f, positions[f], 1);
    ++f;
  }
  if (best_positions.empty()) {
    throw Infeasible("no feasible individually rational matching exists");
  }

  SolveResult result;
  result.matching = Matching::FromPositions(instance, best_positions);
  result.theta = best_blocking;
  result.blocking = best_blocking;
  result.matched_children = best_matched;
  result.optimality = Optimality::kProvenOptimal;
  result.statistics.nodes = leaves;
  result.statistics.wall_ms =
      std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() -
                                                            start)
          .count();
  return result;
}

TieBreakReport TieBreakCompare(const Instance& instance, int n_draws,
                               std::uint64_t seed,
                               const SolveOptions& options) {
  TieBreakReport report;
  SolveOptions base = options;
  base.mode = std::nullopt;
  base.seed = seed;
  const SolveResult ties = Solve(instance, base);
  report.theta = ties.theta;
  report.matched_children = ties.matched_children;
  report.proven = ties.optimality == Optimality::kProvenOptimal;
  for (int i = 0; i < n_draws; ++i) {
    TieBreakDraw draw;
    draw.seed = SplitMix64(seed ^ SplitMix64(static_cast<std::uint64_t>(i)));
    const Instance strict = TieBreak(instance, draw.seed);
    SolveOptions opts = base;
    opts.seed = draw.seed;
    const SolveResult r = Solve(strict, opts);
    draw.theta = r.theta;
    draw.matched_children = r.matched_children;
    draw.proven = r.optimality == Optimality::kProvenOptimal;
    if (draw.matched_children > report.matched_children) {
      report.direction_holds = false;
    }
    report.draws.push_back(draw);
  }
  return report;
}

}  // namespace daycare
