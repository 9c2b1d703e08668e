// Exact search over family positions with propagation of capacities,
// blocking-coalition counts and the matched-children bound.
//
// Each family f has values 0..L_f-1 (its tuples) plus, when it has no
// initial enrollment, the value L_f meaning "unmatched". A query asks for an
// assignment with at most `budget` blocking pairs and at least `target`
// matched children. All state changes go through a trail so queries can be
// nested under fixed prefixes.

#ifndef DAYCARE_SRC_SEARCH_H_
#define DAYCARE_SRC_SEARCH_H_

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "daycare/encoding.h"
#include "daycare/model.h"

namespace daycare::internal {

enum class QueryStatus { kFound, kExhausted, kAborted };

class SearchEngine {
 public:
  using Clock = std::chrono::steady_clock;

  SearchEngine(const Instance& instance, const EncodedModel& model,
               std::uint64_t seed);

  SearchEngine(const SearchEngine&) = delete;
  SearchEngine& operator=(const SearchEngine&) = delete;

  void set_deadline(std::optional<Clock::time_point> deadline) {
    deadline_ = deadline;
  }

  std::uint64_t nodes() const { return nodes_; }

  // Called for every solution; returns false to stop the search. The
  // callback may tighten the budget or raise the target.
  using SolutionCallback = std::function<bool(const std::vector<Position>&)>;

  // Depth-first search below the current root, branching on open cores
  // first and then on the family with the smallest weighted domain.
  QueryStatus Search(int budget, int target,
                     const SolutionCallback& on_solution);

  // Restricts family f to value v at the root until rolled back. Returns
  // false if the root becomes inconsistent.
  bool FixAtRoot(int family, int value);

  // Propagates the root under these bounds; the result stays until rolled
  // back. Returns false on a conflict.
  bool Settle(int budget, int target);

  // Root state markers for FixAtRoot() and Settle().
  size_t Mark() const { return trail_.size(); }
  void Rollback(size_t mark);

  // Value tried first for each family; positions.
  void set_hint(const std::vector<Position>& positions);

  // Pairs are (family, position) in family-major order.
  int num_pairs() const { return static_cast<int>(pair_family_.size()); }
  int pair_id(int family, Position p) const { return pair_offset_[family] + p; }
  bool pair_can_block(int pair) const { return !pair_never_blocks_[pair]; }

  // Pairs flagged here may not block in later queries. Empty clears.
  void set_forbidden(const std::vector<char>& forbidden);

  // Disjoint pair sets each known to contain a blocking pair in every
  // matching; each counts once toward the budget before any of its pairs
  // blocks. Call between queries.
  void set_cores(const std::vector<std::vector<int>>& cores);

  // Pairs whose non-blocking rule removed a value or failed during the last
  // query. After an exhausted query they alone suffice for the refutation.
  const std::vector<int>& used_pairs() const { return used_; }

  // Aborts a query after this many nodes.
  void set_node_limit(std::optional<std::uint64_t> limit) {
    node_limit_ = limit;
  }

  void set_budget(int budget) { budget_ = budget; }
  void set_target(int target) { target_ = target; }
  int budget() const { return budget_; }
  int target() const { return target_; }

  int num_values(int family) const { return num_values_[family]; }
  bool alive(int family, int value) const {
    return alive_[value_offset_[family] + value] != 0;
  }
  int dom_min(int family) const { return dom_min_[family]; }

  // Value index <-> position.
  Position ToPosition(int family, int value) const {
    return value == num_positions_[family] ? kUnmatched : value;
  }
  int ToValue(int family, Position p) const {
    return p == kUnmatched ? num_positions_[family] : p;
  }

 private:
  struct TrailEntry {
    int* slot;
    int old;
  };

  void Set(int& slot, int value) {
    if (slot == value) return;
    trail_.push_back({&slot, slot});
    slot = value;
  }
  void Undo(size_t mark);

  bool Remove(int family, int value);
  bool RestrictTo(int family, int value);
  bool KeepOnly(int family, const std::vector<int>& values);

  // Runs every pending update to a fixpoint. Returns false on a conflict.
  bool Propagate();
  void QueueAll();
  bool RefreshFamily(int family);
  // Whether the pair may no longer become blocking.
  bool Tight(int pair) const {
    if (pair_forbidden_[pair]) return true;
    if (blocking_lb_ < budget_) return false;
    const int core = pair_core_[pair];
    return core < 0 || core_committed_[core] > 0 ||
           (core_allowed_[core] >= 0 && core_allowed_[core] != pair);
  }
  // Whether the pair may still become blocking.
  bool PairLive(int pair) const;
  // With no blocking pair to spare, the open core with the fewest live
  // pairs and those pairs; -1 when none, kCoreConflict when a core has
  // none left.
  static constexpr int kCoreConflict = -2;
  int ChooseCore(std::vector<int>& options) const;
  // Lets `pair` alone block within `core`.
  void Allow(int core, int pair);
  bool CheckPair(int pair);
  bool CheckSlot(int slot);
  bool CheckObjective();
  bool CheckProposals(int slot);
  void MarkProposals(int slot);
  void MarkAllProposals();
  void MarkPair(int pair);
  void MarkAllPairs();
  void ClearQueues();

  void Blame(int family) { weight_[family] += 1.0; }
  void Use(int pair) {
    if (pair_used_[pair]) return;
    pair_used_[pair] = 1;
    used_.push_back(pair);
  }

  bool TimeUp();
  int ChooseFamily() const;
  std::vector<Position> Extract() const;

  // Static data.
  int num_families_ = 0;
  std::vector<int> num_positions_;
  std::vector<int> num_values_;
  std::vector<int> value_offset_;
  std::vector<int> matched_of_value_;
  std::vector<std::vector<int>> value_placements_;  // per global value
  std::vector<int> family_of_value_;

  // Placement = one x[c,d] variable with a real daycare d.
  std::vector<int> placement_family_;
  std::vector<int> placement_slot_;
  std::vector<std::vector<int>> placement_values_;  // local value indices
  std::vector<std::vector<int>> placement_conditions_;
  std::vector<int> placement_rank_;  // child's tie class at the daycare
  std::vector<std::vector<int>> family_placements_;

  // Slot = (daycare, grade group).
  std::vector<int> slot_quota_;
  struct SlotEntry {
    int value;  // global value index
    int family;
  };
  std::vector<std::vector<SlotEntry>> slot_entries_;

  // Condition = one gamma[f,p,d,G] room test; blocked once at least `need`
  // of its counted placements are occupied.
  std::vector<int> condition_need_;
  std::vector<int> condition_pair_;
  std::vector<std::vector<int>> condition_members_;

  // Pair = (family, position) with its conditions.
  std::vector<int> pair_family_;
  std::vector<int> pair_position_;
  std::vector<int> pair_offset_;  // per family
  std::vector<std::vector<int>> pair_conditions_;
  std::vector<char> pair_never_blocks_;
  std::vector<int> pair_forbidden_;
  int any_forbidden_ = 0;
  std::vector<int> pair_core_;  // -1 outside every core
  std::vector<char> pair_used_;
  std::vector<int> used_;

  // Pairs whose tuple sends exactly one child to one real (daycare, group)
  // and nothing else: holding the tuple or worse forces that group to fill
  // with children ranked at least as high as the applicant.
  std::vector<int> pair_proposal_slot_;  // -1 when not of this shape
  std::vector<int> pair_proposal_rank_;
  std::vector<std::vector<int>> slot_proposal_pairs_;
  struct SlotPlacement {
    int placement;
    int rank;
  };
  std::vector<std::vector<SlotPlacement>> slot_placements_;

  std::vector<std::uint64_t> tie_key_;
  std::vector<int> hint_;  // value per family, -1 for none
  // Conflicts each family took part in; steers branching.
  std::vector<double> weight_;

  // Trailed state.
  std::vector<int> alive_;
  std::vector<int> dom_size_;
  std::vector<int> dom_min_;
  std::vector<int> dom_max_;
  std::vector<int> max_matched_;
  std::vector<int> possible_count_;
  std::vector<int> possible_;
  std::vector<int> certain_;
  std::vector<int> condition_ub_;
  std::vector<int> condition_lb_;
  std::vector<int> slot_lb_;
  std::vector<int> slot_ub_;
  std::vector<int> pair_blocks_;
  // Per slot, the tightest proposal threshold already enforced.
  std::vector<int> slot_threshold_;
  std::vector<int> core_committed_;  // blocking pairs per core
  std::vector<int> core_allowed_;    // the one pair allowed to block, or -1
  std::vector<std::vector<int>> core_pairs_;
  int blocking_lb_ = 0;
  int sum_max_matched_ = 0;
  int capacity_bound_ = 0;
  int fixed_families_ = 0;

  std::vector<TrailEntry> trail_;

  // Work queues (not trailed; cleared on conflict).
  std::vector<int> family_queue_;
  std::vector<char> family_queued_;
  std::vector<int> pair_queue_;
  std::vector<char> pair_queued_;
  std::vector<int> slot_queue_;
  std::vector<char> slot_queued_;
  std::vector<int> proposal_queue_;
  std::vector<char> proposal_queued_;
  std::vector<int> proposal_ranks_;  // scratch
  bool objective_dirty_ = true;

  int budget_ = 0;
  int target_ = 0;

  std::optional<Clock::time_point> deadline_;
  std::optional<std::uint64_t> node_limit_;
  std::uint64_t query_start_ = 0;
  std::uint64_t nodes_ = 0;
  bool aborted_ = false;
};

}  // namespace daycare::internal

#endif  // DAYCARE_SRC_SEARCH_H_
