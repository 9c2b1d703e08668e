#include "search.h"

#include <algorithm>
#include <limits>
#include <numeric>

namespace daycare::internal {
namespace {

std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

SearchEngine::SearchEngine(const Instance& instance, const EncodedModel& model,
                           std::uint64_t seed) {
  num_families_ = instance.num_families();
  num_positions_.resize(num_families_);
  num_values_.resize(num_families_);
  value_offset_.resize(num_families_ + 1, 0);
  for (int f = 0; f < num_families_; ++f) {
    const Family& fam = instance.family(f);
    num_positions_[f] = fam.num_positions();
    num_values_[f] = fam.num_positions() + (fam.has_initial ? 0 : 1);
    value_offset_[f + 1] = value_offset_[f] + num_values_[f];
  }
  const int total_values = value_offset_[num_families_];
  matched_of_value_.assign(total_values, 0);
  value_placements_.resize(total_values);
  family_of_value_.resize(total_values);
  for (int f = 0; f < num_families_; ++f) {
    const Family& fam = instance.family(f);
    for (int v = 0; v < num_values_[f]; ++v) {
      family_of_value_[value_offset_[f] + v] = f;
      if (v < fam.num_positions()) {
        const auto& tuple = fam.preferences[v];
        matched_of_value_[value_offset_[f] + v] =
            static_cast<int>(std::count_if(tuple.begin(), tuple.end(),
                                           [](int d) { return d != kDummy; }));
      }
    }
  }

  // Slots.
  std::vector<int> slot_base(instance.num_daycares() + 1, 0);
  for (int d = 0; d < instance.num_daycares(); ++d) {
    const Daycare& daycare = instance.daycare(d);
    slot_base[d + 1] = slot_base[d] + static_cast<int>(daycare.groups.size());
    for (const GradeGroup& g : daycare.groups) slot_quota_.push_back(g.quota);
  }
  slot_entries_.resize(slot_quota_.size());

  // Placements.
  std::vector<int> placement_of_var(model.variables.size(), -1);
  family_placements_.resize(num_families_);
  for (int c = 0; c < instance.num_children(); ++c) {
    const int f = instance.child(c).family;
    for (const ChildDaycare& entry : model.child_daycares[c]) {
      if (entry.daycare == kDummy) continue;
      const int pl = static_cast<int>(placement_family_.size());
      placement_of_var[entry.variable] = pl;
      placement_family_.push_back(f);
      placement_slot_.push_back(slot_base[entry.daycare] +
                                instance.GroupOf(entry.daycare, c));
      placement_values_.emplace_back(entry.positions.begin(),
                                     entry.positions.end());
      placement_rank_.push_back(instance.daycare(entry.daycare).rank[c]);
      family_placements_[f].push_back(pl);
      for (Position p : entry.positions) {
        value_placements_[value_offset_[f] + p].push_back(pl);
      }
    }
  }
  placement_conditions_.resize(placement_family_.size());
  for (int gv = 0; gv < total_values; ++gv) {
    std::vector<int> seen;
    for (int pl : value_placements_[gv]) {
      const int s = placement_slot_[pl];
      if (std::find(seen.begin(), seen.end(), s) != seen.end()) continue;
      seen.push_back(s);
      slot_entries_[s].push_back({gv, family_of_value_[gv]});
    }
  }

  slot_placements_.resize(slot_quota_.size());
  for (int pl = 0; pl < static_cast<int>(placement_family_.size()); ++pl) {
    slot_placements_[placement_slot_[pl]].push_back({pl, placement_rank_[pl]});
  }
  for (auto& list : slot_placements_) {
    std::stable_sort(list.begin(), list.end(),
                     [](const SlotPlacement& a, const SlotPlacement& b) {
                       return a.rank < b.rank;
                     });
  }
  slot_proposal_pairs_.resize(slot_quota_.size());

  // Pairs and conditions.
  pair_offset_.resize(num_families_ + 1, 0);
  for (int f = 0; f < num_families_; ++f) {
    pair_offset_[f + 1] = pair_offset_[f] + num_positions_[f];
    for (Position p = 0; p < num_positions_[f]; ++p) {
      const int pair = static_cast<int>(pair_family_.size());
      pair_family_.push_back(f);
      pair_position_.push_back(p);
      pair_conditions_.emplace_back();
      pair_never_blocks_.push_back(0);
      pair_proposal_slot_.push_back(-1);
      pair_proposal_rank_.push_back(0);
      const auto& conditions = model.blocks[f][p].conditions;
      if (conditions.size() == 1 && conditions[0].applicants.size() == 1 &&
          conditions[0].quota > 0) {
        const GroupCondition& cond = conditions[0];
        const int slot = slot_base[cond.daycare] + cond.group;
        pair_proposal_slot_[pair] = slot;
        pair_proposal_rank_[pair] =
            instance.daycare(cond.daycare).rank[cond.applicants[0]];
        slot_proposal_pairs_[slot].push_back(pair);
      }
      for (const GroupCondition& cond : conditions) {
        const int need =
            cond.quota - static_cast<int>(cond.applicants.size()) + 1;
        if (need <= 0) {
          pair_never_blocks_[pair] = 1;
          continue;
        }
        const int k = static_cast<int>(condition_need_.size());
        condition_need_.push_back(need);
        condition_pair_.push_back(pair);
        condition_members_.emplace_back();
        for (int var : cond.counted) {
          const int pl = placement_of_var[var];
          condition_members_[k].push_back(pl);
          placement_conditions_[pl].push_back(k);
        }
        pair_conditions_[pair].push_back(k);
      }
    }
  }

  tie_key_.resize(num_families_);
  for (int f = 0; f < num_families_; ++f) {
    tie_key_[f] = SplitMix64(seed ^ SplitMix64(static_cast<std::uint64_t>(f)));
  }

  // Initial state.
  alive_.assign(total_values, 1);
  dom_size_ = num_values_;
  dom_min_.assign(num_families_, 0);
  dom_max_.resize(num_families_);
  max_matched_.resize(num_families_);
  for (int f = 0; f < num_families_; ++f) {
    dom_max_[f] = num_values_[f] - 1;
    int best = 0;
    for (int v = 0; v < num_values_[f]; ++v) {
      best = std::max(best, matched_of_value_[value_offset_[f] + v]);
    }
    max_matched_[f] = best;
    sum_max_matched_ += best;
    if (num_values_[f] == 1) ++fixed_families_;
  }
  const int num_placements = static_cast<int>(placement_family_.size());
  possible_count_.resize(num_placements);
  possible_.assign(num_placements, 1);
  certain_.assign(num_placements, 0);
  slot_lb_.assign(slot_quota_.size(), 0);
  slot_ub_.assign(slot_quota_.size(), 0);
  for (int pl = 0; pl < num_placements; ++pl) {
    possible_count_[pl] = static_cast<int>(placement_values_[pl].size());
    certain_[pl] = possible_count_[pl] == num_values_[placement_family_[pl]];
    ++slot_ub_[placement_slot_[pl]];
    if (certain_[pl]) ++slot_lb_[placement_slot_[pl]];
  }
  for (size_t s = 0; s < slot_quota_.size(); ++s) {
    capacity_bound_ += std::min(slot_quota_[s], slot_ub_[s]);
  }
  condition_ub_.resize(condition_need_.size());
  condition_lb_.resize(condition_need_.size());
  for (size_t k = 0; k < condition_need_.size(); ++k) {
    condition_ub_[k] = static_cast<int>(condition_members_[k].size());
    condition_lb_[k] = static_cast<int>(std::count_if(
        condition_members_[k].begin(), condition_members_[k].end(),
        [&](int pl) { return certain_[pl] != 0; }));
  }
  pair_blocks_.assign(pair_family_.size(), 0);
  pair_forbidden_.assign(pair_family_.size(), 0);
  pair_used_.assign(pair_family_.size(), 0);
  pair_core_.assign(pair_family_.size(), -1);
  slot_threshold_.assign(slot_quota_.size(), std::numeric_limits<int>::max());

  weight_.assign(num_families_, 1.0);
  family_queued_.assign(num_families_, 0);
  pair_queued_.assign(pair_family_.size(), 0);
  slot_queued_.assign(slot_quota_.size(), 0);
  proposal_queued_.assign(slot_quota_.size(), 0);
}

void SearchEngine::set_hint(const std::vector<Position>& positions) {
  hint_.assign(num_families_, -1);
  for (int f = 0; f < num_families_ && f < static_cast<int>(positions.size());
       ++f) {
    hint_[f] = ToValue(f, positions[f]);
  }
}

void SearchEngine::set_forbidden(const std::vector<char>& forbidden) {
  pair_forbidden_.assign(pair_family_.size(), 0);
  any_forbidden_ = 0;
  for (size_t i = 0; i < forbidden.size() && i < pair_forbidden_.size(); ++i) {
    pair_forbidden_[i] = forbidden[i] != 0;
    if (forbidden[i]) any_forbidden_ = 1;
  }
}

void SearchEngine::set_cores(const std::vector<std::vector<int>>& cores) {
  pair_core_.assign(pair_family_.size(), -1);
  for (size_t k = 0; k < cores.size(); ++k) {
    for (int pair : cores[k]) pair_core_[pair] = static_cast<int>(k);
  }
  core_committed_.assign(cores.size(), 0);
  core_allowed_.assign(cores.size(), -1);
  core_pairs_ = cores;
  blocking_lb_ = static_cast<int>(cores.size());
}

void SearchEngine::Undo(size_t mark) {
  while (trail_.size() > mark) {
    const TrailEntry& e = trail_.back();
    *e.slot = e.old;
    trail_.pop_back();
  }
}

void SearchEngine::Rollback(size_t mark) {
  Undo(mark);
  ClearQueues();
}

bool SearchEngine::Remove(int family, int value) {
  const int gv = value_offset_[family] + value;
  if (!alive_[gv]) return true;
  if (dom_size_[family] == 1) {
    Blame(family);
    return false;
  }
  Set(alive_[gv], 0);
  Set(dom_size_[family], dom_size_[family] - 1);
  if (dom_size_[family] == 1) Set(fixed_families_, fixed_families_ + 1);
  for (int pl : value_placements_[gv]) {
    Set(possible_count_[pl], possible_count_[pl] - 1);
  }
  const int base = value_offset_[family];
  if (value == dom_min_[family]) {
    int v = value + 1;
    while (!alive_[base + v]) ++v;
    Set(dom_min_[family], v);
    if (v < num_positions_[family]) {
      const int slot = pair_proposal_slot_[pair_offset_[family] + v];
      if (slot >= 0) MarkProposals(slot);
    }
  }
  if (value == dom_max_[family]) {
    int v = value - 1;
    while (!alive_[base + v]) --v;
    Set(dom_max_[family], v);
  }
  if (!family_queued_[family]) {
    family_queued_[family] = 1;
    family_queue_.push_back(family);
  }
  return true;
}

bool SearchEngine::RestrictTo(int family, int value) {
  for (int v = 0; v < num_values_[family]; ++v) {
    if (v != value && !Remove(family, v)) return false;
  }
  return alive_[value_offset_[family] + value] != 0;
}

bool SearchEngine::KeepOnly(int family, const std::vector<int>& values) {
  for (int v = dom_min_[family]; v <= dom_max_[family]; ++v) {
    if (!alive_[value_offset_[family] + v]) continue;
    if (std::binary_search(values.begin(), values.end(), v)) continue;
    if (!Remove(family, v)) return false;
  }
  return true;
}

bool SearchEngine::FixAtRoot(int family, int value) {
  const bool ok = RestrictTo(family, value);
  ClearQueues();
  return ok;
}

void SearchEngine::QueueAll() {
  ClearQueues();
  for (int f = 0; f < num_families_; ++f) {
    family_queued_[f] = 1;
    family_queue_.push_back(f);
  }
  for (int s = 0; s < static_cast<int>(slot_quota_.size()); ++s) {
    slot_queued_[s] = 1;
    slot_queue_.push_back(s);
  }
  MarkAllPairs();
  MarkAllProposals();
  objective_dirty_ = true;
}

bool SearchEngine::Settle(int budget, int target) {
  budget_ = budget;
  target_ = target;
  QueueAll();
  const bool ok = blocking_lb_ <= budget_ && Propagate();
  ClearQueues();
  return ok;
}

void SearchEngine::MarkPair(int pair) {
  if (pair_queued_[pair]) return;
  pair_queued_[pair] = 1;
  pair_queue_.push_back(pair);
}

void SearchEngine::MarkAllPairs() {
  for (int pair = 0; pair < static_cast<int>(pair_family_.size()); ++pair) {
    MarkPair(pair);
  }
}

void SearchEngine::MarkProposals(int slot) {
  if (proposal_queued_[slot]) return;
  proposal_queued_[slot] = 1;
  proposal_queue_.push_back(slot);
}

void SearchEngine::MarkAllProposals() {
  for (int s = 0; s < static_cast<int>(slot_quota_.size()); ++s) {
    if (!slot_proposal_pairs_[s].empty()) MarkProposals(s);
  }
}

void SearchEngine::ClearQueues() {
  for (int f : family_queue_) family_queued_[f] = 0;
  family_queue_.clear();
  for (int p : pair_queue_) pair_queued_[p] = 0;
  pair_queue_.clear();
  for (int s : slot_queue_) slot_queued_[s] = 0;
  slot_queue_.clear();
  for (int s : proposal_queue_) proposal_queued_[s] = 0;
  proposal_queue_.clear();
}

bool SearchEngine::RefreshFamily(int family) {
  const int size = dom_size_[family];
  for (int pl : family_placements_[family]) {
    const int count = possible_count_[pl];
    const int slot = placement_slot_[pl];
    if (possible_[pl] && count == 0) {
      Set(possible_[pl], 0);
      for (int k : placement_conditions_[pl]) {
        Set(condition_ub_[k], condition_ub_[k] - 1);
        MarkPair(condition_pair_[k]);
      }
      if (slot_ub_[slot] <= slot_quota_[slot]) {
        Set(capacity_bound_, capacity_bound_ - 1);
        objective_dirty_ = true;
      }
      Set(slot_ub_[slot], slot_ub_[slot] - 1);
    }
    if (!certain_[pl] && count == size) {
      Set(certain_[pl], 1);
      for (int k : placement_conditions_[pl]) {
        Set(condition_lb_[k], condition_lb_[k] + 1);
        MarkPair(condition_pair_[k]);
      }
      Set(slot_lb_[slot], slot_lb_[slot] + 1);
      if (!slot_queued_[slot]) {
        slot_queued_[slot] = 1;
        slot_queue_.push_back(slot);
      }
    }
  }
  int best = 0;
  const int base = value_offset_[family];
  for (int v = dom_min_[family]; v <= dom_max_[family]; ++v) {
    if (alive_[base + v]) best = std::max(best, matched_of_value_[base + v]);
  }
  if (best != max_matched_[family]) {
    Set(sum_max_matched_, sum_max_matched_ - max_matched_[family] + best);
    Set(max_matched_[family], best);
    objective_dirty_ = true;
  }
  for (int pair = pair_offset_[family]; pair < pair_offset_[family + 1];
       ++pair) {
    MarkPair(pair);
  }
  return true;
}

bool SearchEngine::CheckSlot(int slot) {
  const int quota = slot_quota_[slot];
  if (slot_lb_[slot] > quota) {
    for (const SlotEntry& entry : slot_entries_[slot]) Blame(entry.family);
    return false;
  }
  for (const SlotEntry& entry : slot_entries_[slot]) {
    if (!alive_[entry.value] || dom_size_[entry.family] == 1) continue;
    int extra = 0;
    for (int pl : value_placements_[entry.value]) {
      if (placement_slot_[pl] == slot && !certain_[pl]) ++extra;
    }
    if (extra > 0 && slot_lb_[slot] + extra > quota) {
      if (!Remove(entry.family, entry.value - value_offset_[entry.family])) {
        return false;
      }
    }
  }
  return true;
}

bool SearchEngine::CheckPair(int pair) {
  if (pair_never_blocks_[pair] || pair_blocks_[pair]) return true;
  const int f = pair_family_[pair];
  const int p = pair_position_[pair];
  if (dom_max_[f] <= p) return true;  // already holds p or better

  int live = 0;
  int last_live = -1;
  for (int k : pair_conditions_[pair]) {
    if (condition_lb_[k] >= condition_need_[k]) return true;  // no room
    if (condition_ub_[k] >= condition_need_[k]) {
      ++live;
      last_live = k;
    }
  }
  const bool worse = dom_min_[f] > p;
  if (worse && live == 0) {
    if (pair_forbidden_[pair]) {
      Blame(f);
      Use(pair);
      return false;
    }
    Set(pair_blocks_[pair], 1);
    const int core = pair_core_[pair];
    bool raises = true;
    if (core >= 0) {
      raises = core_committed_[core] > 0;
      Set(core_committed_[core], core_committed_[core] + 1);
      if (!raises && blocking_lb_ == budget_) {
        // The rest of this core just became tight.
        MarkAllPairs();
        MarkAllProposals();
      }
    }
    if (raises) {
      Set(blocking_lb_, blocking_lb_ + 1);
      if (blocking_lb_ > budget_) {
        Blame(f);
        Use(pair);
        return false;
      }
      if (blocking_lb_ == budget_) {
        MarkAllPairs();
        MarkAllProposals();
      }
    }
    return true;
  }
  if (!Tight(pair)) return true;

  // No further blocking pair is allowed.
  if (live == 0) {
    Use(pair);
    for (int v = p + 1; v < num_values_[f]; ++v) {
      if (!Remove(f, v)) return false;
    }
    return true;
  }
  if (worse && live == 1 &&
      condition_ub_[last_live] == condition_need_[last_live]) {
    const size_t mark = trail_.size();
    for (int pl : condition_members_[last_live]) {
      if (possible_[pl] && !certain_[pl]) {
        if (!KeepOnly(placement_family_[pl], placement_values_[pl])) {
          Use(pair);
          return false;
        }
      }
    }
    if (trail_.size() != mark) Use(pair);
  }
  return true;
}

bool SearchEngine::CheckProposals(int slot) {
  if (blocking_lb_ < budget_ && !any_forbidden_) return true;
  const int quota = slot_quota_[slot];
  proposal_ranks_.clear();
  for (int pair : slot_proposal_pairs_[slot]) {
    if (dom_min_[pair_family_[pair]] == pair_position_[pair] &&
        !pair_blocks_[pair] && Tight(pair)) {
      proposal_ranks_.push_back(pair_proposal_rank_[pair]);
    }
  }
  if (static_cast<int>(proposal_ranks_.size()) < quota) return true;
  std::nth_element(proposal_ranks_.begin(), proposal_ranks_.begin() + quota - 1,
                   proposal_ranks_.end());
  const int threshold = proposal_ranks_[quota - 1];
  const int previous = slot_threshold_[slot];
  if (threshold >= previous) return true;
  Set(slot_threshold_[slot], threshold);
  for (int pair : slot_proposal_pairs_[slot]) {
    if (dom_min_[pair_family_[pair]] == pair_position_[pair] &&
        !pair_blocks_[pair] && Tight(pair) &&
        pair_proposal_rank_[pair] <= threshold) {
      Use(pair);
    }
  }
  // The group fills with children ranked <= threshold; everyone ranked
  // below it is out.
  const auto& list = slot_placements_[slot];
  auto it = std::upper_bound(
      list.begin(), list.end(), threshold,
      [](int r, const SlotPlacement& sp) { return r < sp.rank; });
  for (; it != list.end() && it->rank <= previous; ++it) {
    const int pl = it->placement;
    if (!possible_[pl]) continue;
    for (int v : placement_values_[pl]) {
      if (!Remove(placement_family_[pl], v)) return false;
    }
  }
  return true;
}

bool SearchEngine::CheckObjective() {
  objective_dirty_ = false;
  if (target_ <= 0) return true;
  if (sum_max_matched_ < target_ || capacity_bound_ < target_) return false;
  const int slack = sum_max_matched_ - target_;
  for (int f = 0; f < num_families_; ++f) {
    if (dom_size_[f] == 1 || max_matched_[f] <= slack) continue;
    const int base = value_offset_[f];
    for (int v = dom_min_[f]; v <= dom_max_[f]; ++v) {
      if (alive_[base + v] &&
          max_matched_[f] - matched_of_value_[base + v] > slack) {
        if (!Remove(f, v)) return false;
      }
    }
  }
  return true;
}

bool SearchEngine::Propagate() {
  while (true) {
    if (!family_queue_.empty()) {
      const int f = family_queue_.back();
      family_queue_.pop_back();
      family_queued_[f] = 0;
      if (!RefreshFamily(f)) return false;
      continue;
    }
    if (!slot_queue_.empty()) {
      const int s = slot_queue_.back();
      slot_queue_.pop_back();
      slot_queued_[s] = 0;
      if (!CheckSlot(s)) return false;
      continue;
    }
    if (!pair_queue_.empty()) {
      const int pair = pair_queue_.back();
      pair_queue_.pop_back();
      pair_queued_[pair] = 0;
      if (!CheckPair(pair)) return false;
      continue;
    }
    if (!proposal_queue_.empty()) {
      const int slot = proposal_queue_.back();
      proposal_queue_.pop_back();
      proposal_queued_[slot] = 0;
      if (!CheckProposals(slot)) return false;
      continue;
    }
    if (objective_dirty_) {
      if (!CheckObjective()) return false;
      continue;
    }
    return true;
  }
}

bool SearchEngine::TimeUp() {
  if (aborted_) return true;
  if (node_limit_ && nodes_ - query_start_ >= *node_limit_) {
    aborted_ = true;
    return true;
  }
  if (!deadline_) return false;
  aborted_ = Clock::now() >= *deadline_;
  return aborted_;
}

bool SearchEngine::PairLive(int pair) const {
  if (pair_never_blocks_[pair] || pair_blocks_[pair]) return false;
  if (dom_max_[pair_family_[pair]] <= pair_position_[pair]) return false;
  for (int k : pair_conditions_[pair]) {
    if (condition_lb_[k] >= condition_need_[k]) return false;
  }
  return true;
}

int SearchEngine::ChooseCore(std::vector<int>& options) const {
  if (blocking_lb_ != budget_) return -1;
  int best = -1;
  std::vector<int> live;
  for (int k = 0; k < static_cast<int>(core_pairs_.size()); ++k) {
    if (core_committed_[k] > 0 || core_allowed_[k] >= 0) continue;
    live.clear();
    for (int pair : core_pairs_[k]) {
      if (PairLive(pair)) live.push_back(pair);
    }
    // Some pair of every core blocks.
    if (live.empty()) return kCoreConflict;
    if (best < 0 || live.size() < options.size()) {
      best = k;
      options.swap(live);
    }
  }
  if (best >= 0 && !hint_.empty()) {
    // Pairs the hint leaves blocking-prone come first.
    std::stable_partition(options.begin(), options.end(), [&](int pair) {
      return hint_[pair_family_[pair]] > pair_position_[pair];
    });
  }
  return best;
}

void SearchEngine::Allow(int core, int pair) {
  Set(core_allowed_[core], pair);
  for (int other : core_pairs_[core]) {
    MarkPair(other);
    const int slot = pair_proposal_slot_[other];
    if (slot >= 0) MarkProposals(slot);
  }
}

int SearchEngine::ChooseFamily() const {
  int best = -1;
  for (int f = 0; f < num_families_; ++f) {
    if (dom_size_[f] == 1) continue;
    // Smallest domain per conflict weight.
    if (best < 0) {
      best = f;
      continue;
    }
    const double lhs = dom_size_[f] * weight_[best];
    const double rhs = dom_size_[best] * weight_[f];
    if (lhs < rhs || (lhs == rhs && tie_key_[f] < tie_key_[best])) best = f;
  }
  return best;
}

std::vector<Position> SearchEngine::Extract() const {
  std::vector<Position> positions(num_families_);
  for (int f = 0; f < num_families_; ++f) {
    positions[f] = ToPosition(f, dom_min_[f]);
  }
  return positions;
}

QueryStatus SearchEngine::Search(int budget, int target,
                                 const SolutionCallback& on_solution) {
  const size_t root_mark = trail_.size();
  budget_ = budget;
  target_ = target;
  aborted_ = false;
  query_start_ = nodes_;
  for (int pair : used_) pair_used_[pair] = 0;
  used_.clear();
  QueueAll();

  // A family frame tried `value` for `family`; a core frame allowed
  // options[value] to be the one blocking pair of `core`.
  struct Frame {
    int family;
    int value;
    size_t mark;
    int epoch;
    int core = -1;
    std::vector<int> options;
  };
  std::vector<Frame> stack;
  std::vector<int> options;
  int epoch = 0;
  QueryStatus status = QueryStatus::kExhausted;
  bool ok = blocking_lb_ <= budget_ && Propagate();
  while (true) {
    // Every propagated node counts, failed ones included.
    ++nodes_;
    if (TimeUp()) {
      status = QueryStatus::kAborted;
      break;
    }
    if (ok) {
      const int core = ChooseCore(options);
      if (core == kCoreConflict) {
        ok = false;
        continue;
      }
      if (core >= 0) {
        Frame frame{-1, 0, trail_.size(), epoch, core, std::move(options)};
        options = {};
        Allow(core, frame.options[0]);
        stack.push_back(std::move(frame));
        ok = Propagate();
        continue;
      }
      const int f = ChooseFamily();
      if (f < 0) {
        const int old_budget = budget_;
        const int old_target = target_;
        if (!on_solution(Extract())) {
          status = QueryStatus::kFound;
          break;
        }
        if (budget_ != old_budget || target_ != old_target) ++epoch;
        ok = false;
        continue;
      }
      int value = dom_min_[f];
      if (!hint_.empty() && hint_[f] >= 0 &&
          alive_[value_offset_[f] + hint_[f]]) {
        value = hint_[f];
      }
      stack.push_back({f, value, trail_.size(), epoch, -1, {}});
      ok = RestrictTo(f, value) && Propagate();
      continue;
    }
    ClearQueues();
    if (stack.empty()) break;
    Frame frame = std::move(stack.back());
    stack.pop_back();
    Undo(frame.mark);
    if (frame.epoch != epoch) {
      // Bounds moved since this node was propagated.
      MarkAllPairs();
      MarkAllProposals();
      objective_dirty_ = true;
      for (Frame& fr : stack) fr.epoch = -1;
      frame.epoch = epoch;
    }
    if (frame.core >= 0) {
      if (++frame.value == static_cast<int>(frame.options.size())) continue;
      Allow(frame.core, frame.options[frame.value]);
      stack.push_back(std::move(frame));
      ok = Propagate();
      continue;
    }
    ok = Remove(frame.family, frame.value) && Propagate();
  }
  Undo(root_mark);
  ClearQueues();
  return status;
}

}  // namespace daycare::internal
