#include "support/random_market.h"

#include <algorithm>
#include <map>
#include <set>
#include <string>

#include "daycare/validate.h"
#include "support/reference.h"

namespace daycare::testing {

int Uniform(std::mt19937_64& rng, int lo, int hi) {
  return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

namespace {

bool Chance(std::mt19937_64& rng, double p) {
  return static_cast<double>(rng() % 1'000'000) < p * 1'000'000.0;
}

template <typename T>
void ShuffleVector(std::vector<T>& v, std::mt19937_64& rng) {
  for (int i = static_cast<int>(v.size()) - 1; i > 0; --i) {
    std::swap(v[i], v[Uniform(rng, 0, i)]);
  }
}

}  // namespace

InstanceDocument RandomDocument(const MarketShape& shape,
                                std::mt19937_64& rng) {
  InstanceDocument doc;
  doc.mode = shape.ties ? PriorityMode::kIndifference : PriorityMode::kStrict;
  const int n_grades = Uniform(rng, 1, shape.max_grades);
  const int n_daycares = Uniform(rng, 1, shape.max_daycares);
  const int n_families = Uniform(rng, 1, shape.max_families);
  for (int g = 0; g < n_grades; ++g)
    doc.grades.push_back("g" + std::to_string(g));

  // Grade groups: contiguous runs cut at random points.
  std::vector<std::map<std::string, int>> quotas(n_daycares);
  std::vector<std::vector<std::vector<std::string>>> groups(n_daycares);
  for (int d = 0; d < n_daycares; ++d) {
    std::vector<std::string> run;
    for (int g = 0; g < n_grades; ++g) {
      quotas[d][doc.grades[g]] = Uniform(rng, 0, 2);
      run.push_back(doc.grades[g]);
      if (g + 1 == n_grades || Chance(rng, 0.5)) {
        groups[d].push_back(run);
        run.clear();
      }
    }
  }

  // Families, children and initial enrollments that fit the quotas.
  std::vector<std::map<int, int>> seats_used(n_daycares);  // group -> count
  auto group_of = [&](int d, const std::string& grade) {
    for (size_t i = 0; i < groups[d].size(); ++i) {
      const auto& members = groups[d][i];
      if (std::find(members.begin(), members.end(), grade) != members.end()) {
        return static_cast<int>(i);
      }
    }
    return -1;
  };
  auto pooled = [&](int d, int group) {
    int q = 0;
    for (const auto& grade : groups[d][group]) q += quotas[d][grade];
    return q;
  };

  int child_counter = 0;
  std::vector<std::vector<std::string>> incumbents(n_daycares);
  for (int f = 0; f < n_families; ++f) {
    InstanceDocument::FamilyEntry family;
    family.id = "f" + std::to_string(f + 1);
    int k = 1;
    if (shape.max_siblings >= 2 && Chance(rng, 0.35)) k = 2;
    if (k == 2 && shape.max_siblings >= 3 && Chance(rng, 0.2)) k = 3;
    for (int i = 0; i < k; ++i) {
      family.children.push_back({"c" + std::to_string(++child_counter),
                                 doc.grades[Uniform(rng, 0, n_grades - 1)]});
    }

    std::vector<std::string> initial(k, kDummyId);
    if (Chance(rng, shape.initial_prob)) {
      for (int i = 0; i < k; ++i) {
        if (i > 0 && Chance(rng, 0.3)) continue;
        const int d = Uniform(rng, 0, n_daycares - 1);
        const int g = group_of(d, family.children[i].grade);
        if (seats_used[d][g] < pooled(d, g)) {
          ++seats_used[d][g];
          initial[i] = "d" + std::to_string(d + 1);
          incumbents[d].push_back(family.children[i].id);
        }
      }
    }
    const bool has_initial =
        std::any_of(initial.begin(), initial.end(),
                    [](const std::string& id) { return id != kDummyId; });

    std::set<std::vector<std::string>> seen;
    if (has_initial) seen.insert(initial);
    const int n_tuples = Uniform(rng, 1, shape.max_tuples);
    for (int attempt = 0;
         attempt < 50 && static_cast<int>(family.preferences.size()) < n_tuples;
         ++attempt) {
      std::vector<std::string> tuple;
      const bool together = k > 1 && Chance(rng, 0.5);
      const std::string shared =
          "d" + std::to_string(Uniform(rng, 1, n_daycares));
      for (int i = 0; i < k; ++i) {
        if (Chance(rng, shape.dummy_entry_prob)) {
          tuple.push_back(kDummyId);
        } else if (together) {
          tuple.push_back(shared);
        } else {
          tuple.push_back("d" + std::to_string(Uniform(rng, 1, n_daycares)));
        }
      }
      if (std::all_of(tuple.begin(), tuple.end(),
                      [](const std::string& id) { return id == kDummyId; })) {
        continue;
      }
      if (!seen.insert(tuple).second) continue;
      family.preferences.push_back(tuple);
    }
    if (has_initial) {
      family.initial = initial;
      family.preferences.push_back(initial);
    }
    if (family.preferences.empty()) {
      family.preferences.push_back(std::vector<std::string>(k, "d1"));
    }
    doc.families.push_back(std::move(family));
  }

  // Priorities: incumbents first, then everyone else, each block shuffled.
  std::vector<std::string> all_children;
  for (const auto& family : doc.families) {
    for (const auto& child : family.children) all_children.push_back(child.id);
  }
  for (int d = 0; d < n_daycares; ++d) {
    InstanceDocument::DaycareEntry daycare;
    daycare.id = "d" + std::to_string(d + 1);
    daycare.quotas = quotas[d];
    daycare.grade_groups = groups[d];
    std::vector<std::string> head = incumbents[d];
    std::vector<std::string> tail;
    for (const auto& id : all_children) {
      if (std::find(head.begin(), head.end(), id) == head.end()) {
        tail.push_back(id);
      }
    }
    ShuffleVector(head, rng);
    ShuffleVector(tail, rng);
    for (const auto* block : {&head, &tail}) {
      std::vector<std::string> tie_class;
      for (const auto& id : *block) {
        tie_class.push_back(id);
        if (!shape.ties || Chance(rng, 0.5)) {
          daycare.priority.push_back(tie_class);
          tie_class.clear();
        }
      }
      if (!tie_class.empty()) daycare.priority.push_back(tie_class);
    }
    doc.daycares.push_back(std::move(daycare));
  }
  return doc;
}

Instance RandomInstance(const MarketShape& shape, std::mt19937_64& rng) {
  return ValidateOrThrow(RandomDocument(shape, rng));
}

std::vector<Position> RandomFeasiblePositions(const Instance& instance,
                                              std::mt19937_64& rng) {
  std::vector<Position> positions(instance.num_families());
  for (int attempt = 0; attempt < 200; ++attempt) {
    for (int f = 0; f < instance.num_families(); ++f) {
      const Family& family = instance.family(f);
      const int options = family.num_positions() + (family.has_initial ? 0 : 1);
      const int pick = Uniform(rng, 0, options - 1);
      positions[f] = pick < family.num_positions() ? pick : kUnmatched;
    }
    if (ref::Feasible(instance, positions)) return positions;
  }
  for (int f = 0; f < instance.num_families(); ++f) {
    const Family& family = instance.family(f);
    positions[f] = family.has_initial ? family.num_positions() - 1 : kUnmatched;
  }
  return positions;
}

}  // namespace daycare::testing
