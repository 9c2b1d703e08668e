#include "daycare/synthgen.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "daycare/error.h"
#include "daycare/validate.h"

namespace daycare {
namespace {

// Small self-contained generator so that instances are identical across
// standard libraries (std distributions are implementation-defined).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t Next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, n).
  int Below(int n) {
    const std::uint64_t bound = static_cast<std::uint64_t>(n);
    const std::uint64_t limit = ~0ULL - (~0ULL % bound);
    std::uint64_t x;
    do {
      x = Next();
    } while (x >= limit);
    return static_cast<int>(x % bound);
  }

  // Uniform in [lo, hi].
  int Range(int lo, int hi) { return lo + Below(hi - lo + 1); }

  // Uniform in [0, 1).
  double Real() { return static_cast<double>(Next() >> 11) * 0x1.0p-53; }

  bool Chance(double p) { return Real() < p; }

  double Normal() {
    const double u1 = 1.0 - Real();
    const double u2 = Real();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }

  template <typename T>
  void Shuffle(std::vector<T>& items) {
    for (int i = static_cast<int>(items.size()) - 1; i > 0; --i) {
      std::swap(items[i], items[Below(i + 1)]);
    }
  }

 private:
  std::uint64_t state_;
};

std::uint64_t Mix(std::uint64_t a, std::uint64_t b) {
  Rng rng(a ^ (b * 0x9e3779b97f4a7c15ULL));
  rng.Next();
  return rng.Next();
}

// k distinct indices drawn without replacement with probability
// proportional to `weights`.
std::vector<int> WeightedSample(Rng& rng, const std::vector<double>& weights,
                                int k) {
  std::vector<std::pair<double, int>> keys;
  keys.reserve(weights.size());
  for (size_t i = 0; i < weights.size(); ++i) {
    const double u = 1.0 - rng.Real();
    keys.emplace_back(-std::log(u) / weights[i], static_cast<int>(i));
  }
  std::sort(keys.begin(), keys.end());
  std::vector<int> out;
  for (int i = 0; i < k && i < static_cast<int>(keys.size()); ++i) {
    out.push_back(keys[i].second);
  }
  return out;
}

std::string DaycareId(int d) { return "d" + std::to_string(d + 1); }

}  // namespace

GenParams Preset(const std::string& name) {
  GenParams p;
  if (name == "small") {
    p.n_families = 6;
    p.n_daycares = 3;
    p.n_grades = 3;
    p.quota_min = 0;
    p.quota_max = 2;
    p.max_tuples = 3;
    p.share_one = 0.6;
    p.share_two = 0.3;
    p.share_three = 0.1;
  } else if (name == "tama-like") {
    p.n_families = 480;
    p.n_daycares = 33;
    p.quota_min = 1;
    p.quota_max = 5;
  } else if (name == "shibuya-like") {
    p.n_families = 1110;
    p.n_daycares = 50;
    p.quota_min = 2;
    p.quota_max = 7;
  } else if (name == "large") {
    p.n_families = 1360;
    p.n_daycares = 86;
    p.quota_min = 1;
    p.quota_max = 5;
  } else {
    throw InvalidArgument("unknown preset '" + name + "'");
  }
  return p;
}

std::vector<std::string> PresetNames() {
  return {"small", "tama-like", "shibuya-like", "large"};
}

void CheckParams(const GenParams& p) {
  auto fail = [](const std::string& message) {
    throw InvalidArgument("generator parameters: " + message);
  };
  auto probability = [&](double x, const char* name) {
    if (!(x >= 0.0 && x <= 1.0)) {
      fail(std::string(name) + " must lie in [0, 1]");
    }
  };
  if (p.n_families < 0) fail("n_families must be >= 0");
  if (p.n_daycares < 0) fail("n_daycares must be >= 0");
  if (p.n_families > 0 && p.n_daycares == 0) {
    fail("families need at least one daycare");
  }
  if (p.n_grades < 1) fail("n_grades must be >= 1");
  if (p.quota_min < 0 || p.quota_max < p.quota_min) {
    fail("quota range must satisfy 0 <= quota_min <= quota_max");
  }
  if (p.share_one < 0 || p.share_two < 0 || p.share_three < 0 ||
      p.share_one + p.share_two + p.share_three <= 0) {
    fail("family-size shares must be non-negative with a positive sum");
  }
  probability(p.transferable_group_prob, "transferable_group_prob");
  probability(p.initial_share, "initial_share");
  probability(p.same_daycare_bias, "same_daycare_bias");
  probability(p.priority_correlation, "priority_correlation");
  probability(p.tie_prob, "tie_prob");
  if (p.popularity_spread < 0) fail("popularity_spread must be >= 0");
  if (p.min_tuples < 1 || p.max_tuples < p.min_tuples) {
    fail("tuple range must satisfy 1 <= min_tuples <= max_tuples");
  }
  if (p.max_tie_class < 1) fail("max_tie_class must be >= 1");
  const double capacity =
      static_cast<double>(p.quota_max) * p.n_grades * p.n_daycares;
  if (p.initial_share * p.n_families > capacity) {
    fail("initial-enrollment share exceeds total capacity");
  }
}

InstanceDocument GenerateDocument(const GenParams& p) {
  CheckParams(p);
  Rng rng(p.seed);
  InstanceDocument doc;
  doc.mode = p.mode;
  for (int g = 0; g < p.n_grades; ++g) doc.grades.push_back(std::to_string(g));

  // Daycares: quotas and grade groups.
  std::vector<std::vector<int>> group_of(p.n_daycares,
                                         std::vector<int>(p.n_grades));
  std::vector<std::vector<int>> room(p.n_daycares);
  long total_capacity = 0;
  for (int d = 0; d < p.n_daycares; ++d) {
    InstanceDocument::DaycareEntry entry;
    entry.id = DaycareId(d);
    std::vector<int> quota(p.n_grades);
    for (int g = 0; g < p.n_grades; ++g) {
      quota[g] = rng.Range(p.quota_min, p.quota_max);
      entry.quotas[doc.grades[g]] = quota[g];
      total_capacity += quota[g];
    }
    const bool pooled = rng.Chance(p.transferable_group_prob);
    for (int g = 0; g < p.n_grades; ++g) {
      const bool start = g == 0 || !pooled || rng.Chance(0.5);
      if (start) {
        entry.grade_groups.emplace_back();
        room[d].push_back(0);
      }
      entry.grade_groups.back().push_back(doc.grades[g]);
      group_of[d][g] = static_cast<int>(room[d].size()) - 1;
      room[d].back() += quota[g];
    }
    doc.daycares.push_back(std::move(entry));
  }
  if (p.initial_share > 0 && p.n_families > 0 && total_capacity == 0) {
    throw InvalidArgument(
        "generator parameters: initial enrollments need positive capacity");
  }

  std::vector<double> popularity(p.n_daycares);
  for (double& w : popularity) w = std::exp(p.popularity_spread * rng.Normal());

  const double share_sum = p.share_one + p.share_two + p.share_three;
  struct Kid {
    std::string id;
    int grade;
    int initial;  // daycare index or -1
    double score;
  };
  std::vector<Kid> kids;
  std::vector<std::vector<int>> family_kids;

  for (int f = 0; f < p.n_families; ++f) {
    InstanceDocument::FamilyEntry fam;
    fam.id = "f" + std::to_string(f + 1);
    const double u = rng.Real() * share_sum;
    const int size = u < p.share_one                 ? 1
                     : u < p.share_one + p.share_two ? 2
                                                     : 3;
    std::vector<int> members;
    for (int i = 0; i < size; ++i) {
      Kid kid;
      kid.id = "c" + std::to_string(kids.size() + 1);
      kid.grade = rng.Below(p.n_grades);
      kid.initial = -1;
      kid.score = rng.Normal();
      members.push_back(static_cast<int>(kids.size()));
      fam.children.push_back({kid.id, doc.grades[kid.grade]});
      kids.push_back(std::move(kid));
    }

    // Initial enrollment, only where the group still has room.
    bool enrolled = false;
    if (rng.Chance(p.initial_share)) {
      const int home = WeightedSample(rng, popularity, 1)[0];
      const int forced = rng.Below(size);
      for (int i = 0; i < size; ++i) {
        if (i != forced && !rng.Chance(0.5)) continue;
        Kid& kid = kids[members[i]];
        std::vector<int> candidates = {home};
        for (int k = 0; k < 3; ++k)
          candidates.push_back(rng.Below(p.n_daycares));
        for (int d : candidates) {
          int& left = room[d][group_of[d][kid.grade]];
          if (left > 0) {
            --left;
            kid.initial = d;
            enrolled = true;
            break;
          }
        }
      }
    }
    std::vector<std::string> omega;
    if (enrolled) {
      for (int k : members) {
        omega.push_back(kids[k].initial < 0 ? kDummyId
                                            : DaycareId(kids[k].initial));
      }
      fam.initial = omega;
    }

    // Preference tuples.
    const int wanted = rng.Range(p.min_tuples, p.max_tuples);
    const std::vector<int> pool =
        WeightedSample(rng, popularity, std::min(p.n_daycares, wanted + 1));
    std::set<std::vector<std::string>> seen;
    if (enrolled) seen.insert(omega);
    int next = 0;
    for (int attempt = 0; attempt < 4 * wanted &&
                          static_cast<int>(fam.preferences.size()) < wanted;
         ++attempt) {
      std::vector<std::string> tuple;
      if (size == 1 || rng.Chance(p.same_daycare_bias)) {
        const std::string d =
            DaycareId(pool[next++ % static_cast<int>(pool.size())]);
        tuple.assign(size, d);
        // Enrolled siblings usually keep their seat.
        for (int i = 0; i < size; ++i) {
          if (size > 1 && kids[members[i]].initial >= 0 && rng.Chance(0.5)) {
            tuple[i] = DaycareId(kids[members[i]].initial);
          }
        }
      } else {
        for (int i = 0; i < size; ++i) {
          const Kid& kid = kids[members[i]];
          if (kid.initial >= 0 && rng.Chance(0.7)) {
            tuple.push_back(DaycareId(kid.initial));
          } else if (rng.Chance(0.1)) {
            tuple.push_back(kDummyId);
          } else {
            tuple.push_back(
                DaycareId(pool[rng.Below(static_cast<int>(pool.size()))]));
          }
        }
      }
      if (std::all_of(tuple.begin(), tuple.end(),
                      [](const std::string& d) { return d == kDummyId; })) {
        continue;
      }
      if (!seen.insert(tuple).second) continue;
      fam.preferences.push_back(std::move(tuple));
    }
    if (enrolled) fam.preferences.push_back(omega);
    family_kids.push_back(members);
    doc.families.push_back(std::move(fam));
  }

  // Priorities: a shared score blended with daycare-specific noise;
  // incumbents first.
  const double rho = p.priority_correlation;
  const double noise = std::sqrt(std::max(0.0, 1.0 - rho * rho));
  std::vector<std::set<int>> named(p.n_daycares);
  for (int f = 0; f < p.n_families; ++f) {
    const auto& fam = doc.families[f];
    for (const auto& tuple : fam.preferences) {
      for (size_t i = 0; i < tuple.size(); ++i) {
        if (tuple[i] == kDummyId) continue;
        named[std::stoi(tuple[i].substr(1)) - 1].insert(family_kids[f][i]);
      }
    }
  }
  for (int d = 0; d < p.n_daycares; ++d) {
    std::vector<std::pair<double, int>> incumbents;
    std::vector<std::pair<double, int>> newcomers;
    for (int k : named[d]) {
      const double key = rho * kids[k].score + noise * rng.Normal();
      (kids[k].initial == d ? incumbents : newcomers).emplace_back(-key, k);
    }
    std::sort(incumbents.begin(), incumbents.end());
    std::sort(newcomers.begin(), newcomers.end());
    auto& priority = doc.daycares[d].priority;
    for (const auto* block : {&incumbents, &newcomers}) {
      size_t i = 0;
      while (i < block->size()) {
        std::vector<std::string> cls = {kids[(*block)[i].second].id};
        ++i;
        if (p.mode == PriorityMode::kIndifference) {
          while (i < block->size() &&
                 static_cast<int>(cls.size()) < p.max_tie_class &&
                 rng.Chance(p.tie_prob)) {
            cls.push_back(kids[(*block)[i].second].id);
            ++i;
          }
        }
        priority.push_back(std::move(cls));
      }
    }
  }
  return doc;
}

Instance Generate(const GenParams& params) {
  return ValidateOrThrow(GenerateDocument(params));
}

Instance TieBreak(const Instance& instance, std::uint64_t seed) {
  InstanceDocument doc = ToDocument(instance);
  doc.mode = PriorityMode::kStrict;
  for (size_t d = 0; d < doc.daycares.size(); ++d) {
    Rng rng(Mix(seed, d));
    std::vector<std::vector<std::string>> strict;
    for (auto cls : doc.daycares[d].priority) {
      rng.Shuffle(cls);
      for (auto& id : cls) strict.push_back({std::move(id)});
    }
    doc.daycares[d].priority = std::move(strict);
  }
  ValidationOptions lenient;
  lenient.allow_overfull_initial = true;
  lenient.allow_unprioritized_incumbents = true;
  return ValidateOrThrow(doc, lenient);
}

}  // namespace daycare
