// Acceptance run: one PASS/FAIL line per criterion; exits non-zero when any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "daycare/choice.h"
#include "daycare/encoding.h"
#include "daycare/error.h"
#include "daycare/io.h"
#include "daycare/solver.h"
#include "daycare/stability.h"
#include "daycare/synthgen.h"
#include "daycare/validate.h"
#include "support/fixtures.h"
#include "support/random_market.h"
#include "support/reference.h"

namespace daycare {
namespace {

using Clock = std::chrono::steady_clock;

double MillisSince(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start)
      .count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::vector<Position> PositionsOf(const Matching& matching) {
  return {matching.positions().begin(), matching.positions().end()};
}

std::vector<std::string> Names(const Instance& instance,
                               const std::vector<int>& daycares) {
  std::vector<std::string> names;
  for (int d : daycares) names.push_back(instance.DaycareName(d));
  return names;
}

Outcome ChoiceFixture() {
  const Instance instance = testing::LoadInstance("example3.json");
  std::vector<int> applicants(instance.num_children());
  for (int c = 0; c < instance.num_children(); ++c) applicants[c] = c;
  const auto start = Clock::now();
  const ChoiceResult result = Choose(instance, 0, applicants);
  const double ms = MillisSince(start);
  std::vector<int> chosen = result.chosen;
  std::sort(chosen.begin(), chosen.end());
  const std::vector<int> expected = {instance.ChildIndex("c1"),
                                     instance.ChildIndex("c3"),
                                     instance.ChildIndex("c4")};
  std::ostringstream detail;
  detail << "chosen={";
  for (size_t i = 0; i < chosen.size(); ++i) {
    detail << (i ? "," : "") << instance.child(chosen[i]).id;
  }
  detail << "} time=" << ms << "ms";
  return {chosen == expected && ms < 1.0, detail.str()};
}

Outcome ProjectionFixture() {
  const Instance instance = testing::LoadInstance("example1.json");
  const auto projected = ProjectPreferences(instance.family(0));
  const std::vector<std::string> c1 = {"d1", "d2", "d1", "d2", "d0", "d0"};
  const std::vector<std::string> c2 = {"d1", "d2", "d0", "d0", "d1", "d2"};
  const bool ok = projected.size() == 2 &&
                  Names(instance, projected[0]) == c1 &&
                  Names(instance, projected[1]) == c2;
  std::ostringstream detail;
  for (size_t i = 0; i < projected.size(); ++i) {
    detail << instance.child(instance.family(0).children[i]).id << "=(";
    const auto names = Names(instance, projected[i]);
    for (size_t j = 0; j < names.size(); ++j) {
      detail << (j ? "," : "") << names[j];
    }
    detail << ") ";
  }
  return {ok, detail.str()};
}

Outcome StabilityFixtures() {
  const Instance instance = testing::LoadInstance("example4.json");
  const Matching mu1 = testing::LoadMatching("example4_mu1.json", instance);
  const Matching mu2 = testing::LoadMatching("example4_mu2.json", instance);
  const auto b1 = EnumerateBlocking(instance, mu1);
  const auto b2 = EnumerateBlocking(instance, mu2);
  const int f2 = instance.FamilyIndex("f2");
  const bool ok1 =
      b1.size() == 1 && b1[0].family == f2 && b1[0].position == 1 &&
      b1[0].kind == BlockKind::kJustifiedEnvy &&
      b1[0].displaced == std::vector<int>{instance.ChildIndex("c2")};
  const bool ok2 = b2.size() == 1 && b2[0].family == f2 &&
                   b2[0].position == 0 && b2[0].kind == BlockKind::kWaste &&
                   b2[0].displaced.empty();
  std::ostringstream detail;
  detail << "mu1 blocks=" << b1.size() << " mu2 blocks=" << b2.size();
  if (!b1.empty()) {
    detail << " mu1[0]=(f" << b1[0].family + 1 << ",pos " << b1[0].position + 1
           << "," << BlockKindName(b1[0].kind) << ")";
  }
  if (!b2.empty()) {
    detail << " mu2[0]=(f" << b2[0].family + 1 << ",pos " << b2[0].position + 1
           << "," << BlockKindName(b2[0].kind) << ")";
  }
  return {ok1 && ok2, detail.str()};
}

Outcome NoStableMatching() {
  const Instance instance = testing::LoadInstance("example4.json");
  const auto start = Clock::now();
  const SolveResult result = Solve(instance);
  const double ms = MillisSince(start);
  const SolveResult oracle = BruteForceOracle(instance);
  const ref::Optimum independent = ref::BruteForce(instance);
  const Matching mu1 = testing::LoadMatching("example4_mu1.json", instance);
  const bool ok = result.theta == 1 && result.matched_children == 2 &&
                  result.optimality == Optimality::kProvenOptimal &&
                  result.matching == mu1 && oracle.theta == 1 &&
                  oracle.matched_children == 2 && oracle.matching == mu1 &&
                  independent.theta == 1 && independent.matched == 2 &&
                  ms < 1000.0;
  std::ostringstream detail;
  detail << "theta=" << result.theta << " matched=" << result.matched_children
         << " mu1=" << (result.matching == mu1 ? "yes" : "no") << " oracle=("
         << oracle.theta << "," << oracle.matched_children << ") time=" << ms
         << "ms";
  return {ok, detail.str()};
}

Outcome Bridge() {
  const auto start = Clock::now();
  std::mt19937_64 rng(2024);
  testing::MarketShape shape;
  shape.max_families = 6;
  shape.max_daycares = 4;
  shape.max_grades = 3;
  int cases = 0;
  int agree = 0;
  int with_blocks = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    shape.ties = trial % 4 == 3;
    const Instance instance = testing::RandomInstance(shape, rng);
    const EncodedModel model = Encode(instance);
    for (int k = 0; k < 3; ++k) {
      const auto positions = testing::RandomFeasiblePositions(instance, rng);
      const Matching matching = Matching::FromPositions(instance, positions);
      const int sum_beta = Evaluate(model, positions).blocking;
      const int checker =
          static_cast<int>(EnumerateBlocking(instance, matching).size());
      const int reference =
          static_cast<int>(ref::AllBlocks(instance, positions).size());
      ++cases;
      agree += sum_beta == checker && checker == reference;
      with_blocks += checker > 0;
    }
  }
  const double ms = MillisSince(start);
  std::ostringstream detail;
  detail << "instances=1000 assignments=" << cases << " agree=" << agree
         << " nonzero=" << with_blocks << " time=" << ms / 1000 << "s";
  return {agree == cases && ms < 60'000, detail.str()};
}

Outcome OracleEquivalence() {
  const auto start = Clock::now();
  std::mt19937_64 rng(7);
  testing::MarketShape shape;
  shape.max_families = 8;
  shape.max_daycares = 4;
  shape.max_grades = 3;
  shape.max_tuples = 4;
  int agree = 0;
  int unstable = 0;
  const int n = 200;
  for (int trial = 0; trial < n; ++trial) {
    shape.ties = trial % 4 == 3;
    const Instance instance = testing::RandomInstance(shape, rng);
    const SolveResult got = Solve(instance);
    const SolveResult oracle = BruteForceOracle(instance);
    const ref::Optimum independent = ref::BruteForce(instance);
    // Re-score both matchings with the checker.
    const int got_blocks =
        static_cast<int>(EnumerateBlocking(instance, got.matching).size());
    const int oracle_blocks =
        static_cast<int>(EnumerateBlocking(instance, oracle.matching).size());
    const bool ok = got.optimality == Optimality::kProvenOptimal &&
                    got.theta == oracle.theta &&
                    got.matched_children == oracle.matched_children &&
                    got_blocks == got.theta && oracle_blocks == oracle.theta &&
                    got.matching.matched_children() == got.matched_children &&
                    IsFeasible(instance, got.matching) &&
                    IsIndividuallyRational(instance, got.matching) &&
                    independent.theta == got.theta &&
                    independent.matched == got.matched_children;
    agree += ok;
    unstable += got.theta > 0;
  }
  const double ms = MillisSince(start);
  std::ostringstream detail;
  detail << "instances=" << n << " agree=" << agree << " theta>0=" << unstable
         << " time=" << ms / 1000 << "s";
  return {agree == n && ms < 600'000, detail.str()};
}

Outcome DeskScale() {
  // The command line's default seed and the next four.
  bool ok = true;
  std::ostringstream detail;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    GenParams params = Preset("shibuya-like");
    params.seed = seed;
    const Instance instance = Generate(params);
    SolveOptions options;
    options.time_limit_ms = 120'000;
    const auto start = Clock::now();
    const SolveResult result = Solve(instance, options);
    const double ms = MillisSince(start);
    const bool proven = result.optimality == Optimality::kProvenOptimal;
    ok = ok && proven && ms < 120'000;
    detail << "seed" << seed << ":children=" << instance.num_children()
           << ",theta=" << result.theta
           << ",matched=" << result.matched_children
           << ",proven=" << (proven ? "yes" : "no") << ",time=" << ms / 1000
           << "s ";
  }
  return {ok, detail.str()};
}

Outcome IndifferenceDirection() {
  const auto start = Clock::now();
  int holds = 0;
  int proven = 0;
  int gains = 0;
  const int n = 60;
  for (int i = 0; i < n; ++i) {
    GenParams params = Preset("tama-like");
    params.n_families = 60 + 5 * (i % 9);
    params.n_daycares = 6 + i % 5;
    params.quota_max = 3;
    params.mode = PriorityMode::kIndifference;
    params.tie_prob = 0.5;
    params.seed = 1000 + i;
    const Instance instance = Generate(params);
    SolveOptions options;
    options.time_limit_ms = 20'000;
    const TieBreakReport report = TieBreakCompare(instance, 5, i, options);
    bool all_proven = report.proven;
    bool direction = true;
    bool gain = false;
    for (const TieBreakDraw& draw : report.draws) {
      all_proven = all_proven && draw.proven;
      direction = direction && report.matched_children >= draw.matched_children;
      gain = gain || report.matched_children > draw.matched_children;
    }
    holds += direction && report.direction_holds;
    proven += all_proven;
    gains += gain;
  }
  std::ostringstream detail;
  detail << "instances=" << n << " holds=" << holds << " proven=" << proven
         << " strictly_more=" << gains << " time=" << MillisSince(start) / 1000
         << "s";
  return {holds == n && proven == n, detail.str()};
}

Outcome BoundedBlocking() {
  // Only instances without a stable matching count, so seeds are scanned
  // until enough of them turn up.
  const auto start = Clock::now();
  const int wanted = 40;
  const int max_scanned = 5000;
  int scanned = 0;
  int collected = 0;
  int monotone = 0;
  int unproven = 0;
  int max_blocking = 0;
  for (int i = 0; collected < wanted && i < max_scanned; ++i) {
    ++scanned;
    GenParams params = Preset("small");
    params.n_families = 12 + i % 10;
    params.n_daycares = 3 + i % 3;
    params.seed = 500 + i;
    const Instance instance = Generate(params);
    SolveOptions options;
    options.time_limit_ms = 30'000;
    options.fixed_blocking_bound = 0;
    try {
      const SolveResult stable = Solve(instance, options);
      if (stable.optimality != Optimality::kProvenOptimal) ++unproven;
      continue;
    } catch (const Infeasible&) {
    } catch (const TimeLimitReached&) {
      ++unproven;
      continue;
    }
    ++collected;
    std::vector<int> matched;
    bool proven = true;
    for (int k : {5, 100}) {
      options.fixed_blocking_bound = k;
      try {
        const SolveResult result = Solve(instance, options);
        proven = proven && result.optimality == Optimality::kProvenOptimal &&
                 result.blocking <= k;
        matched.push_back(result.matched_children);
        max_blocking = std::max(max_blocking, result.blocking);
      } catch (const Infeasible&) {
      } catch (const Error&) {
        proven = false;
      }
    }
    if (!proven) {
      ++unproven;
      continue;
    }
    monotone += std::is_sorted(matched.begin(), matched.end());
  }
  std::ostringstream detail;
  detail << "scanned=" << scanned << " k0_infeasible=" << collected
         << " monotone=" << monotone << " unproven=" << unproven
         << " max_blocking=" << max_blocking
         << " time=" << MillisSince(start) / 1000 << "s";
  return {collected == wanted && monotone == collected && unproven == 0,
          detail.str()};
}

Outcome RoundTripAndDeterminism() {
  int checks = 0;
  int passed = 0;
  auto check = [&](bool ok) {
    ++checks;
    passed += ok;
  };
  for (const char* name :
       {"example1.json", "example3.json", "example4.json", "trivial.json"}) {
    const std::string canonical =
        WriteInstance(ParseInstance(testing::FixtureText(name)));
    check(WriteInstance(ParseInstance(canonical)) == canonical);
  }
  for (const char* name : {"example4_mu1.json", "example4_mu2.json"}) {
    const Instance instance = testing::LoadInstance("example4.json");
    const MatchingRecord record =
        ReadMatching(testing::FixtureText(name), instance);
    const std::string canonical = WriteMatching(instance, record);
    check(WriteMatching(instance, ReadMatching(canonical, instance)) ==
          canonical);
  }
  std::mt19937_64 rng(99);
  for (int i = 0; i < 100; ++i) {
    testing::MarketShape shape;
    shape.ties = i % 2 == 1;
    const Instance instance = testing::RandomInstance(shape, rng);
    const std::string text = WriteInstance(instance);
    check(WriteInstance(ParseInstance(text)) == text);
    const SolveResult result = Solve(instance);
    const std::string m = WriteMatching(instance, result);
    check(WriteMatching(instance, ReadMatching(m, instance)) == m);
  }
  for (const std::string& preset : PresetNames()) {
    GenParams params = Preset(preset);
    params.seed = 42;
    const std::string a = WriteInstance(GenerateDocument(params));
    const std::string b = WriteInstance(GenerateDocument(params));
    check(a == b);
    check(WriteInstance(ParseInstance(a)) == a);
  }
  {
    GenParams params = Preset("tama-like");
    params.seed = 3;
    const Instance instance = Generate(params);
    SolveOptions options;
    options.seed = 17;
    const std::string a = WriteMatching(instance, Solve(instance, options));
    const std::string b = WriteMatching(instance, Solve(instance, options));
    check(a == b);
    params.mode = PriorityMode::kIndifference;
    const Instance ties = Generate(params);
    check(WriteInstance(TieBreak(ties, 5)) == WriteInstance(TieBreak(ties, 5)));
  }
  std::ostringstream detail;
  detail << "checks=" << checks << " passed=" << passed;
  return {passed == checks, detail.str()};
}

}  // namespace
}  // namespace daycare

int main(int argc, char** argv) {
  using daycare::Outcome;
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "choice-function fixture", daycare::ChoiceFixture},
      {2, "projection fixture", daycare::ProjectionFixture},
      {3, "stability fixtures", daycare::StabilityFixtures},
      {4, "no-stable-matching instance", daycare::NoStableMatching},
      {5, "encoder/checker bridge", daycare::Bridge},
      {6, "oracle equivalence", daycare::OracleEquivalence},
      {7, "desk-scale performance", daycare::DeskScale},
      {8, "indifference direction", daycare::IndifferenceDirection},
      {9, "bounded-blocking monotonicity", daycare::BoundedBlocking},
      {10, "round-trip and determinism", daycare::RoundTripAndDeterminism},
  };
  // Optional arguments pick criteria by number; none runs all of them.
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));
  int failures = 0;
  int ran = 0;
  for (const Criterion& c : criteria) {
    if (!selected.empty() && !selected.count(c.id)) continue;
    ++ran;
    Outcome outcome;
    try {
      outcome = c.run();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    failures += !outcome.pass;
    std::printf("%s %2d %s: %s\n", outcome.pass ? "PASS" : "FAIL", c.id, c.name,
                outcome.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%d criteria passed\n", ran - failures, ran);
  return failures == 0 ? 0 : 1;
}
