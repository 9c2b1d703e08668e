// daycare: solve, audit, enumerate blocks, generate and oracle-check
// daycare matching markets.
//
// Exit codes: 0 success (stable for `check`), 1 error, 2 time limit reached,
// 3 oracle enumeration limit exceeded, 4 unstable matching (`check`) or
// oracle disagreement (`oracle --matching`).

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "daycare/encoding.h"
#include "daycare/error.h"
#include "daycare/io.h"
#include "daycare/solver.h"
#include "daycare/stability.h"
#include "daycare/synthgen.h"
#include "daycare/validate.h"

namespace {

using namespace daycare;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitTimeLimit = 2;
constexpr int kExitOracleLimit = 3;
constexpr int kExitUnstable = 4;

struct Config {
  std::string instance_path;
  std::string matching_path;
  std::string output_path;
  std::string report_path;
  std::optional<std::int64_t> time_limit_ms;
  std::uint64_t seed = 0;
  int threads = 1;
  std::string mode;
  std::optional<int> max_blocks;
  // 0 means unlimited.
  std::uint64_t canonical_nodes = SolveOptions{}.canonical_node_limit.value();
  std::uint64_t oracle_limit = kDefaultEnumerationLimit;
  bool allow_overfull_initial = false;
  bool literal_occupancy = false;
  bool dump_model = false;
  bool quiet = false;
  // gen
  std::string preset = "small";
  std::optional<int> families;
  std::optional<int> daycares;
  std::optional<double> initial_share;
  // compare-ties
  int draws = 10;
};

std::optional<PriorityMode> ModeFlag(const Config& cfg) {
  if (cfg.mode.empty()) return std::nullopt;
  return cfg.mode == "ties" ? PriorityMode::kIndifference
                            : PriorityMode::kStrict;
}

const char* Bool(bool b) { return b ? "true" : "false"; }

Instance LoadInstance(const Config& cfg) {
  const InstanceDocument doc = ParseInstance(ReadFile(cfg.instance_path));
  ValidationOptions options;
  options.allow_overfull_initial = cfg.allow_overfull_initial;
  ValidationOutcome outcome = ValidateInstance(doc, options);
  for (const auto& issue : outcome.report.issues) {
    std::cerr << (issue.severity == Severity::kError ? "error" : "warning")
              << ": " << issue.code << ": " << issue.message << "\n";
  }
  if (!outcome.instance) {
    throw InvalidArgument(cfg.instance_path + ": instance is invalid (" +
                          std::to_string(outcome.report.num_errors()) +
                          " errors)");
  }
  Instance instance = std::move(*outcome.instance);
  // --mode strict evaluates a seeded strict tie-breaking of a ties instance.
  if (ModeFlag(cfg) == PriorityMode::kStrict &&
      instance.mode() == PriorityMode::kIndifference) {
    instance = TieBreak(instance, cfg.seed);
  }
  return instance;
}

BlockingOptions Blocking(const Config& cfg) {
  BlockingOptions options;
  if (cfg.literal_occupancy) options.occupancy = Occupancy::kLiteral;
  return options;
}

void Emit(const std::string& path, const std::string& contents) {
  if (path.empty()) return;
  if (path == "-") {
    std::cout << contents;
  } else {
    WriteFile(path, contents);
  }
}

int CmdSolve(const Config& cfg) {
  const Instance instance = LoadInstance(cfg);
  if (cfg.dump_model) {
    EncodeOptions eo;
    eo.blocking_bound = cfg.max_blocks;
    std::cerr << Encode(instance, eo).Dump();
  }
  SolveOptions options;
  options.time_limit_ms = cfg.time_limit_ms;
  options.seed = cfg.seed;
  options.fixed_blocking_bound = cfg.max_blocks;
  options.canonical_node_limit =
      cfg.canonical_nodes ? std::optional(cfg.canonical_nodes) : std::nullopt;
  if (!cfg.quiet) {
    options.on_progress = [](const Progress& p) {
      static const char* kPhase[] = {"incumbent", "blocking", "matched",
                                     "canonical"};
      std::cerr << "progress phase=" << kPhase[static_cast<int>(p.phase)]
                << " blocking=" << p.blocking << " matched=" << p.matched
                << " nodes=" << p.nodes << "\n";
    };
  }
  SolveResult result;
  try {
    result = Solve(instance, options);
  } catch (const Infeasible& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return kExitError;
  } catch (const TimeLimitReached& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitTimeLimit;
  }
  Emit(cfg.output_path, WriteMatching(instance, result));
  Emit(cfg.report_path,
       WriteAuditReport(instance, result.matching, Blocking(cfg)));
  const bool proven = result.optimality == Optimality::kProvenOptimal;
  std::cout << "theta=" << result.theta
            << " matched=" << result.matched_children
            << " optimal=" << Bool(proven)
            << " time=" << result.statistics.wall_ms << "\n";
  return proven ? kExitOk : kExitTimeLimit;
}

int CmdCheck(const Config& cfg) {
  const Instance instance = LoadInstance(cfg);
  const MatchingRecord record =
      ReadMatching(ReadFile(cfg.matching_path), instance);
  const Matching& m = record.matching;
  const FeasibilityReport feas = CheckFeasibility(instance, m);
  const RationalityReport ir = CheckIndividualRationality(instance, m);
  int envy = 0;
  int waste = 0;
  if (feas.feasible) {
    for (const auto& v : EnumerateBlocking(instance, m, Blocking(cfg))) {
      (v.kind == BlockKind::kJustifiedEnvy ? envy : waste) += 1;
    }
  }
  for (const auto& g : feas.violations) {
    std::cout << "violation daycare=" << instance.daycare(g.daycare).id
              << " group=" << g.group + 1 << " count=" << g.count
              << " quota=" << g.quota << "\n";
  }
  for (int f : ir.violating_families) {
    std::cout << "irrational family=" << instance.family(f).id << "\n";
  }
  const bool stable = feas.feasible && envy + waste == 0;
  std::cout << "feasible=" << Bool(feas.feasible)
            << " rational=" << Bool(ir.rational) << " stable=" << Bool(stable)
            << " blocks=" << envy + waste << " envy=" << envy
            << " waste=" << waste << " matched=" << m.matched_children()
            << "\n";
  Emit(cfg.report_path, WriteAuditReport(instance, m, Blocking(cfg)));
  return stable && ir.rational ? kExitOk : kExitUnstable;
}

int CmdBlocks(const Config& cfg) {
  const Instance instance = LoadInstance(cfg);
  const MatchingRecord record =
      ReadMatching(ReadFile(cfg.matching_path), instance);
  if (!IsFeasible(instance, record.matching)) {
    throw MatchingError("matching violates a quota; blocking is undefined");
  }
  const auto verdicts =
      EnumerateBlocking(instance, record.matching, Blocking(cfg));
  for (const auto& v : verdicts) {
    std::cout << "family=" << instance.family(v.family).id
              << " position=" << v.position + 1
              << " kind=" << BlockKindName(v.kind) << " displaced=";
    for (size_t i = 0; i < v.displaced.size(); ++i) {
      std::cout << (i ? "," : "") << instance.child(v.displaced[i]).id;
    }
    std::cout << "\n";
  }
  std::cout << "blocks=" << verdicts.size() << "\n";
  Emit(cfg.report_path,
       WriteAuditReport(instance, record.matching, Blocking(cfg)));
  return kExitOk;
}

int CmdGen(const Config& cfg) {
  GenParams params = Preset(cfg.preset);
  params.seed = cfg.seed;
  if (cfg.mode == "ties") params.mode = PriorityMode::kIndifference;
  if (cfg.families) params.n_families = *cfg.families;
  if (cfg.daycares) params.n_daycares = *cfg.daycares;
  if (cfg.initial_share) params.initial_share = *cfg.initial_share;
  const Instance instance = Generate(params);
  Emit(cfg.output_path.empty() ? "-" : cfg.output_path,
       WriteInstance(instance));
  if (!cfg.quiet) {
    std::cerr << "families=" << instance.num_families()
              << " children=" << instance.num_children()
              << " daycares=" << instance.num_daycares() << "\n";
  }
  return kExitOk;
}

int CmdOracle(const Config& cfg) {
  const Instance instance = LoadInstance(cfg);
  const SolveResult oracle = BruteForceOracle(instance, cfg.oracle_limit);
  Emit(cfg.output_path, WriteMatching(instance, oracle));
  std::cout << "theta=" << oracle.theta
            << " matched=" << oracle.matched_children << " optimal=true"
            << " time=" << oracle.statistics.wall_ms << "\n";
  if (cfg.matching_path.empty()) return kExitOk;

  const MatchingRecord record =
      ReadMatching(ReadFile(cfg.matching_path), instance);
  const Matching& m = record.matching;
  bool agree = IsFeasible(instance, m) && IsIndividuallyRational(instance, m);
  int blocking = -1;
  if (agree) {
    blocking = static_cast<int>(EnumerateBlocking(instance, m).size());
    agree = blocking == oracle.theta &&
            m.matched_children() == oracle.matched_children;
  }
  if (record.theta && *record.theta != oracle.theta) agree = false;
  std::cout << "diff=" << (agree ? "match" : "mismatch")
            << " candidate_blocking=" << blocking
            << " candidate_matched=" << m.matched_children() << "\n";
  return agree ? kExitOk : kExitUnstable;
}

int CmdCompareTies(const Config& cfg) {
  const Instance instance = LoadInstance(cfg);
  if (instance.mode() != PriorityMode::kIndifference) {
    std::cerr << "note: instance has strict priorities; every draw is "
                 "identical\n";
  }
  SolveOptions options;
  options.time_limit_ms = cfg.time_limit_ms;
  const TieBreakReport report =
      TieBreakCompare(instance, cfg.draws, cfg.seed, options);
  for (const auto& d : report.draws) {
    std::cout << "draw seed=" << d.seed << " theta=" << d.theta
              << " matched=" << d.matched_children
              << " optimal=" << Bool(d.proven) << "\n";
  }
  std::cout << "ties theta=" << report.theta
            << " matched=" << report.matched_children
            << " optimal=" << Bool(report.proven)
            << " direction=" << Bool(report.direction_holds) << "\n";
  return report.proven ? kExitOk : kExitTimeLimit;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Daycare matching with siblings, initial enrollments and "
      "transferable quotas"};
  app.require_subcommand(1);
  Config cfg;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--seed", cfg.seed, "Random seed");
    cmd->add_option("--mode", cfg.mode, "Priority mode")
        ->check(CLI::IsMember({"strict", "ties"}));
    cmd->add_flag("--allow-overfull-initial", cfg.allow_overfull_initial,
                  "Accept an initial matching that exceeds a quota");
    cmd->add_flag("--quiet", cfg.quiet, "Suppress progress output");
  };
  auto add_instance = [&](CLI::App* cmd) {
    cmd->add_option("instance", cfg.instance_path, "Instance document")
        ->required()
        ->check(CLI::ExistingFile);
  };
  auto add_matching = [&](CLI::App* cmd, bool required) {
    auto* opt =
        cmd->add_option("matching", cfg.matching_path, "Matching document");
    opt->check(CLI::ExistingFile);
    if (required) opt->required();
  };
  auto add_occupancy = [&](CLI::App* cmd) {
    cmd->add_flag("--literal-occupancy", cfg.literal_occupancy,
                  "Keep the deviating family's own seats occupied");
    cmd->add_option("--report", cfg.report_path, "Write the audit report");
  };

  auto* solve = app.add_subcommand("solve", "Compute the optimal matching");
  add_instance(solve);
  add_common(solve);
  add_occupancy(solve);
  solve->add_option("--time-limit-ms", cfg.time_limit_ms, "Time limit")
      ->check(CLI::NonNegativeNumber);
  solve->add_option("--threads", cfg.threads, "Worker threads")
      ->check(CLI::PositiveNumber);
  solve
      ->add_option("--max-blocks", cfg.max_blocks,
                   "Require at most K blocking pairs")
      ->check(CLI::NonNegativeNumber);
  solve->add_option("--canonical-nodes", cfg.canonical_nodes,
                    "Node budget for picking the canonical optimum (0: none)");
  solve->add_option("--output", cfg.output_path,
                    "Write the matching document ('-' for stdout)");
  solve->add_flag("--dump-model", cfg.dump_model,
                  "Print the constraint model to stderr");

  auto* check = app.add_subcommand("check", "Audit a matching");
  add_instance(check);
  add_matching(check, true);
  add_common(check);
  add_occupancy(check);

  auto* blocks = app.add_subcommand("blocks", "List blocking pairs");
  add_instance(blocks);
  add_matching(blocks, true);
  add_common(blocks);
  add_occupancy(blocks);

  auto* gen = app.add_subcommand("gen", "Generate a synthetic instance");
  add_common(gen);
  gen->add_option("--preset", cfg.preset, "Preset name")
      ->check(CLI::IsMember(PresetNames()));
  gen->add_option("--families", cfg.families, "Number of families");
  gen->add_option("--daycares", cfg.daycares, "Number of daycares");
  gen->add_option("--initial-share", cfg.initial_share,
                  "Share of families with an initial enrollment");
  gen->add_option("--output", cfg.output_path, "Output path");

  auto* oracle = app.add_subcommand("oracle", "Brute-force optimum");
  add_instance(oracle);
  add_matching(oracle, false);
  add_common(oracle);
  oracle->add_option("--oracle-limit", cfg.oracle_limit,
                     "Largest enumeration allowed");
  oracle->add_option("--output", cfg.output_path,
                     "Write the oracle's matching document");

  auto* ties = app.add_subcommand(
      "compare-ties", "Solve with ties and with random strict tie-breakings");
  add_instance(ties);
  add_common(ties);
  ties->add_option("--draws", cfg.draws, "Number of tie-breakings")
      ->check(CLI::NonNegativeNumber);
  ties->add_option("--time-limit-ms", cfg.time_limit_ms,
                   "Time limit per solve");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitError;
  }

  try {
    if (*solve) return CmdSolve(cfg);
    if (*check) return CmdCheck(cfg);
    if (*blocks) return CmdBlocks(cfg);
    if (*gen) return CmdGen(cfg);
    if (*oracle) return CmdOracle(cfg);
    if (*ties) return CmdCompareTies(cfg);
  } catch (const LimitExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    std::cout << "enumeration_size=" << e.size() << " limit=" << e.limit()
              << "\n";
    return kExitOracleLimit;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
