#ifndef DAYCARE_IO_H_
#define DAYCARE_IO_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "daycare/document.h"
#include "daycare/model.h"
#include "daycare/solver.h"
#include "daycare/stability.h"

namespace daycare {

// Instance documents. Parsing rejects malformed JSON, unknown keys, missing
// required keys and wrongly typed values with a ParseError carrying the
// JSON path (and the line for syntax errors). Referential checks happen in
// ValidateInstance().
InstanceDocument ParseInstance(std::string_view text);
// Canonical form: fixed key order, two-space indent, trailing newline.
std::string WriteInstance(const InstanceDocument& doc);
std::string WriteInstance(const Instance& instance);

// A matching with the solver metadata that accompanies it on disk.
struct MatchingRecord {
  Matching matching;
  std::optional<int> theta;
  std::optional<int> blocking;
  std::optional<int> matched_children;
  std::optional<Optimality> optimality;
  std::optional<std::uint64_t> seed;
  // Node counts only; wall time is reported on the command line so that
  // documents stay reproducible.
  std::optional<SolveStatistics> statistics;

  bool operator==(const MatchingRecord&) const = default;
};

MatchingRecord ToRecord(const SolveResult& result);

std::string WriteMatching(const Instance& instance,
                          const MatchingRecord& record);
std::string WriteMatching(const Instance& instance, const SolveResult& result);

// Throws ParseError for structural problems and MatchingError when the
// assignment is not total or disagrees with the family positions.
MatchingRecord ReadMatching(std::string_view text, const Instance& instance);

// Feasibility with per-group occupancy, individual rationality, every
// blocking pair with its classification, and summary counts.
std::string WriteAuditReport(const Instance& instance, const Matching& matching,
                             const BlockingOptions& options = {});

// Whole-file helpers; throw Error on I/O failure.
std::string ReadFile(const std::filesystem::path& path);
void WriteFile(const std::filesystem::path& path, std::string_view contents);

}  // namespace daycare

#endif  // DAYCARE_IO_H_
