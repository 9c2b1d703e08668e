#ifndef DAYCARE_VALIDATE_H_
#define DAYCARE_VALIDATE_H_

#include <optional>
#include <string>
#include <vector>

#include "daycare/document.h"
#include "daycare/model.h"

namespace daycare {

enum class Severity { kError, kWarning };

struct ValidationOptions {
  // Downgrade "initial matching violates a transferable quota" to a warning.
  bool allow_overfull_initial = false;
  // Downgrade "incumbent ranked below a new applicant" to a warning.
  bool allow_unprioritized_incumbents = false;
};

struct ValidationIssue {
  Severity severity = Severity::kError;
  // Stable machine-readable code, e.g. "tuple-length-mismatch".
  std::string code;
  std::string message;
  // Identifiers of the entities involved (family, child, daycare ids).
  std::vector<std::string> entities;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;

  bool ok() const;
  int num_errors() const;
  bool HasCode(const std::string& code) const;
  std::string ToString() const;
};

struct ValidationOutcome {
  std::optional<Instance> instance;  // set iff report.ok()
  ValidationReport report;
};

// Checks every structural and semantic invariant of the market and builds
// the indexed Instance. All violations are collected, not only the first.
ValidationOutcome ValidateInstance(const InstanceDocument& doc,
                                   const ValidationOptions& options = {});

// Like ValidateInstance() but throws InvalidArgument carrying the report.
Instance ValidateOrThrow(const InstanceDocument& doc,
                         const ValidationOptions& options = {});

// Inverse of ValidateInstance(): the canonical document of an instance.
// Grade groups and quotas are written out in full.
InstanceDocument ToDocument(const Instance& instance);

}  // namespace daycare

#endif  // DAYCARE_VALIDATE_H_
