#ifndef DAYCARE_ENCODING_H_
#define DAYCARE_ENCODING_H_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "daycare/model.h"

namespace daycare {

// Variables of the constraint model.
//
//   x[f,p]          family f holds its p-th tuple (decision variable)
//   x[c,d]          child c is seated at daycare d (sum of x[f,p] over the
//                   positions P(c,d) at which c's projected list names d)
//   alpha[f,p]      f holds a tuple at position <= p
//   gamma[f,p,d,G]  group G of daycare d can seat f's applicants together
//                   with the seated higher-priority children C+(f,p,d,G)
//   gamma[f,p,d]    every group of d can
//   gamma[f,p]      every daycare of tuple p can
//   beta[f,p]       f and tuple p form a blocking coalition
enum class VarKind {
  kFamilyPosition,
  kChildDaycare,
  kAlpha,
  kGammaGroup,
  kGammaDaycare,
  kGammaPosition,
  kBeta,
};

const char* VarKindName(VarKind kind);

struct Variable {
  VarKind kind = VarKind::kFamilyPosition;
  int lower = 0;
  int upper = 1;
  // Entity references; -1 where the kind has no such coordinate. For
  // x[c,d0] the daycare is kDummy.
  int family = -1;
  Position position = -1;
  int child = -1;
  int daycare = -1;
  int group = -1;
  std::string name;
};

struct Term {
  int coefficient = 1;
  int variable = 0;
};

// A variable tested against zero: `negated` holds iff the value is 0.
struct Literal {
  int variable = 0;
  bool negated = false;
};

enum class ConstraintKind {
  kDefine,         // target = sum(terms)
  kReifiedAtMost,  // target <=> sum(terms) <= rhs
  kReifiedAnd,     // target <=> AND(literals)
  kAtMost,         // sum(terms) <= rhs
  kExactly,        // sum(terms) == rhs
};

struct Constraint {
  ConstraintKind kind = ConstraintKind::kAtMost;
  // One of: child-daycare, weakly-better, group-room, daycare-room,
  // tuple-room, blocking, must-match, at-most-one, capacity, blocking-bound.
  std::string label;
  int target = -1;
  std::vector<Term> terms;
  std::vector<Literal> literals;
  int rhs = 0;
};

// One reified room test gamma[f,p,d,G].
struct GroupCondition {
  int daycare = 0;
  int group = 0;
  int quota = 0;                     // Q(d, G)
  std::vector<int> applicants;       // C(f,p,d,G)
  std::vector<int> higher_priority;  // C+(f,p,d,G)
  std::vector<int> counted;          // x[c,d] variables of C+ members
  int gamma = -1;
};

// Everything the model derives for one (family, position) pair.
struct PositionBlock {
  std::vector<int> daycares;       // D(f,p), real daycares only
  std::vector<int> gamma_daycare;  // aligned with `daycares`
  std::vector<GroupCondition> conditions;
  int x = -1;
  int alpha = -1;
  int gamma = -1;
  int beta = -1;
};

struct ChildDaycare {
  int daycare = kDummy;
  int variable = -1;
  std::vector<Position> positions;  // P(c,d)
};

struct EncodeOptions {
  // Defaults to the instance's own priority mode.
  std::optional<PriorityMode> mode;
  // Adds sum(beta) <= bound.
  std::optional<int> blocking_bound;
};

struct EncodedModel {
  PriorityMode mode = PriorityMode::kStrict;
  std::optional<int> blocking_bound;
  std::vector<Variable> variables;
  // Definitions appear before every constraint that reads their target.
  std::vector<Constraint> constraints;
  std::vector<Term> objective_blocking;                   // minimize
  std::vector<Term> objective_matched;                    // maximize
  std::vector<std::vector<PositionBlock>> blocks;         // [family][position]
  std::vector<std::vector<ChildDaycare>> child_daycares;  // [child]
  std::vector<int> family_size;

  int num_families() const { return static_cast<int>(blocks.size()); }

  // x[c,d] variable, or -1 when d never appears in c's projected list.
  int ChildDaycareVar(int child, int daycare) const;
  // P(c,d); empty when d never appears in c's projected list.
  std::span<const Position> PositionsOf(int child, int daycare) const;

  // Line-oriented text form; see README for the grammar.
  std::string Dump() const;
};

EncodedModel Encode(const Instance& instance,
                    const EncodeOptions& options = {});

struct Evaluation {
  std::vector<int> values;  // one per model variable
  int blocking = 0;         // sum of beta
  int matched = 0;          // children not seated at the dummy
  bool within_blocking_bound = true;
};

// Bottom-up evaluation of every derived variable for a 0/1 assignment of
// the x[f,p] variables (`x[f][p]`). Throws ConstraintViolation when the
// assignment breaks must-match, at-most-one or capacity.
Evaluation Evaluate(const EncodedModel& model,
                    const std::vector<std::vector<int>>& x);

// Convenience overload: x[f,p] = 1 iff positions[f] == p.
Evaluation Evaluate(const EncodedModel& model,
                    std::span<const Position> positions);

}  // namespace daycare

#endif  // DAYCARE_ENCODING_H_
