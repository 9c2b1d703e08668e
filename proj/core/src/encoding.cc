#include "daycare/encoding.h"

#include <algorithm>
#include <sstream>
#include <string>

#include "daycare/error.h"

namespace daycare {
namespace {

class Encoder {
 public:
  Encoder(const Instance& instance, const EncodeOptions& options)
      : inst_(instance) {
    model_.mode = options.mode.value_or(instance.mode());
    model_.blocking_bound = options.blocking_bound;
  }

  EncodedModel Run() {
    DeclareFamilyPositions();
    DefineChildDaycares();
    DefineAlphas();
    DefineRoomTests();
    DefineBlocking();
    AddMatchingConstraints();
    AddCapacity();
    AddObjectives();
    return std::move(model_);
  }

 private:
  int NewVar(VarKind kind, std::string name, int upper = 1) {
    Variable v;
    v.kind = kind;
    v.upper = upper;
    v.name = std::move(name);
    model_.variables.push_back(std::move(v));
    return static_cast<int>(model_.variables.size()) - 1;
  }

  std::string GroupName(int d, int g) const {
    std::string out = "{";
    const auto& grades = inst_.daycare(d).groups[g].grades;
    for (size_t i = 0; i < grades.size(); ++i) {
      if (i > 0) out += '|';
      out += inst_.grades()[grades[i]];
    }
    return out + "}";
  }

  std::string FamilyPos(int f, Position p) const {
    return inst_.family(f).id + "," + std::to_string(p + 1);
  }

  void DeclareFamilyPositions() {
    model_.blocks.resize(inst_.num_families());
    for (int f = 0; f < inst_.num_families(); ++f) {
      const Family& fam = inst_.family(f);
      model_.family_size.push_back(static_cast<int>(fam.children.size()));
      model_.blocks[f].resize(fam.num_positions());
      for (Position p = 0; p < fam.num_positions(); ++p) {
        const int x =
            NewVar(VarKind::kFamilyPosition, "x[" + FamilyPos(f, p) + "]");
        model_.variables[x].family = f;
        model_.variables[x].position = p;
        model_.blocks[f][p].x = x;
      }
    }
  }

  void DefineChildDaycares() {
    model_.child_daycares.resize(inst_.num_children());
    for (int f = 0; f < inst_.num_families(); ++f) {
      const Family& fam = inst_.family(f);
      for (size_t i = 0; i < fam.children.size(); ++i) {
        const int c = fam.children[i];
        auto& entries = model_.child_daycares[c];
        for (Position p = 0; p < fam.num_positions(); ++p) {
          const int d = fam.preferences[p][i];
          auto it = std::find_if(entries.begin(), entries.end(),
                                 [d](const auto& e) { return e.daycare == d; });
          if (it == entries.end()) {
            entries.push_back({d, -1, {}});
            it = entries.end() - 1;
          }
          it->positions.push_back(p);
        }
        for (auto& entry : entries) {
          const int upper = 1;
          entry.variable = NewVar(VarKind::kChildDaycare,
                                  "x[" + inst_.child(c).id + "," +
                                      inst_.DaycareName(entry.daycare) + "]",
                                  upper);
          Variable& v = model_.variables[entry.variable];
          v.child = c;
          v.family = f;
          v.daycare = entry.daycare;
          Constraint def;
          def.kind = ConstraintKind::kDefine;
          def.label = "child-daycare";
          def.target = entry.variable;
          for (Position p : entry.positions) {
            def.terms.push_back({1, model_.blocks[f][p].x});
          }
          model_.constraints.push_back(std::move(def));
        }
      }
    }
  }

  void DefineAlphas() {
    for (int f = 0; f < inst_.num_families(); ++f) {
      for (Position p = 0; p < inst_.family(f).num_positions(); ++p) {
        const int alpha =
            NewVar(VarKind::kAlpha, "alpha[" + FamilyPos(f, p) + "]");
        model_.variables[alpha].family = f;
        model_.variables[alpha].position = p;
        model_.blocks[f][p].alpha = alpha;
        Constraint def;
        def.kind = ConstraintKind::kDefine;
        def.label = "weakly-better";
        def.target = alpha;
        for (Position i = 0; i <= p; ++i) {
          def.terms.push_back({1, model_.blocks[f][i].x});
        }
        model_.constraints.push_back(std::move(def));
      }
    }
  }

  // C+(f,p,d,G): children outside f, in group G at d, ranked above the
  // family's lowest-ranked applicant (strict) or not below it (ties).
  std::vector<int> HigherPriority(int f, int d, int g,
                                  const std::vector<int>& applicants) const {
    const Daycare& daycare = inst_.daycare(d);
    int threshold = -1;
    for (int c : applicants) threshold = std::max(threshold, daycare.rank[c]);
    const int last_class =
        model_.mode == PriorityMode::kStrict ? threshold - 1 : threshold;
    std::vector<int> out;
    for (int r = 0; r <= last_class; ++r) {
      for (int c : daycare.priority[r]) {
        if (inst_.child(c).family == f) continue;
        if (daycare.group_of_grade[inst_.child(c).grade] != g) continue;
        out.push_back(c);
      }
    }
    return out;
  }

  void DefineRoomTests() {
    for (int f = 0; f < inst_.num_families(); ++f) {
      const Family& fam = inst_.family(f);
      for (Position p = 0; p < fam.num_positions(); ++p) {
        PositionBlock& block = model_.blocks[f][p];
        const auto& tuple = fam.preferences[p];
        for (int d : tuple) {
          if (d == kDummy) continue;
          if (std::find(block.daycares.begin(), block.daycares.end(), d) !=
              block.daycares.end()) {
            continue;
          }
          block.daycares.push_back(d);
        }
        for (int d : block.daycares) {
          const Daycare& daycare = inst_.daycare(d);
          std::vector<int> group_gammas;
          for (int g = 0; g < static_cast<int>(daycare.groups.size()); ++g) {
            GroupCondition cond;
            cond.daycare = d;
            cond.group = g;
            cond.quota = daycare.groups[g].quota;
            for (size_t i = 0; i < tuple.size(); ++i) {
              const int c = fam.children[i];
              if (tuple[i] == d && inst_.GroupOf(d, c) == g) {
                cond.applicants.push_back(c);
              }
            }
            // Groups without applicants always have room.
            if (cond.applicants.empty()) continue;
            cond.higher_priority = HigherPriority(f, d, g, cond.applicants);
            for (int c : cond.higher_priority) {
              const int var = model_.ChildDaycareVar(c, d);
              if (var >= 0) cond.counted.push_back(var);
            }
            cond.gamma = NewVar(VarKind::kGammaGroup,
                                "gamma[" + FamilyPos(f, p) + "," + daycare.id +
                                    "," + GroupName(d, g) + "]");
            Variable& v = model_.variables[cond.gamma];
            v.family = f;
            v.position = p;
            v.daycare = d;
            v.group = g;
            Constraint reif;
            reif.kind = ConstraintKind::kReifiedAtMost;
            reif.label = "group-room";
            reif.target = cond.gamma;
            for (int var : cond.counted) reif.terms.push_back({1, var});
            reif.rhs = cond.quota - static_cast<int>(cond.applicants.size());
            model_.constraints.push_back(std::move(reif));
            group_gammas.push_back(cond.gamma);
            block.conditions.push_back(std::move(cond));
          }
          const int gamma_d =
              NewVar(VarKind::kGammaDaycare,
                     "gamma[" + FamilyPos(f, p) + "," + daycare.id + "]");
          model_.variables[gamma_d].family = f;
          model_.variables[gamma_d].position = p;
          model_.variables[gamma_d].daycare = d;
          Constraint all_groups;
          all_groups.kind = ConstraintKind::kReifiedAnd;
          all_groups.label = "daycare-room";
          all_groups.target = gamma_d;
          for (int var : group_gammas)
            all_groups.literals.push_back({var, false});
          model_.constraints.push_back(std::move(all_groups));
          block.gamma_daycare.push_back(gamma_d);
        }
        block.gamma =
            NewVar(VarKind::kGammaPosition, "gamma[" + FamilyPos(f, p) + "]");
        model_.variables[block.gamma].family = f;
        model_.variables[block.gamma].position = p;
        Constraint all_daycares;
        all_daycares.kind = ConstraintKind::kReifiedAnd;
        all_daycares.label = "tuple-room";
        all_daycares.target = block.gamma;
        for (int var : block.gamma_daycare) {
          all_daycares.literals.push_back({var, false});
        }
        model_.constraints.push_back(std::move(all_daycares));
      }
    }
  }

  void DefineBlocking() {
    for (int f = 0; f < inst_.num_families(); ++f) {
      for (Position p = 0; p < inst_.family(f).num_positions(); ++p) {
        PositionBlock& block = model_.blocks[f][p];
        block.beta = NewVar(VarKind::kBeta, "beta[" + FamilyPos(f, p) + "]");
        model_.variables[block.beta].family = f;
        model_.variables[block.beta].position = p;
        Constraint def;
        def.kind = ConstraintKind::kReifiedAnd;
        def.label = "blocking";
        def.target = block.beta;
        def.literals = {{block.alpha, true}, {block.gamma, false}};
        model_.constraints.push_back(std::move(def));
      }
    }
  }

  void AddMatchingConstraints() {
    for (int f = 0; f < inst_.num_families(); ++f) {
      const Family& fam = inst_.family(f);
      Constraint c;
      c.kind =
          fam.has_initial ? ConstraintKind::kExactly : ConstraintKind::kAtMost;
      c.label = fam.has_initial ? "must-match" : "at-most-one";
      c.rhs = 1;
      for (const PositionBlock& block : model_.blocks[f]) {
        c.terms.push_back({1, block.x});
      }
      model_.constraints.push_back(std::move(c));
    }
  }

  void AddCapacity() {
    for (int d = 0; d < inst_.num_daycares(); ++d) {
      const Daycare& daycare = inst_.daycare(d);
      std::vector<Constraint> per_group(daycare.groups.size());
      for (int c = 0; c < inst_.num_children(); ++c) {
        const int var = model_.ChildDaycareVar(c, d);
        if (var < 0) continue;
        per_group[inst_.GroupOf(d, c)].terms.push_back({1, var});
      }
      for (size_t g = 0; g < per_group.size(); ++g) {
        if (per_group[g].terms.empty()) continue;
        per_group[g].kind = ConstraintKind::kAtMost;
        per_group[g].label = "capacity";
        per_group[g].rhs = daycare.groups[g].quota;
        model_.constraints.push_back(std::move(per_group[g]));
      }
    }
  }

  void AddObjectives() {
    for (int f = 0; f < inst_.num_families(); ++f) {
      for (const PositionBlock& block : model_.blocks[f]) {
        model_.objective_blocking.push_back({1, block.beta});
        model_.objective_matched.push_back({model_.family_size[f], block.x});
      }
    }
    for (int c = 0; c < inst_.num_children(); ++c) {
      const int dummy = model_.ChildDaycareVar(c, kDummy);
      if (dummy >= 0) model_.objective_matched.push_back({-1, dummy});
    }
    if (model_.blocking_bound) {
      Constraint bound;
      bound.kind = ConstraintKind::kAtMost;
      bound.label = "blocking-bound";
      bound.terms = model_.objective_blocking;
      bound.rhs = *model_.blocking_bound;
      model_.constraints.push_back(std::move(bound));
    }
  }

  const Instance& inst_;
  EncodedModel model_;
};

int SumTerms(const std::vector<Term>& terms, const std::vector<int>& values) {
  int sum = 0;
  for (const Term& t : terms) sum += t.coefficient * values[t.variable];
  return sum;
}

bool Holds(const Literal& lit, const std::vector<int>& values) {
  return lit.negated ? values[lit.variable] == 0 : values[lit.variable] != 0;
}

void AppendTerms(std::ostringstream& out, const EncodedModel& model,
                 const std::vector<Term>& terms) {
  if (terms.empty()) {
    out << " 0";
    return;
  }
  for (const Term& t : terms) {
    out << ' ' << (t.coefficient >= 0 ? "+" : "") << t.coefficient << ' '
        << model.variables[t.variable].name;
  }
}

}  // namespace

const char* VarKindName(VarKind kind) {
  switch (kind) {
    case VarKind::kFamilyPosition:
      return "family-position";
    case VarKind::kChildDaycare:
      return "child-daycare";
    case VarKind::kAlpha:
      return "alpha";
    case VarKind::kGammaGroup:
      return "gamma-group";
    case VarKind::kGammaDaycare:
      return "gamma-daycare";
    case VarKind::kGammaPosition:
      return "gamma-position";
    case VarKind::kBeta:
      return "beta";
  }
  return "unknown";
}

int EncodedModel::ChildDaycareVar(int child, int daycare) const {
  for (const ChildDaycare& entry : child_daycares[child]) {
    if (entry.daycare == daycare) return entry.variable;
  }
  return -1;
}

std::span<const Position> EncodedModel::PositionsOf(int child,
                                                    int daycare) const {
  for (const ChildDaycare& entry : child_daycares[child]) {
    if (entry.daycare == daycare) return entry.positions;
  }
  return {};
}

std::string EncodedModel::Dump() const {
  std::ostringstream out;
  out << "model 1\n";
  out << "mode " << (mode == PriorityMode::kStrict ? "strict" : "ties") << '\n';
  out << "variables " << variables.size() << '\n';
  for (size_t i = 0; i < variables.size(); ++i) {
    const Variable& v = variables[i];
    out << "var " << i << ' ' << v.name << ' ' << VarKindName(v.kind) << ' '
        << v.lower << ' ' << v.upper << '\n';
  }
  out << "constraints " << constraints.size() << '\n';
  for (const Constraint& c : constraints) {
    out << "con " << c.label << ' ';
    switch (c.kind) {
      case ConstraintKind::kDefine:
        out << "define " << variables[c.target].name << " :=";
        AppendTerms(out, *this, c.terms);
        break;
      case ConstraintKind::kReifiedAtMost:
        out << "reify " << variables[c.target].name << " :=";
        AppendTerms(out, *this, c.terms);
        out << " <= " << c.rhs;
        break;
      case ConstraintKind::kReifiedAnd:
        out << "and " << variables[c.target].name << " :=";
        if (c.literals.empty()) out << " true";
        for (const Literal& lit : c.literals) {
          out << ' ' << (lit.negated ? "!" : "")
              << variables[lit.variable].name;
        }
        break;
      case ConstraintKind::kAtMost:
        out << "atmost";
        AppendTerms(out, *this, c.terms);
        out << " <= " << c.rhs;
        break;
      case ConstraintKind::kExactly:
        out << "exactly";
        AppendTerms(out, *this, c.terms);
        out << " = " << c.rhs;
        break;
    }
    out << '\n';
  }
  out << "objective min blocking";
  AppendTerms(out, *this, objective_blocking);
  out << "\nobjective max matched";
  AppendTerms(out, *this, objective_matched);
  out << '\n';
  return out.str();
}

EncodedModel Encode(const Instance& instance, const EncodeOptions& options) {
  return Encoder(instance, options).Run();
}

Evaluation Evaluate(const EncodedModel& model,
                    const std::vector<std::vector<int>>& x) {
  if (static_cast<int>(x.size()) != model.num_families()) {
    throw InvalidArgument("assignment covers " + std::to_string(x.size()) +
                          " families, model has " +
                          std::to_string(model.num_families()));
  }
  Evaluation eval;
  eval.values.assign(model.variables.size(), 0);
  for (int f = 0; f < model.num_families(); ++f) {
    if (x[f].size() != model.blocks[f].size()) {
      throw InvalidArgument("assignment for family " + std::to_string(f) +
                            " has wrong length");
    }
    for (size_t p = 0; p < x[f].size(); ++p) {
      if (x[f][p] != 0 && x[f][p] != 1) {
        throw InvalidArgument("x values must be 0 or 1");
      }
      eval.values[model.blocks[f][p].x] = x[f][p];
    }
  }
  for (const Constraint& c : model.constraints) {
    switch (c.kind) {
      case ConstraintKind::kDefine:
        eval.values[c.target] = SumTerms(c.terms, eval.values);
        break;
      case ConstraintKind::kReifiedAtMost:
        eval.values[c.target] = SumTerms(c.terms, eval.values) <= c.rhs;
        break;
      case ConstraintKind::kReifiedAnd:
        eval.values[c.target] = std::all_of(
            c.literals.begin(), c.literals.end(),
            [&](const Literal& lit) { return Holds(lit, eval.values); });
        break;
      case ConstraintKind::kAtMost:
      case ConstraintKind::kExactly: {
        const int sum = SumTerms(c.terms, eval.values);
        const bool ok =
            c.kind == ConstraintKind::kAtMost ? sum <= c.rhs : sum == c.rhs;
        if (ok) break;
        if (c.label == "blocking-bound") {
          eval.within_blocking_bound = false;
          break;
        }
        std::string names;
        for (const Term& t : c.terms) {
          names += ' ' + model.variables[t.variable].name;
        }
        throw ConstraintViolation(
            c.label, "sum " + std::to_string(sum) +
                         (c.kind == ConstraintKind::kAtMost ? " > " : " != ") +
                         std::to_string(c.rhs) + " over" + names);
      }
    }
  }
  eval.blocking = SumTerms(model.objective_blocking, eval.values);
  eval.matched = SumTerms(model.objective_matched, eval.values);
  return eval;
}

Evaluation Evaluate(const EncodedModel& model,
                    std::span<const Position> positions) {
  if (static_cast<int>(positions.size()) != model.num_families()) {
    throw InvalidArgument("position vector has wrong length");
  }
  std::vector<std::vector<int>> x(model.num_families());
  for (int f = 0; f < model.num_families(); ++f) {
    x[f].assign(model.blocks[f].size(), 0);
    const Position p = positions[f];
    if (p == kUnmatched) continue;
    if (p < 0 || p >= static_cast<Position>(x[f].size())) {
      throw InvalidArgument("position out of range");
    }
    x[f][p] = 1;
  }
  return Evaluate(model, x);
}

}  // namespace daycare
