#include "daycare/validate.h"

#include <algorithm>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>
#include <utility>

#include "daycare/error.h"

namespace daycare {

bool ValidationReport::ok() const { return num_errors() == 0; }

int ValidationReport::num_errors() const {
  return static_cast<int>(std::count_if(
      issues.begin(), issues.end(),
      [](const auto& issue) { return issue.severity == Severity::kError; }));
}

bool ValidationReport::HasCode(const std::string& code) const {
  return std::any_of(issues.begin(), issues.end(),
                     [&](const auto& issue) { return issue.code == code; });
}

std::string ValidationReport::ToString() const {
  std::ostringstream out;
  for (const auto& issue : issues) {
    out << (issue.severity == Severity::kError ? "error" : "warning") << " ["
        << issue.code << "] " << issue.message << '\n';
  }
  return out.str();
}

class InstanceBuilder {
 public:
  InstanceBuilder(const InstanceDocument& doc, const ValidationOptions& options)
      : doc_(doc), options_(options) {}

  ValidationOutcome Run() {
    inst_.mode_ = doc_.mode;
    BuildGrades();
    BuildDaycares();
    BuildFamilies();
    if (report_.ok()) {
      ResolvePriorities();
      CheckApplicantsRanked();
      CheckIncumbentPriority();
      CheckInitialFeasible();
    }
    ValidationOutcome outcome;
    if (report_.ok()) outcome.instance = std::move(inst_);
    outcome.report = std::move(report_);
    return outcome;
  }

 private:
  void Add(Severity severity, std::string code, std::string message,
           std::vector<std::string> entities) {
    report_.issues.push_back(
        {severity, std::move(code), std::move(message), std::move(entities)});
  }

  void Fail(std::string code, std::string message,
            std::vector<std::string> entities) {
    Add(Severity::kError, std::move(code), std::move(message),
        std::move(entities));
  }

  void BuildGrades() {
    for (const auto& g : doc_.grades) {
      if (!inst_.grade_index_.emplace(g, inst_.num_grades()).second) {
        Fail("duplicate-id", "grade '" + g + "' declared twice", {g});
        continue;
      }
      inst_.grades_.push_back(g);
    }
  }

  void BuildDaycares() {
    const int num_grades = inst_.num_grades();
    for (const auto& entry : doc_.daycares) {
      if (entry.id == kDummyId) {
        Fail("reserved-dummy-id",
             "daycare id '" + entry.id + "' is reserved for the dummy",
             {entry.id});
        continue;
      }
      if (!inst_.daycare_index_.emplace(entry.id, inst_.num_daycares())
               .second) {
        Fail("duplicate-id", "daycare '" + entry.id + "' declared twice",
             {entry.id});
        continue;
      }
      Daycare d;
      d.id = entry.id;
      d.quotas.assign(num_grades, 0);
      for (const auto& [grade, quota] : entry.quotas) {
        const int g = inst_.GradeIndex(grade);
        if (g < 0) {
          Fail("unknown-grade",
               "daycare " + entry.id + ": quota for unknown grade '" + grade +
                   "'",
               {entry.id});
          continue;
        }
        if (quota < 0) {
          Fail("negative-quota",
               "daycare " + entry.id + ": negative quota for grade " + grade,
               {entry.id});
          continue;
        }
        d.quotas[g] = quota;
      }
      BuildGroups(entry, d);
      inst_.daycares_.push_back(std::move(d));
    }
  }

  void BuildGroups(const InstanceDocument::DaycareEntry& entry, Daycare& d) {
    const int num_grades = inst_.num_grades();
    d.group_of_grade.assign(num_grades, -1);
    if (entry.grade_groups.empty()) {
      for (int g = 0; g < num_grades; ++g) {
        d.group_of_grade[g] = g;
        d.groups.push_back({{g}, d.quotas[g]});
      }
      return;
    }
    for (const auto& members : entry.grade_groups) {
      if (members.empty()) {
        Fail("empty-grade-group", "daycare " + entry.id + ": empty grade group",
             {entry.id});
        continue;
      }
      GradeGroup group;
      const int index = static_cast<int>(d.groups.size());
      for (const auto& grade : members) {
        const int g = inst_.GradeIndex(grade);
        if (g < 0) {
          Fail("unknown-grade",
               "daycare " + entry.id + ": grade group names unknown grade '" +
                   grade + "'",
               {entry.id});
          continue;
        }
        if (d.group_of_grade[g] != -1) {
          Fail("grade-in-multiple-groups",
               "daycare " + entry.id + ": grade " + grade +
                   " appears in more than one group",
               {entry.id});
          continue;
        }
        d.group_of_grade[g] = index;
        group.grades.push_back(g);
        group.quota += d.quotas[g];
      }
      d.groups.push_back(std::move(group));
    }
    for (int g = 0; g < num_grades; ++g) {
      if (d.group_of_grade[g] == -1) {
        Fail("grade-not-in-partition",
             "daycare " + entry.id + ": grade " + inst_.grades_[g] +
                 " is not covered by any grade group",
             {entry.id});
      }
    }
  }

  void BuildFamilies() {
    for (const auto& entry : doc_.families) {
      if (!inst_.family_index_.emplace(entry.id, inst_.num_families()).second) {
        Fail("duplicate-id", "family '" + entry.id + "' declared twice",
             {entry.id});
        continue;
      }
      const int f = inst_.num_families();
      Family family;
      family.id = entry.id;
      if (entry.children.empty()) {
        Fail("empty-family", "family " + entry.id + " has no children",
             {entry.id});
      }
      for (const auto& child_entry : entry.children) {
        if (!inst_.child_index_.emplace(child_entry.id, inst_.num_children())
                 .second) {
          Fail("duplicate-id", "child '" + child_entry.id + "' declared twice",
               {child_entry.id});
          continue;
        }
        Child child;
        child.id = child_entry.id;
        child.family = f;
        child.grade = inst_.GradeIndex(child_entry.grade);
        if (child.grade < 0) {
          Fail("unknown-grade",
               "child " + child_entry.id + " has unknown grade '" +
                   child_entry.grade + "'",
               {entry.id, child_entry.id});
          child.grade = 0;
        }
        family.children.push_back(inst_.num_children());
        inst_.children_.push_back(std::move(child));
      }
      const size_t k = entry.children.size();
      std::vector<int> omega(k, kDummy);
      if (!entry.initial.empty()) {
        if (entry.initial.size() != k) {
          Fail("initial-length-mismatch",
               "family " + entry.id + ": initial enrollment list has " +
                   std::to_string(entry.initial.size()) + " entries for " +
                   std::to_string(k) + " children",
               {entry.id});
        } else {
          for (size_t i = 0; i < k; ++i) {
            const int d = inst_.DaycareIndex(entry.initial[i]);
            if (d == kUnknownDaycare) {
              Fail("unknown-daycare",
                   "family " + entry.id + ": initial daycare '" +
                       entry.initial[i] + "' is not declared",
                   {entry.id, entry.initial[i]});
              continue;
            }
            omega[i] = d;
            if (i < family.children.size()) {
              inst_.children_[family.children[i]].initial_daycare = d;
            }
          }
        }
      }
      family.has_initial = std::any_of(omega.begin(), omega.end(),
                                       [](int d) { return d != kDummy; });
      BuildPreferences(entry, family, omega);
      inst_.families_.push_back(std::move(family));
    }
  }

  void BuildPreferences(const InstanceDocument::FamilyEntry& entry,
                        Family& family, const std::vector<int>& omega) {
    const size_t k = entry.children.size();
    std::set<std::vector<int>> seen;
    for (size_t p = 0; p < entry.preferences.size(); ++p) {
      const auto& raw = entry.preferences[p];
      const std::string where =
          "family " + entry.id + ", tuple " + std::to_string(p + 1);
      if (raw.size() != k) {
        Fail("tuple-length-mismatch",
             where + ": tuple length " + std::to_string(raw.size()) +
                 " does not match " + std::to_string(k) + " children",
             {entry.id});
        continue;
      }
      std::vector<int> tuple;
      bool known = true;
      for (size_t i = 0; i < raw.size(); ++i) {
        const std::string& id = raw[i];
        const int d = inst_.DaycareIndex(id);
        if (d == kUnknownDaycare) {
          Fail("unknown-daycare",
               where + ", entry " + std::to_string(i + 1) + ": daycare '" + id +
                   "' not declared",
               {entry.id, id});
          known = false;
        }
        tuple.push_back(d);
      }
      if (!known) continue;
      if (std::all_of(tuple.begin(), tuple.end(),
                      [](int d) { return d == kDummy; })) {
        Fail("all-dummy-tuple", where + ": tuple consists only of d0",
             {entry.id});
        continue;
      }
      if (!seen.insert(tuple).second) {
        Fail("duplicate-tuple", where + ": tuple listed more than once",
             {entry.id});
        continue;
      }
      family.preferences.push_back(std::move(tuple));
    }
    if (family.has_initial &&
        (family.preferences.empty() || family.preferences.back() != omega)) {
      Fail("appended-initial-violation",
           "family " + entry.id +
               ": last preference tuple must equal the initial enrollments",
           {entry.id});
    }
  }

  void ResolvePriorities() {
    const bool strict = inst_.mode_ == PriorityMode::kStrict;
    for (int d = 0; d < inst_.num_daycares(); ++d) {
      Daycare& daycare = inst_.daycares_[d];
      const auto& entry = doc_.daycares[DocumentIndex(daycare.id)];
      daycare.rank.assign(inst_.num_children(), -1);
      for (const auto& tie_class : entry.priority) {
        if (tie_class.empty()) {
          Fail("empty-tie-class",
               "daycare " + daycare.id + ": empty priority class",
               {daycare.id});
          continue;
        }
        if (strict && tie_class.size() > 1) {
          Fail("tie-in-strict-mode",
               "daycare " + daycare.id +
                   ": tied priority class in a strict-priority instance",
               {daycare.id});
        }
        std::vector<int> members;
        const int rank = static_cast<int>(daycare.priority.size());
        for (const auto& id : tie_class) {
          const int c = inst_.ChildIndex(id);
          if (c < 0) {
            Fail("unknown-child",
                 "daycare " + daycare.id + ": priority names unknown child '" +
                     id + "'",
                 {daycare.id, id});
            continue;
          }
          if (daycare.rank[c] != -1) {
            Fail("duplicate-priority-entry",
                 "daycare " + daycare.id + ": child " + id +
                     " ranked more than once",
                 {daycare.id, id});
            continue;
          }
          daycare.rank[c] = rank;
          members.push_back(c);
        }
        if (!members.empty()) daycare.priority.push_back(std::move(members));
      }
    }
  }

  int DocumentIndex(const std::string& daycare_id) const {
    for (size_t i = 0; i < doc_.daycares.size(); ++i) {
      if (doc_.daycares[i].id == daycare_id) return static_cast<int>(i);
    }
    return -1;
  }

  void CheckApplicantsRanked() {
    for (const Family& family : inst_.families_) {
      for (size_t i = 0; i < family.children.size(); ++i) {
        const int c = family.children[i];
        std::set<int> named;
        for (const auto& tuple : family.preferences) {
          if (tuple[i] != kDummy) named.insert(tuple[i]);
        }
        if (inst_.children_[c].initial_daycare != kDummy) {
          named.insert(inst_.children_[c].initial_daycare);
        }
        for (int d : named) {
          if (inst_.daycares_[d].rank[c] == -1) {
            Fail("priority-missing-applicant",
                 "daycare " + inst_.daycares_[d].id +
                     ": priority does not rank applicant " +
                     inst_.children_[c].id,
                 {inst_.daycares_[d].id, inst_.children_[c].id, family.id});
          }
        }
      }
    }
  }

  void CheckIncumbentPriority() {
    const Severity severity = options_.allow_unprioritized_incumbents
                                  ? Severity::kWarning
                                  : Severity::kError;
    for (int d = 0; d < inst_.num_daycares(); ++d) {
      const Daycare& daycare = inst_.daycares_[d];
      // The worst incumbent class must be strictly better than the best
      // non-incumbent class.
      int worst_incumbent = -1;
      int worst_incumbent_child = -1;
      for (int c = 0; c < inst_.num_children(); ++c) {
        if (inst_.children_[c].initial_daycare == d &&
            daycare.rank[c] > worst_incumbent) {
          worst_incumbent = daycare.rank[c];
          worst_incumbent_child = c;
        }
      }
      if (worst_incumbent < 0) continue;
      for (int r = 0; r <= worst_incumbent; ++r) {
        for (int c : daycare.priority[r]) {
          if (inst_.children_[c].initial_daycare == d) continue;
          Add(severity, "incumbent-priority",
              "daycare " + daycare.id + ": new applicant " +
                  inst_.children_[c].id +
                  " is not ranked below initially enrolled child " +
                  inst_.children_[worst_incumbent_child].id,
              {daycare.id, inst_.children_[c].id,
               inst_.children_[worst_incumbent_child].id});
        }
      }
    }
  }

  void CheckInitialFeasible() {
    const Severity severity =
        options_.allow_overfull_initial ? Severity::kWarning : Severity::kError;
    for (const Daycare& daycare : inst_.daycares_) {
      std::vector<int> count(daycare.groups.size(), 0);
      const int d = inst_.DaycareIndex(daycare.id);
      for (const Child& child : inst_.children_) {
        if (child.initial_daycare == d) {
          ++count[daycare.group_of_grade[child.grade]];
        }
      }
      for (size_t g = 0; g < count.size(); ++g) {
        if (count[g] > daycare.groups[g].quota) {
          Add(severity, "initial-overfull",
              "daycare " + daycare.id + ": " + std::to_string(count[g]) +
                  " initially enrolled children in a grade group with quota " +
                  std::to_string(daycare.groups[g].quota),
              {daycare.id});
        }
      }
    }
  }

  const InstanceDocument& doc_;
  const ValidationOptions& options_;
  Instance inst_;
  ValidationReport report_;
};

ValidationOutcome ValidateInstance(const InstanceDocument& doc,
                                   const ValidationOptions& options) {
  return InstanceBuilder(doc, options).Run();
}

Instance ValidateOrThrow(const InstanceDocument& doc,
                         const ValidationOptions& options) {
  ValidationOutcome outcome = ValidateInstance(doc, options);
  if (!outcome.instance) {
    throw InvalidArgument("invalid instance:\n" + outcome.report.ToString());
  }
  return std::move(*outcome.instance);
}

InstanceDocument ToDocument(const Instance& instance) {
  InstanceDocument doc;
  doc.mode = instance.mode();
  doc.grades.assign(instance.grades().begin(), instance.grades().end());
  for (const Daycare& d : instance.daycares()) {
    InstanceDocument::DaycareEntry entry;
    entry.id = d.id;
    for (int g = 0; g < instance.num_grades(); ++g) {
      entry.quotas[doc.grades[g]] = d.quotas[g];
    }
    for (const GradeGroup& group : d.groups) {
      std::vector<std::string> members;
      for (int g : group.grades) members.push_back(doc.grades[g]);
      entry.grade_groups.push_back(std::move(members));
    }
    for (const auto& tie_class : d.priority) {
      std::vector<std::string> members;
      for (int c : tie_class) members.push_back(instance.child(c).id);
      entry.priority.push_back(std::move(members));
    }
    doc.daycares.push_back(std::move(entry));
  }
  for (const Family& f : instance.families()) {
    InstanceDocument::FamilyEntry entry;
    entry.id = f.id;
    for (int c : f.children) {
      entry.children.push_back(
          {instance.child(c).id, doc.grades[instance.child(c).grade]});
      if (f.has_initial) {
        entry.initial.push_back(
            instance.DaycareName(instance.child(c).initial_daycare));
      }
    }
    for (const auto& tuple : f.preferences) {
      std::vector<std::string> ids;
      for (int d : tuple) ids.push_back(instance.DaycareName(d));
      entry.preferences.push_back(std::move(ids));
    }
    doc.families.push_back(std::move(entry));
  }
  return doc;
}

}  // namespace daycare
