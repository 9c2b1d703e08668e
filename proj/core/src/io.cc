#include "daycare/io.h"

#include <algorithm>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <nlohmann/json.hpp>
#include <set>
#include <sstream>

#include "daycare/error.h"
#include "daycare/validate.h"

namespace daycare {
namespace {

using Json = nlohmann::ordered_json;

std::string Escape(std::string_view key) {
  std::string out;
  for (char ch : key) {
    if (ch == '~') {
      out += "~0";
    } else if (ch == '/') {
      out += "~1";
    } else {
      out += ch;
    }
  }
  return out;
}

std::string At(const std::string& path, std::string_view key) {
  return path + "/" + Escape(key);
}

std::string At(const std::string& path, size_t index) {
  return path + "/" + std::to_string(index);
}

int LineOf(std::string_view text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 +
         static_cast<int>(std::count(text.begin(), text.begin() + byte, '\n'));
}

Json ParseJson(std::string_view text) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    const int line = e.byte > 0 ? LineOf(text, e.byte - 1) : 0;
    std::string what = e.what();
    // Drop nlohmann's "[json.exception.parse_error.101] " prefix.
    if (const auto pos = what.find("] "); pos != std::string::npos) {
      what = what.substr(pos + 2);
    }
    throw ParseError("", "malformed JSON: " + what, line);
  }
}

const char* TypeName(const Json& j) { return j.type_name(); }

void ExpectObject(const Json& j, const std::string& path,
                  std::initializer_list<const char*> required,
                  std::initializer_list<const char*> optional) {
  if (!j.is_object()) {
    throw ParseError(path,
                     std::string("expected an object, found ") + TypeName(j));
  }
  for (const auto& [key, value] : j.items()) {
    const bool known = std::any_of(required.begin(), required.end(),
                                   [&](const char* k) { return key == k; }) ||
                       std::any_of(optional.begin(), optional.end(),
                                   [&](const char* k) { return key == k; });
    if (!known) throw ParseError(At(path, key), "unknown key '" + key + "'");
  }
  for (const char* key : required) {
    if (!j.contains(key)) {
      throw ParseError(path, std::string("missing required key '") + key + "'");
    }
  }
}

const Json& ExpectArray(const Json& j, const std::string& path) {
  if (!j.is_array()) {
    throw ParseError(path,
                     std::string("expected an array, found ") + TypeName(j));
  }
  return j;
}

std::string GetString(const Json& j, const std::string& path) {
  if (!j.is_string()) {
    throw ParseError(path,
                     std::string("expected a string, found ") + TypeName(j));
  }
  return j.get<std::string>();
}

std::int64_t GetInteger(const Json& j, const std::string& path,
                        std::int64_t lo = std::numeric_limits<int>::min(),
                        std::int64_t hi = std::numeric_limits<int>::max()) {
  if (!j.is_number_integer()) {
    throw ParseError(path,
                     std::string("expected an integer, found ") + TypeName(j));
  }
  if (j.is_number_unsigned() &&
      j.get<std::uint64_t>() > static_cast<std::uint64_t>(
                                   std::numeric_limits<std::int64_t>::max())) {
    throw ParseError(path, "integer out of range");
  }
  const std::int64_t v = j.get<std::int64_t>();
  if (v < lo || v > hi) throw ParseError(path, "integer out of range");
  return v;
}

std::uint64_t GetUnsigned(const Json& j, const std::string& path) {
  if (!j.is_number_unsigned()) {
    throw ParseError(path, std::string("expected a non-negative integer, "
                                       "found ") +
                               TypeName(j));
  }
  return j.get<std::uint64_t>();
}

std::vector<std::string> GetStrings(const Json& j, const std::string& path) {
  ExpectArray(j, path);
  std::vector<std::string> out;
  for (size_t i = 0; i < j.size(); ++i)
    out.push_back(GetString(j[i], At(path, i)));
  return out;
}

void ExpectHeader(const Json& j, const char* kind) {
  const std::string found = GetString(j["kind"], "/kind");
  if (found != kind) {
    throw ParseError(
        "/kind", std::string("expected '") + kind + "', found '" + found + "'");
  }
  const std::int64_t version =
      GetInteger(j["schema_version"], "/schema_version");
  if (version != kSchemaVersion) {
    throw ParseError("/schema_version",
                     "unsupported schema version " + std::to_string(version));
  }
}

const char* ModeName(PriorityMode mode) {
  return mode == PriorityMode::kStrict ? "strict" : "ties";
}

std::string Dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace

InstanceDocument ParseInstance(std::string_view text) {
  const Json root = ParseJson(text);
  ExpectObject(root, "",
               {"kind", "schema_version", "grades", "daycares", "families"},
               {"mode"});
  ExpectHeader(root, "instance");
  InstanceDocument doc;
  doc.schema_version = kSchemaVersion;
  if (root.contains("mode")) {
    const std::string mode = GetString(root["mode"], "/mode");
    if (mode == "strict") {
      doc.mode = PriorityMode::kStrict;
    } else if (mode == "ties") {
      doc.mode = PriorityMode::kIndifference;
    } else {
      throw ParseError("/mode",
                       "expected 'strict' or 'ties', found '" + mode + "'");
    }
  }
  doc.grades = GetStrings(root["grades"], "/grades");

  const Json& daycares = ExpectArray(root["daycares"], "/daycares");
  for (size_t i = 0; i < daycares.size(); ++i) {
    const std::string path = At("/daycares", i);
    const Json& d = daycares[i];
    ExpectObject(d, path, {"id", "quotas", "priority"}, {"grade_groups"});
    InstanceDocument::DaycareEntry entry;
    entry.id = GetString(d["id"], At(path, "id"));
    const Json& quotas = d["quotas"];
    if (!quotas.is_object()) {
      throw ParseError(
          At(path, "quotas"),
          std::string("expected an object, found ") + TypeName(quotas));
    }
    for (const auto& [grade, value] : quotas.items()) {
      entry.quotas[grade] =
          static_cast<int>(GetInteger(value, At(At(path, "quotas"), grade)));
    }
    if (d.contains("grade_groups")) {
      const std::string gpath = At(path, "grade_groups");
      const Json& groups = ExpectArray(d["grade_groups"], gpath);
      for (size_t g = 0; g < groups.size(); ++g) {
        entry.grade_groups.push_back(GetStrings(groups[g], At(gpath, g)));
      }
    }
    const std::string ppath = At(path, "priority");
    const Json& priority = ExpectArray(d["priority"], ppath);
    for (size_t k = 0; k < priority.size(); ++k) {
      if (priority[k].is_array()) {
        entry.priority.push_back(GetStrings(priority[k], At(ppath, k)));
      } else if (priority[k].is_string()) {
        entry.priority.push_back({priority[k].get<std::string>()});
      } else {
        throw ParseError(At(ppath, k),
                         std::string("expected a child id or a list of child "
                                     "ids, found ") +
                             TypeName(priority[k]));
      }
    }
    doc.daycares.push_back(std::move(entry));
  }

  const Json& families = ExpectArray(root["families"], "/families");
  for (size_t i = 0; i < families.size(); ++i) {
    const std::string path = At("/families", i);
    const Json& f = families[i];
    ExpectObject(f, path, {"id", "children", "preferences"}, {"initial"});
    InstanceDocument::FamilyEntry entry;
    entry.id = GetString(f["id"], At(path, "id"));
    const std::string cpath = At(path, "children");
    const Json& children = ExpectArray(f["children"], cpath);
    for (size_t c = 0; c < children.size(); ++c) {
      const std::string child_path = At(cpath, c);
      ExpectObject(children[c], child_path, {"id", "grade"}, {});
      entry.children.push_back(
          {GetString(children[c]["id"], At(child_path, "id")),
           GetString(children[c]["grade"], At(child_path, "grade"))});
    }
    if (f.contains("initial")) {
      entry.initial = GetStrings(f["initial"], At(path, "initial"));
    }
    const std::string tpath = At(path, "preferences");
    const Json& prefs = ExpectArray(f["preferences"], tpath);
    for (size_t p = 0; p < prefs.size(); ++p) {
      entry.preferences.push_back(GetStrings(prefs[p], At(tpath, p)));
    }
    doc.families.push_back(std::move(entry));
  }
  return doc;
}

std::string WriteInstance(const InstanceDocument& doc) {
  Json root = Json::object();
  root["kind"] = "instance";
  root["schema_version"] = kSchemaVersion;
  root["mode"] = ModeName(doc.mode);
  root["grades"] = doc.grades;
  root["daycares"] = Json::array();
  for (const auto& d : doc.daycares) {
    Json entry = Json::object();
    entry["id"] = d.id;
    Json quotas = Json::object();
    // Grade-list order first, then any undeclared grades verbatim.
    for (const auto& g : doc.grades) {
      if (auto it = d.quotas.find(g); it != d.quotas.end())
        quotas[g] = it->second;
    }
    for (const auto& [g, q] : d.quotas) {
      if (!quotas.contains(g)) quotas[g] = q;
    }
    entry["quotas"] = std::move(quotas);
    if (!d.grade_groups.empty()) entry["grade_groups"] = d.grade_groups;
    Json priority = Json::array();
    for (const auto& cls : d.priority) {
      if (cls.size() == 1) {
        priority.push_back(cls[0]);
      } else {
        priority.push_back(cls);
      }
    }
    entry["priority"] = std::move(priority);
    root["daycares"].push_back(std::move(entry));
  }
  root["families"] = Json::array();
  for (const auto& f : doc.families) {
    Json entry = Json::object();
    entry["id"] = f.id;
    entry["children"] = Json::array();
    for (const auto& c : f.children) {
      Json child = Json::object();
      child["id"] = c.id;
      child["grade"] = c.grade;
      entry["children"].push_back(std::move(child));
    }
    if (!f.initial.empty()) entry["initial"] = f.initial;
    entry["preferences"] = f.preferences;
    root["families"].push_back(std::move(entry));
  }
  return Dump(root);
}

std::string WriteInstance(const Instance& instance) {
  return WriteInstance(ToDocument(instance));
}

MatchingRecord ToRecord(const SolveResult& result) {
  MatchingRecord record;
  record.matching = result.matching;
  record.theta = result.theta;
  record.blocking = result.blocking;
  record.matched_children = result.matched_children;
  record.optimality = result.optimality;
  record.seed = result.seed;
  SolveStatistics stats = result.statistics;
  stats.wall_ms = 0;
  record.statistics = stats;
  return record;
}

std::string WriteMatching(const Instance& instance,
                          const MatchingRecord& record) {
  const Matching& m = record.matching;
  Json root = Json::object();
  root["kind"] = "matching";
  root["schema_version"] = kSchemaVersion;
  root["assignment"] = Json::array();
  for (int c = 0; c < instance.num_children(); ++c) {
    Json entry = Json::object();
    entry["child"] = instance.child(c).id;
    entry["daycare"] = instance.DaycareName(m.daycare_of(c));
    root["assignment"].push_back(std::move(entry));
  }
  root["families"] = Json::array();
  for (int f = 0; f < instance.num_families(); ++f) {
    Json entry = Json::object();
    entry["id"] = instance.family(f).id;
    const Position p = m.position_of(f);
    entry["position"] = p == kUnmatched ? Json(nullptr) : Json(p + 1);
    root["families"].push_back(std::move(entry));
  }
  if (record.theta) root["theta"] = *record.theta;
  if (record.blocking) root["blocking"] = *record.blocking;
  if (record.matched_children) {
    root["matched_children"] = *record.matched_children;
  }
  if (record.optimality)
    root["optimality"] = OptimalityName(*record.optimality);
  if (record.seed) root["seed"] = *record.seed;
  if (record.statistics) {
    Json stats = Json::object();
    stats["nodes"] = record.statistics->nodes;
    stats["blocking_nodes"] = record.statistics->blocking_nodes;
    stats["matched_nodes"] = record.statistics->matched_nodes;
    stats["canonical_nodes"] = record.statistics->canonical_nodes;
    stats["canonical"] = record.statistics->canonical;
    stats["cores"] = record.statistics->cores;
    root["statistics"] = std::move(stats);
  }
  return Dump(root);
}

std::string WriteMatching(const Instance& instance, const SolveResult& result) {
  return WriteMatching(instance, ToRecord(result));
}

MatchingRecord ReadMatching(std::string_view text, const Instance& instance) {
  const Json root = ParseJson(text);
  ExpectObject(root, "", {"kind", "schema_version", "assignment"},
               {"families", "theta", "blocking", "matched_children",
                "optimality", "seed", "statistics"});
  ExpectHeader(root, "matching");

  std::vector<int> assignment(instance.num_children(), kDummy);
  std::vector<char> seen(instance.num_children(), 0);
  const Json& entries = ExpectArray(root["assignment"], "/assignment");
  for (size_t i = 0; i < entries.size(); ++i) {
    const std::string path = At("/assignment", i);
    ExpectObject(entries[i], path, {"child", "daycare"}, {});
    const std::string child = GetString(entries[i]["child"], At(path, "child"));
    const std::string daycare =
        GetString(entries[i]["daycare"], At(path, "daycare"));
    const int c = instance.ChildIndex(child);
    if (c < 0) throw MatchingError(path + ": unknown child '" + child + "'");
    if (seen[c]) {
      throw MatchingError(path + ": child '" + child + "' assigned twice");
    }
    seen[c] = 1;
    const int d = instance.DaycareIndex(daycare);
    if (d == kUnknownDaycare) {
      throw MatchingError(path + ": undeclared daycare '" + daycare + "'");
    }
    assignment[c] = d;
  }
  for (int c = 0; c < instance.num_children(); ++c) {
    if (!seen[c]) {
      throw MatchingError("child '" + instance.child(c).id +
                          "' missing from the assignment");
    }
  }

  MatchingRecord record;
  record.matching = Matching::FromAssignment(instance, std::move(assignment));

  if (root.contains("families")) {
    const Json& families = ExpectArray(root["families"], "/families");
    std::vector<char> listed(instance.num_families(), 0);
    for (size_t i = 0; i < families.size(); ++i) {
      const std::string path = At("/families", i);
      ExpectObject(families[i], path, {"id", "position"}, {});
      const std::string id = GetString(families[i]["id"], At(path, "id"));
      const int f = instance.FamilyIndex(id);
      if (f < 0) throw MatchingError(path + ": unknown family '" + id + "'");
      if (listed[f]) {
        throw MatchingError(path + ": family '" + id + "' listed twice");
      }
      listed[f] = 1;
      const Json& pos = families[i]["position"];
      const Position claimed =
          pos.is_null() ? kUnmatched
                        : static_cast<Position>(
                              GetInteger(pos, At(path, "position"), 1,
                                         std::numeric_limits<int>::max()) -
                              1);
      const Position actual = record.matching.position_of(f);
      if (claimed != actual) {
        auto show = [](Position p) {
          return p == kUnmatched ? std::string("unmatched")
                                 : "position " + std::to_string(p + 1);
        };
        throw MatchingError("family '" + id + "' claims " + show(claimed) +
                            " but its assignment is " + show(actual));
      }
    }
  }

  if (root.contains("theta")) {
    record.theta = static_cast<int>(GetInteger(root["theta"], "/theta", 0));
  }
  if (root.contains("blocking")) {
    record.blocking =
        static_cast<int>(GetInteger(root["blocking"], "/blocking", 0));
  }
  if (root.contains("matched_children")) {
    record.matched_children = static_cast<int>(
        GetInteger(root["matched_children"], "/matched_children", 0));
  }
  if (root.contains("optimality")) {
    const std::string o = GetString(root["optimality"], "/optimality");
    if (o == OptimalityName(Optimality::kProvenOptimal)) {
      record.optimality = Optimality::kProvenOptimal;
    } else if (o == OptimalityName(Optimality::kBestFound)) {
      record.optimality = Optimality::kBestFound;
    } else {
      throw ParseError("/optimality", "unknown optimality '" + o + "'");
    }
  }
  if (root.contains("seed")) record.seed = GetUnsigned(root["seed"], "/seed");
  if (root.contains("statistics")) {
    const Json& s = root["statistics"];
    ExpectObject(s, "/statistics",
                 {"nodes", "blocking_nodes", "matched_nodes", "canonical_nodes",
                  "canonical", "cores"},
                 {});
    SolveStatistics stats;
    stats.nodes = GetUnsigned(s["nodes"], "/statistics/nodes");
    stats.blocking_nodes =
        GetUnsigned(s["blocking_nodes"], "/statistics/blocking_nodes");
    stats.matched_nodes =
        GetUnsigned(s["matched_nodes"], "/statistics/matched_nodes");
    stats.canonical_nodes =
        GetUnsigned(s["canonical_nodes"], "/statistics/canonical_nodes");
    if (!s["canonical"].is_boolean()) {
      throw ParseError("/statistics/canonical", "expected a boolean");
    }
    stats.canonical = s["canonical"].get<bool>();
    stats.cores =
        static_cast<int>(GetUnsigned(s["cores"], "/statistics/cores"));
    record.statistics = stats;
  }
  return record;
}

std::string WriteAuditReport(const Instance& instance, const Matching& matching,
                             const BlockingOptions& options) {
  Json root = Json::object();
  root["kind"] = "audit";
  root["schema_version"] = kSchemaVersion;

  const FeasibilityReport feas = CheckFeasibility(instance, matching);
  auto group_json = [&](const GroupOccupancy& g) {
    Json out = Json::object();
    out["daycare"] = instance.daycare(g.daycare).id;
    Json grades = Json::array();
    for (int grade : instance.daycare(g.daycare).groups[g.group].grades) {
      grades.push_back(instance.grades()[grade]);
    }
    out["grades"] = std::move(grades);
    out["count"] = g.count;
    out["quota"] = g.quota;
    return out;
  };
  Json feasibility = Json::object();
  feasibility["feasible"] = feas.feasible;
  feasibility["groups"] = Json::array();
  for (const auto& g : feas.occupancy) {
    feasibility["groups"].push_back(group_json(g));
  }
  feasibility["violations"] = Json::array();
  for (const auto& g : feas.violations) {
    feasibility["violations"].push_back(group_json(g));
  }
  root["feasibility"] = std::move(feasibility);

  const RationalityReport ir = CheckIndividualRationality(instance, matching);
  Json rationality = Json::object();
  rationality["rational"] = ir.rational;
  rationality["violating_families"] = Json::array();
  for (int f : ir.violating_families) {
    rationality["violating_families"].push_back(instance.family(f).id);
  }
  root["individual_rationality"] = std::move(rationality);

  int envy = 0;
  int waste = 0;
  Json blocking = Json::array();
  if (feas.feasible) {
    for (const BlockingVerdict& v :
         EnumerateBlocking(instance, matching, options)) {
      Json entry = Json::object();
      entry["family"] = instance.family(v.family).id;
      entry["position"] = v.position + 1;
      entry["kind"] = BlockKindName(v.kind);
      Json displaced = Json::array();
      for (int c : v.displaced) displaced.push_back(instance.child(c).id);
      entry["displaced"] = std::move(displaced);
      blocking.push_back(std::move(entry));
      (v.kind == BlockKind::kJustifiedEnvy ? envy : waste) += 1;
    }
    root["blocking"] = std::move(blocking);
  } else {
    // Blocking is only defined for feasible matchings.
    root["blocking"] = nullptr;
  }

  Json summary = Json::object();
  summary["feasible"] = feas.feasible;
  summary["individually_rational"] = ir.rational;
  summary["blocking"] = envy + waste;
  summary["justified_envy"] = envy;
  summary["waste"] = waste;
  summary["matched_children"] = matching.matched_children();
  summary["fair"] = feas.feasible && envy == 0;
  summary["non_wasteful"] = feas.feasible && waste == 0;
  summary["stable"] = feas.feasible && envy + waste == 0;
  root["summary"] = std::move(summary);
  return Dump(root);
}

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "' for reading");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw Error("error reading '" + path.string() + "'");
  return buffer.str();
}

void WriteFile(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw Error("error writing '" + path.string() + "'");
}

}  // namespace daycare
