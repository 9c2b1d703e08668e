#include "daycare/io.h"

#include <gtest/gtest.h>

#include <filesystem>
#include <nlohmann/json.hpp>
#include <random>

#include "daycare/error.h"
#include "daycare/solver.h"
#include "daycare/synthgen.h"
#include "support/fixtures.h"
#include "support/random_market.h"

namespace daycare {
namespace {

using testing::FixtureText;
using testing::LoadInstance;

std::string Canonical(const std::string& text) {
  return WriteInstance(ParseInstance(text));
}

ParseError ParseFailure(const std::string& text) {
  try {
    ParseInstance(text);
  } catch (const ParseError& e) {
    return e;
  }
  ADD_FAILURE() << "no ParseError for: " << text;
  return ParseError("", "");
}

TEST(InstanceDocuments, FixturesParse) {
  const InstanceDocument doc = ParseInstance(FixtureText("example3.json"));
  EXPECT_EQ(doc.grades.size(), 6u);
  ASSERT_EQ(doc.daycares.size(), 1u);
  EXPECT_EQ(doc.daycares[0].grade_groups.size(), 3u);
  EXPECT_EQ(doc.daycares[0].quotas.at("3"), 2);
  EXPECT_EQ(doc.daycares[0].priority.size(), 4u);
  EXPECT_EQ(doc.families.size(), 4u);
  EXPECT_EQ(doc.mode, PriorityMode::kStrict);
}

TEST(InstanceDocuments, CanonicalFormIsAFixedPoint) {
  for (const char* name :
       {"example1.json", "example3.json", "example4.json", "trivial.json"}) {
    const std::string once = Canonical(FixtureText(name));
    EXPECT_EQ(Canonical(once), once) << name;
    EXPECT_EQ(ParseInstance(once), ParseInstance(FixtureText(name))) << name;
    EXPECT_EQ(once.back(), '\n');
  }
}

TEST(InstanceDocuments, RandomDocumentsRoundTrip) {
  std::mt19937_64 rng(71);
  for (int trial = 0; trial < 300; ++trial) {
    testing::MarketShape shape;
    shape.ties = trial % 3 == 0;
    const InstanceDocument doc = testing::RandomDocument(shape, rng);
    const std::string text = WriteInstance(doc);
    EXPECT_EQ(ParseInstance(text), doc);
    EXPECT_EQ(WriteInstance(ParseInstance(text)), text);
    EXPECT_EQ(WriteInstance(ValidateOrThrow(doc)), text);
  }
}

TEST(InstanceDocuments, PriorityEntriesMayBeIdsOrTieClasses) {
  const std::string text = R"({
    "kind": "instance", "schema_version": 1, "mode": "ties", "grades": ["0"],
    "daycares": [{"id": "d1", "quotas": {"0": 1},
                  "priority": ["c1", ["c2", "c3"]]}],
    "families": [
      {"id": "f1", "children": [{"id": "c1", "grade": "0"}], "preferences": [["d1"]]},
      {"id": "f2", "children": [{"id": "c2", "grade": "0"}], "preferences": [["d1"]]},
      {"id": "f3", "children": [{"id": "c3", "grade": "0"}], "preferences": [["d1"]]}
    ]})";
  const InstanceDocument doc = ParseInstance(text);
  EXPECT_EQ(doc.mode, PriorityMode::kIndifference);
  EXPECT_EQ(doc.daycares[0].priority,
            (std::vector<std::vector<std::string>>{{"c1"}, {"c2", "c3"}}));
  EXPECT_EQ(ParseInstance(WriteInstance(doc)), doc);
}

TEST(InstanceDocuments, ModeDefaultsToStrict) {
  nlohmann::json j = nlohmann::json::parse(FixtureText("trivial.json"));
  j.erase("mode");
  EXPECT_EQ(ParseInstance(j.dump()).mode, PriorityMode::kStrict);
}

TEST(InstanceDocuments, StructuredErrors) {
  const ParseError syntax =
      ParseFailure("{\n  \"kind\": \"instance\",\n  oops\n}");
  EXPECT_EQ(syntax.line(), 3);
  EXPECT_NE(std::string(syntax.what()).find("malformed JSON"),
            std::string::npos);

  nlohmann::json base = nlohmann::json::parse(FixtureText("example4.json"));
  auto edited = [&](auto edit) {
    nlohmann::json j = base;
    edit(j);
    return ParseFailure(j.dump());
  };
  EXPECT_EQ(edited([](auto& j) { j["colour"] = 1; }).path(), "/colour");
  EXPECT_EQ(edited([](auto& j) { j["kind"] = "matching"; }).path(), "/kind");
  EXPECT_EQ(edited([](auto& j) { j["schema_version"] = 2; }).path(),
            "/schema_version");
  EXPECT_EQ(edited([](auto& j) { j["mode"] = "fuzzy"; }).path(), "/mode");
  EXPECT_EQ(
      edited([](auto& j) { j["daycares"][1]["quotas"]["0"] = "one"; }).path(),
      "/daycares/1/quotas/0");
  EXPECT_EQ(
      edited([](auto& j) { j["families"][0].erase("preferences"); }).path(),
      "/families/0");
  EXPECT_EQ(
      edited([](auto& j) { j["families"][1]["preferences"][0] = "d1"; }).path(),
      "/families/1/preferences/0");
  EXPECT_EQ(edited([](auto& j) { j["grades"] = {0}; }).path(), "/grades/0");
  EXPECT_THROW(ParseInstance("[]"), ParseError);
  EXPECT_THROW(ParseInstance(""), ParseError);
}

TEST(InstanceDocuments, TruncatedInputsNeverCrash) {
  const std::string text = FixtureText("example4.json");
  for (size_t cut = 0; cut < text.size(); cut += 7) {
    try {
      const InstanceDocument doc = ParseInstance(text.substr(0, cut));
      ValidateInstance(doc);
    } catch (const Error&) {
    }
  }
}

TEST(MatchingDocuments, FixturesRead) {
  const Instance instance = LoadInstance("example4.json");
  const MatchingRecord mu1 =
      ReadMatching(FixtureText("example4_mu1.json"), instance);
  EXPECT_EQ(mu1.matching.position_of(0), 0);
  EXPECT_EQ(mu1.matching.position_of(1), kUnmatched);
  EXPECT_FALSE(mu1.theta.has_value());
}

TEST(MatchingDocuments, SolverOutputRoundTrips) {
  for (const char* name : {"example1.json", "example4.json", "trivial.json"}) {
    const Instance instance = LoadInstance(name);
    const SolveResult result = Solve(instance);
    const std::string text = WriteMatching(instance, result);
    const MatchingRecord record = ReadMatching(text, instance);
    EXPECT_EQ(record, ToRecord(result));
    EXPECT_EQ(WriteMatching(instance, record), text);
    EXPECT_EQ(record.statistics->nodes, result.statistics.nodes);
  }
}

TEST(MatchingDocuments, RandomMatchingsRoundTrip) {
  std::mt19937_64 rng(72);
  for (int trial = 0; trial < 300; ++trial) {
    const Instance instance = testing::RandomInstance({}, rng);
    MatchingRecord record;
    record.matching = Matching::FromPositions(
        instance, testing::RandomFeasiblePositions(instance, rng));
    if (trial % 2) {
      record.theta = trial % 5;
      record.seed = rng();
      record.optimality = Optimality::kBestFound;
    }
    const std::string text = WriteMatching(instance, record);
    EXPECT_EQ(ReadMatching(text, instance), record);
    EXPECT_EQ(WriteMatching(instance, ReadMatching(text, instance)), text);
  }
}

TEST(MatchingDocuments, WallTimeIsNotWritten) {
  const Instance instance = LoadInstance("example4.json");
  SolveResult result = Solve(instance);
  const std::string a = WriteMatching(instance, result);
  result.statistics.wall_ms += 1234;
  EXPECT_EQ(WriteMatching(instance, result), a);
  EXPECT_EQ(a.find("wall"), std::string::npos);
}

TEST(MatchingDocuments, Errors) {
  const Instance instance = LoadInstance("example4.json");
  nlohmann::json base = nlohmann::json::parse(FixtureText("example4_mu1.json"));
  auto read = [&](auto edit) {
    nlohmann::json j = base;
    edit(j);
    ReadMatching(j.dump(), instance);
  };
  EXPECT_THROW(read([](auto& j) { j["assignment"].erase(0); }), MatchingError);
  EXPECT_THROW(read([](auto& j) { j["assignment"][1]["child"] = "c1"; }),
               MatchingError);
  EXPECT_THROW(read([](auto& j) { j["assignment"][0]["daycare"] = "d9"; }),
               MatchingError);
  EXPECT_THROW(read([](auto& j) { j["assignment"][0]["child"] = "c9"; }),
               MatchingError);
  EXPECT_THROW(read([](auto& j) { j["families"][0]["position"] = nullptr; }),
               MatchingError);
  EXPECT_THROW(read([](auto& j) { j["families"][1]["position"] = 2; }),
               MatchingError);
  EXPECT_THROW(read([](auto& j) { j["assignment"][2]["daycare"] = "d2"; }),
               MatchingError);
  EXPECT_THROW(read([](auto& j) { j["kind"] = "instance"; }), ParseError);
  EXPECT_THROW(read([](auto& j) { j["extra"] = true; }), ParseError);
  EXPECT_THROW(read([](auto& j) { j["optimality"] = "maybe"; }), ParseError);
  EXPECT_NO_THROW(read([](auto& j) { j.erase("families"); }));
}

nlohmann::json Audit(const std::string& matching_fixture) {
  const Instance instance = LoadInstance("example4.json");
  const Matching m = testing::LoadMatching(matching_fixture, instance);
  return nlohmann::json::parse(WriteAuditReport(instance, m));
}

TEST(AuditReport, MuOne) {
  const nlohmann::json report = Audit("example4_mu1.json");
  EXPECT_EQ(report["kind"], "audit");
  EXPECT_EQ(report["summary"]["blocking"], 1);
  EXPECT_EQ(report["summary"]["justified_envy"], 1);
  EXPECT_EQ(report["summary"]["waste"], 0);
  EXPECT_EQ(report["summary"]["matched_children"], 2);
  EXPECT_EQ(report["summary"]["fair"], false);
  EXPECT_EQ(report["summary"]["non_wasteful"], true);
  EXPECT_EQ(report["summary"]["stable"], false);
  ASSERT_EQ(report["blocking"].size(), 1u);
  EXPECT_EQ(report["blocking"][0]["family"], "f2");
  EXPECT_EQ(report["blocking"][0]["position"], 2);
  EXPECT_EQ(report["blocking"][0]["kind"], "justified-envy");
  EXPECT_EQ(report["blocking"][0]["displaced"], nlohmann::json({"c2"}));
  EXPECT_EQ(report["feasibility"]["feasible"], true);
  EXPECT_EQ(report["individual_rationality"]["rational"], true);
}

TEST(AuditReport, MuTwo) {
  const nlohmann::json report = Audit("example4_mu2.json");
  EXPECT_EQ(report["summary"]["blocking"], 1);
  EXPECT_EQ(report["summary"]["waste"], 1);
  EXPECT_EQ(report["summary"]["fair"], true);
  EXPECT_EQ(report["summary"]["non_wasteful"], false);
  EXPECT_EQ(report["blocking"][0]["position"], 1);
  EXPECT_EQ(report["blocking"][0]["kind"], "waste");
  EXPECT_TRUE(report["blocking"][0]["displaced"].empty());
}

TEST(AuditReport, StableAndInfeasibleMatchings) {
  const Instance instance = LoadInstance("example1.json");
  const nlohmann::json stable = nlohmann::json::parse(
      WriteAuditReport(instance, Solve(instance).matching));
  EXPECT_EQ(stable["summary"]["stable"], true);
  EXPECT_EQ(stable["summary"]["fair"], true);
  EXPECT_EQ(stable["summary"]["non_wasteful"], true);
  EXPECT_TRUE(stable["blocking"].empty());

  const Instance four = LoadInstance("example4.json");
  const nlohmann::json bad = nlohmann::json::parse(
      WriteAuditReport(four, Matching::FromPositions(four, {0, 0})));
  EXPECT_EQ(bad["feasibility"]["feasible"], false);
  EXPECT_EQ(bad["feasibility"]["violations"].size(), 1u);
  EXPECT_TRUE(bad["blocking"].is_null());
  EXPECT_EQ(bad["summary"]["stable"], false);
}

TEST(Files, ReadWriteAndMissingFile) {
  const auto path =
      std::filesystem::temp_directory_path() / "daycare_io_test.json";
  WriteFile(path, "abc\n");
  EXPECT_EQ(ReadFile(path), "abc\n");
  std::filesystem::remove(path);
  EXPECT_THROW(ReadFile(path), Error);
}

TEST(Generated, PresetDocumentsRoundTrip) {
  for (const std::string& name : PresetNames()) {
    GenParams params = Preset(name);
    params.seed = 5;
    const std::string text = WriteInstance(GenerateDocument(params));
    EXPECT_EQ(Canonical(text), text) << name;
    EXPECT_EQ(WriteInstance(Generate(params)), text) << name;
  }
}

}  // namespace
}  // namespace daycare
