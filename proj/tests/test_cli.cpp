#include <gtest/gtest.h>

#include <json.hpp>

#include <sstream>

#include "cli.hpp"

namespace {

using json = nlohmann::json;

struct Outcome {
  int code;
  std::string out, err;
};

Outcome run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = caustic::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

json run_json(std::vector<std::string> args) {
  args.push_back("--json");
  Outcome o = run(args);
  EXPECT_EQ(o.code, 0) << o.err;
  return json::parse(o.out);
}

const char* kQuintic = "y^2*z^3-x^5";
const char* kLemniscate = "(x^2+y^2)^2-2*(x^2-y^2)*z^2";
const char* kQuartic = "2*y*z^3+2*z^2*y^2+2*z*y^3+2*y^4-2*z^3*x+2*z*y*x^2+5*y^2*x^2+3*x^4";

TEST(CliGolden, QuinticFromA2) {
  json j = run_json({"class", "--curve", kQuintic, "--source", "0:1:0"});
  EXPECT_EQ(j["class"], 8);
  EXPECT_EQ(j["consistent"], true);
}

TEST(CliGolden, LemniscateFromFiniteSource) {
  json j = run_json({"class", "--curve", kLemniscate, "--source", "1:0:1"});
  EXPECT_EQ(j["class"], 8);
  EXPECT_EQ(j["dual_degree"], 6);
}

TEST(CliGolden, QuarticFromOrigin) {
  json j = run_json({"class", "--curve", kQuartic, "--source", "0:0:1"});
  EXPECT_EQ(j["class"], 23);
  EXPECT_EQ(j["bl"], 21);
}

TEST(CliGolden, SourceOverDeclaredExtension) {
  json j = run_json({"class", "--ext", "t^3-20", "--curve", kQuintic, "--source", "-3/25*t:0:1"});
  EXPECT_EQ(j["class"], 9);
}

TEST(CliJson, FlatKeys) {
  json j = run_json({"class", "--curve", kQuintic, "--source", "2:3:1"});
  for (const char* key : {"g", "f", "f_prime", "g_prime", "q_prime", "mu_I", "mu_J", "mu_S", "c_prime",
                          "dual_degree", "mclass_theorem1", "mclass_ledger", "mclass_flemma", "delta1", "class",
                          "consistent"})
    EXPECT_TRUE(j.contains(key)) << key;
  EXPECT_EQ(j["mclass_theorem1"], 13);
  EXPECT_EQ(j["delta1"], 1);
}

TEST(CliJson, PathSelectionLeavesOthersNull) {
  json j = run_json({"class", "--curve", kQuintic, "--source", "2:3:1", "--paths", "ledger"});
  EXPECT_TRUE(j["mclass_theorem1"].is_null());
  EXPECT_TRUE(j["mclass_flemma"].is_null());
  EXPECT_EQ(j["mclass_ledger"], 13);
}

TEST(CliJson, Delta1OverrideAndEstimate) {
  json j = run_json({"class", "--curve", kQuintic, "--source", "2:3:1", "--delta1", "1"});
  EXPECT_EQ(j["class"], 13);
  j = run_json({"class", "--curve", kQuintic, "--source", "2:3:1", "--delta1", "estimate"});
  EXPECT_EQ(j["delta1"], 1);
  EXPECT_EQ(j["delta1_estimated"], true);
}

TEST(CliDeterminism, SameSeedSameBytes) {
  std::vector<std::string> args{"class", "--curve", kQuintic, "--source", "2:3:1", "--json", "--seed", "5"};
  Outcome a = run(args), b = run(args);
  EXPECT_EQ(a.out, b.out);
  args = {"branches", "--curve", kLemniscate, "--source", "1:2:3", "--json", "--seed", "9"};
  EXPECT_EQ(run(args).out, run(args).out);
}

TEST(CliExitCodes, ParseErrors) {
  Outcome o = run({"class", "--curve", "x^2+y", "--source", "0:0:1"});
  EXPECT_EQ(o.code, 1);
  EXPECT_TRUE(o.out.empty());
  EXPECT_NE(o.err.find("position"), std::string::npos);
  EXPECT_EQ(run({"class", "--curve", kQuintic, "--source", "t:0:1"}).code, 1);
  EXPECT_EQ(run({"class", "--curve", kQuintic, "--source", "1:2"}).code, 1);
  EXPECT_EQ(run({"class", "--curve", kQuintic, "--source", "0:0:0"}).code, 1);
  EXPECT_EQ(run({"class", "--curve", kQuintic, "--source", "1:1:1", "--delta1", "0"}).code, 1);
  EXPECT_EQ(run({"class", "--curve", kQuintic, "--source", "1:1:1", "--paths", "all3"}).code, 1);
  EXPECT_EQ(run({"frobnicate"}).code, 1);
  EXPECT_EQ(run({"class", "--source", "1:1:1"}).code, 1);
}

TEST(CliExitCodes, NonSquarefreeCurveIsAnInputError) {
  EXPECT_EQ(run({"class", "--curve", "(x-y)^2", "--source", "1:2:3"}).code, 1);
}

TEST(CliExitCodes, ReducibleCurveFailsWithoutReport) {
  Outcome o = run({"class", "--curve", "x^2-y^2", "--source", "1:2:3"});
  EXPECT_EQ(o.code, 3);
  EXPECT_TRUE(o.out.empty());
}

TEST(CliExitCodes, Degenerate) {
  Outcome o = run({"class", "--curve", "x^2+y^2-z^2", "--source", "0:0:1"});
  EXPECT_EQ(o.code, 2);
  EXPECT_TRUE(o.out.empty());
  EXPECT_FALSE(o.err.empty());
  EXPECT_EQ(run({"class", "--curve", kLemniscate, "--source", "1:i:0"}).code, 2);
}

TEST(CliExitCodes, UncertifiedComputation) {
  Outcome o = run({"class", "--curve", kQuartic, "--source", "0:0:1", "--max-trunc", "1"});
  EXPECT_EQ(o.code, 3);
  EXPECT_TRUE(o.out.empty());
}

TEST(CliCommands, TermsAndDualDegree) {
  json t = run_json({"terms", "--curve", kQuartic, "--source", "0:0:1"});
  EXPECT_EQ(t["g_prime"], 1);
  EXPECT_EQ(t["mu_S"], 1);
  json d = run_json({"dual-degree", "--curve", kQuartic});
  EXPECT_EQ(d["dual_degree_polar"], 12);
  EXPECT_EQ(d["dual_degree_ledger"], 12);
}

TEST(CliCommands, BasePointsAndBranches) {
  json b = run_json({"base-points", "--curve", kQuintic, "--source", "2:3:1"});
  EXPECT_EQ(b["count"], 2);
  json br = run_json({"branches", "--curve", kQuintic, "--source", "2:3:1"});
  ASSERT_FALSE(br["branches"].empty());
  for (const auto& r : br["branches"]) EXPECT_EQ(r["h"], r["h_direct"]);
}

TEST(CliCommands, VerifyAndBlCompare) {
  json v = run_json({"verify", "--curve", kLemniscate, "--source", "1:0:1"});
  EXPECT_EQ(v["verified"], true);
  EXPECT_GE(v["invariants"].size(), 7U);
  json bl = run_json({"bl-compare", "--curve", kQuartic, "--source", "0:0:1"});
  EXPECT_EQ(bl["difference"], 2);
  EXPECT_EQ(run({"bl-compare", "--curve", kQuartic, "--source", "1:2:0"}).code, 1);
}

TEST(CliCommands, TableHasOneRowPerSource) {
  json t = run_json({"table", "--curve", kLemniscate, "--sources", "1:0:1;1:2:0", "--source", "0:0:1"});
  ASSERT_EQ(t["rows"].size(), 3U);
  EXPECT_EQ(t["rows"][0]["source"], "0:0:1");
  EXPECT_EQ(t["rows"][0]["class"], 10);
  EXPECT_EQ(t["rows"][1]["class"], 8);
  EXPECT_EQ(t["rows"][2]["class"], 12);
}

TEST(CliCommands, HumanReadableByDefault) {
  Outcome o = run({"class", "--curve", kQuintic, "--source", "0:1:0"});
  EXPECT_EQ(o.code, 0);
  EXPECT_NE(o.out.find("class = 8"), std::string::npos);
}

}  // namespace
