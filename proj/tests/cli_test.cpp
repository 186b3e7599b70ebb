#include <gtest/gtest.h>

#include "support/fixtures.hpp"
#include "support/process.hpp"
#include "tele/report.hpp"

namespace tele {
namespace {

using report::Json;
using testing::read_text;
using testing::run_cli;

const std::string kModel = TELE_MODELS_DIR "/m1.tele";
const std::string kData = TELE_TEST_DATA_DIR;
const std::string kGolden = TELE_GOLDEN_DIR;

TEST(FormatTable, AlignsOnCodePoints) {
  const WorldTable t({"W", "T₀", "long"}, {{0, 10, 1}, {1, -1, 0}});
  EXPECT_EQ(report::format_table(t), "W  T₀  long\n0  10  1\n1  -1  0\n");
}

TEST(FormatTable, EmptyTableKeepsHeader) {
  EXPECT_EQ(report::format_table(WorldTable({"A", "B"}, {})), "A  B\n");
}

TEST(TableJson, RoundTrip) {
  const WorldTable t = enumerate_worlds(testing::heating_model());
  const Json j = report::table_to_json(t);
  EXPECT_EQ(j["worlds"].size(), 4u);
  EXPECT_EQ(j["worlds"][1]["T"], 1);
  EXPECT_EQ(report::table_from_json(Json::parse(j.dump())), t);
}

TEST(Cli, Golden) {
  EXPECT_EQ(run_cli("worlds " + kModel).out, read_text(kGolden + "/worlds_m1.txt"));
  EXPECT_EQ(run_cli("finalize " + kModel + " --final warm").out, read_text(kGolden + "/finalize_warm.txt"));
  EXPECT_EQ(run_cli("reduce " + kModel + " --final warm").out, read_text(kGolden + "/reduce_warm.txt"));
  EXPECT_EQ(run_cli("distinguish " + kModel + " --final warm --final thrifty").out,
            read_text(kGolden + "/distinguish_warm_thrifty.txt"));
}

TEST(Cli, FinalizeMentionsTheDependence) {
  const auto r = run_cli("finalize " + kModel + " --final warm");
  EXPECT_EQ(r.status, 0);
  EXPECT_NE(r.out.find("W and H: dependent (expected)\n"), std::string::npos);
}

TEST(Cli, JsonRebuildsThePrintedTables) {
  for (const std::string& cmd : {"worlds " + kModel, "intervene " + kModel + " --do H",
                                "finalize " + kModel + " --final not_hot"}) {
    const auto text = run_cli(cmd);
    const auto json = run_cli("--json " + cmd);
    ASSERT_EQ(json.status, 0) << cmd;
    const Json doc = Json::parse(json.out);
    EXPECT_EQ(doc.at("diagnostics"), Json::array());
    const Json& result = doc.at("result");
    const Json& table = result.contains("compatible") ? result.at("compatible")
                        : result.contains("table")    ? result.at("table")
                                                      : result;
    const std::string printed = report::format_table(report::table_from_json(table));
    EXPECT_NE(text.out.find(printed), std::string::npos) << cmd;
  }
}

TEST(Cli, WorldsJsonShape) {
  const Json doc = Json::parse(run_cli("--json worlds " + kModel).out);
  EXPECT_EQ(doc.at("command"), "worlds");
  ASSERT_EQ(doc.at("result").at("worlds").size(), 4u);
  EXPECT_EQ(doc.at("result").at("worlds")[0], (Json{{"W", 0}, {"H", 0}, {"T", 0}, {"B", 0}}));
}

TEST(Cli, IdentifyExitCodes) {
  const auto unique = run_cli("identify " + kModel + " " + kData + "/warm.csv");
  EXPECT_EQ(unique.status, 0);
  EXPECT_NE(unique.out.find("most specific compatible hypothesis: warm"), std::string::npos);
  EXPECT_EQ(run_cli("identify " + kModel + " " + kData + "/all_worlds.csv").status, 2);
  EXPECT_EQ(run_cli("identify " + kData + "/equivalent.tele " + kData + "/equivalent.csv").status, 3);
}

TEST(Cli, IdentifyByEnumeration) {
  const auto r = run_cli("--json identify " + kModel + " " + kData + "/warm.csv --enumerate --max-effects 1");
  EXPECT_EQ(r.status, 0);
  const Json doc = Json::parse(r.out);
  EXPECT_EQ(doc.at("result").at("outcome"), "unique");
  EXPECT_EQ(doc.at("result").at("winner"), "{T}:T=1");
  EXPECT_EQ(doc.at("result").at("verdicts")[0].at("hypothesis"), "{T}:T=1");
}

TEST(Cli, Failures) {
  EXPECT_EQ(run_cli("worlds " + kData + "/missing.tele").status, 1);
  EXPECT_EQ(run_cli("finalize " + kModel + " --final lukewarm").status, 1);
  EXPECT_EQ(run_cli("intervene " + kModel + " --do Q").status, 1);
  EXPECT_NE(run_cli("").status, 0);
  const auto v = run_cli("--version");
  EXPECT_EQ(v.status, 0);
  EXPECT_EQ(v.out, "tele 0.1.0\n");
}

}  // namespace
}  // namespace tele
