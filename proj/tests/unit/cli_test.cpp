#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"

namespace chemspace::cli {
namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(std::initializer_list<std::string> args, const std::string& input = "") {
  std::vector<std::string> owned{"chemspace"};
  owned.insert(owned.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : owned) argv.push_back(a.c_str());
  std::istringstream in(input);
  std::ostringstream out, err;
  const int code = run(static_cast<int>(argv.size()), argv.data(), in, out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = std::filesystem::temp_directory_path() /
           ("chemspace_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    std::filesystem::create_directories(dir_);
    synthetic_ = path("syn.tsv");
    const auto r = invoke({"gen-synthetic", "--classes", "4", "--per-class", "8", "--seed", "3", "--out", synthetic_});
    ASSERT_EQ(r.code, 0) << r.err;
  }
  void TearDown() override { std::filesystem::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  void write(const std::string& name, const std::string& text) const { std::ofstream(path(name)) << text; }

  std::filesystem::path dir_;
  std::string synthetic_;
};

TEST_F(CliTest, GenSyntheticRoundTrips) {
  const auto ds = load_dataset(synthetic_);
  EXPECT_EQ(ds.size(), 32u);
  EXPECT_TRUE(ds.all_annotated());
  const auto bare = invoke({"gen-synthetic", "--classes", "2", "--per-class", "3", "--no-fragments"});
  ASSERT_EQ(bare.code, 0);
  std::istringstream in(bare.out);
  EXPECT_EQ(parse_dataset(in).size(), 6u);
}

TEST_F(CliTest, MeasureJsonMatchesLibrary) {
  const auto r = invoke({"measure", "--in", synthetic_, "--measures", "richness,diversity,circles:t=0.5", "--no-timing"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = json::parse(r.out);
  EXPECT_FALSE(doc.contains("timestamp"));
  ASSERT_EQ(doc["rows"].size(), 3u);
  const auto ds = load_dataset(synthetic_);
  const auto oracle = build_oracle(ds);
  const auto all = MoleculeSet::all(ds.size());
  EXPECT_EQ(doc["rows"][0]["value"].get<double>(), evaluate(parse_measure_spec("richness"), oracle, all, {&ds}).value);
  EXPECT_EQ(doc["rows"][1]["value"].get<double>(), evaluate(parse_measure_spec("diversity"), oracle, all, {&ds}).value);
  EXPECT_EQ(doc["rows"][2]["mode"], "exact");
  EXPECT_FALSE(doc["rows"][0].contains("wall_ms"));
}

TEST_F(CliTest, TimingFieldsPresentByDefault) {
  const auto r = invoke({"measure", "--in", synthetic_, "--measures", "richness"});
  ASSERT_EQ(r.code, 0);
  const auto doc = json::parse(r.out);
  EXPECT_TRUE(doc.contains("timestamp"));
  EXPECT_TRUE(doc["rows"][0].contains("wall_ms"));
}

TEST_F(CliTest, CsvHasHeaderAndOneRowPerMeasure) {
  const auto r = invoke({"measure", "--in", synthetic_, "--measures", "richness;dpp", "--format", "csv", "--no-timing"});
  ASSERT_EQ(r.code, 0);
  std::istringstream lines(r.out);
  std::string line;
  std::vector<std::string> rows;
  while (std::getline(lines, line)) rows.push_back(line);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0], "measure,value,set_size,mode,metadata");
  EXPECT_EQ(rows[1].rfind("richness,32,32,", 0), 0u) << rows[1];
}

TEST_F(CliTest, EmptyInputWarnsAndReportsZero) {
  write("empty.tsv", "# nothing\n");
  const auto r = invoke({"measure", "--in", path("empty.tsv"), "--measures", "richness,circles:t=0.5", "--no-timing"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.err.find("warning"), std::string::npos);
  const auto doc = json::parse(r.out);
  for (const auto& row : doc["rows"]) EXPECT_EQ(row["value"].get<double>(), 0.0);
}

TEST_F(CliTest, MalformedInputFailsWithLineNumber) {
  write("bad.tsv", "a\t0f\nb\tzz\n");
  const auto r = invoke({"measure", "--in", path("bad.tsv")});
  EXPECT_NE(r.code, 0);
  EXPECT_NE(r.err.find("2"), std::string::npos) << r.err;
}

TEST_F(CliTest, UnknownMeasureIsRejected) {
  const auto r = invoke({"measure", "--in", synthetic_, "--measures", "entropy"});
  EXPECT_NE(r.code, 0);
  EXPECT_NE(r.err.find("entropy"), std::string::npos);
}

TEST_F(CliTest, ExactCapFromEnvironment) {
  ::setenv("CHEMSPACE_EXACT_CAP", "4", 1);
  const auto r = invoke({"measure", "--in", synthetic_, "--measures", "circles:t=0.5", "--no-timing"});
  ::unsetenv("CHEMSPACE_EXACT_CAP");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(json::parse(r.out)["rows"][0]["mode"], "greedy");
  const auto pinned = invoke({"measure", "--in", synthetic_, "--measures", "circles:t=0.5", "--no-timing"});
  EXPECT_EQ(json::parse(pinned.out)["rows"][0]["mode"], "exact");
}

TEST_F(CliTest, SeedChangesOnlySeededMeasures) {
  const auto a = invoke({"measure", "--in", synthetic_, "--measures", "richness", "--seed", "1", "--no-timing"});
  const auto b = invoke({"measure", "--in", synthetic_, "--measures", "richness", "--seed", "2", "--no-timing"});
  EXPECT_EQ(json::parse(a.out)["rows"], json::parse(b.out)["rows"]);
}

TEST_F(CliTest, AxiomCheckReproducesQuadrants) {
  const auto r = invoke({"axiom-check", "--trials", "200", "--seed", "7", "--no-timing"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = json::parse(r.out);
  EXPECT_TRUE(doc["matches_expected"].get<bool>());
  ASSERT_EQ(doc["rows"].size(), 10u);
  EXPECT_TRUE(doc["details"][3]["subadditivity"].contains("counterexample"));
}

TEST_F(CliTest, ProtocolsProduceGoldStandardRow) {
  const auto f = invoke({"corr-fixed", "--in", synthetic_, "--n", "8", "--repeats", "10", "--runs", "2",
                         "--measures", "richness,circles:t=0.6", "--no-timing"});
  ASSERT_EQ(f.code, 0) << f.err;
  const auto fd = json::parse(f.out);
  EXPECT_EQ(fd["rows"][0]["measure"], "gs");
  EXPECT_EQ(fd["rows"][0]["value"].get<double>(), 1.0);

  const auto curves = path("curves.csv");
  const auto g = invoke({"corr-growing", "--in", synthetic_, "--n", "12", "--runs", "2", "--bias", "most-similar",
                         "--measures", "richness", "--curves", curves, "--no-timing"});
  ASSERT_EQ(g.code, 0) << g.err;
  EXPECT_EQ(json::parse(g.out)["params"]["bias"], "most-similar");
  std::ifstream cf(curves);
  std::string header;
  std::getline(cf, header);
  EXPECT_EQ(header, "run,step,gs,richness");
}

TEST_F(CliTest, SweepReportsBestT) {
  const auto r = invoke({"sweep-t", "--in", synthetic_, "--protocol", "fixed", "--n", "8", "--repeats", "10",
                         "--runs", "2", "--t-grid", "0.5:0.7:0.1", "--no-timing"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = json::parse(r.out);
  EXPECT_EQ(doc["params"]["t_grid"], json({0.5, 0.6, 0.7}));
  const double best = doc["best_t"].get<double>();
  EXPECT_TRUE(best == 0.5 || best == 0.6 || best == 0.7);
}

TEST(TGrid, RangeAndList) {
  EXPECT_EQ(parse_t_grid("0.3:0.95:0.05").size(), 14u);
  EXPECT_EQ(parse_t_grid("0.3:0.95:0.05")[8], 0.7);
  EXPECT_EQ(parse_t_grid("0.5, 0.75"), (std::vector<double>{0.5, 0.75}));
  EXPECT_THROW(parse_t_grid("0.5:1.0:0.25"), ValidationError);
  EXPECT_THROW(parse_t_grid("a:b"), ParseError);
}

TEST_F(CliTest, NoveltyScoresStdinLines) {
  const auto ds = load_dataset(synthetic_);
  const std::string member = ds.fingerprints()[0].to_hex();
  const auto r = invoke({"novelty", "--ref", synthetic_, "--t", "0.6"}, member + "\n\n" + std::string(64, '0') + "\n");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "0\n1\n");
  const auto d = invoke({"novelty", "--ref", synthetic_, "--score", "sumbottleneck"}, member + "\n");
  EXPECT_EQ(d.out, "0\n");
}

TEST_F(CliTest, CompareRepeatsOnlyGreedyCircles) {
  const auto r = invoke({"compare", "--in", synthetic_, "--in", synthetic_, "--measures",
                         "richness;circles:t=0.5,mode=greedy", "--repeats", "4", "--no-timing"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = json::parse(r.out);
  ASSERT_EQ(doc["rows"].size(), 4u);
  EXPECT_EQ(doc["rows"][0]["repeats"], 1);
  EXPECT_EQ(doc["rows"][1]["repeats"], 4);
  EXPECT_EQ(doc["matrix"]["mean"][0], doc["matrix"]["mean"][1]);
}

TEST_F(CliTest, OutFlagWritesFile) {
  const auto out = path("r.json");
  const auto r = invoke({"measure", "--in", synthetic_, "--measures", "richness", "--out", out});
  ASSERT_EQ(r.code, 0);
  EXPECT_TRUE(r.out.empty());
  std::ifstream f(out);
  EXPECT_EQ(json::parse(f)["command"], "measure");
}

TEST(CliUsage, MissingSubcommandFails) {
  EXPECT_NE(invoke({}).code, 0);
  EXPECT_NE(invoke({"measure"}).code, 0);
}

}  // namespace
}  // namespace chemspace::cli
