#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "cli.hpp"
#include "tsnsim/export.hpp"
#include "tsnsim/scenario.hpp"

using namespace tsnsim;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("tsnsim_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

fs::path short_scenario(const fs::path& dir) {
  ScenarioConfig c = bundled_scenario("generic-ct-gcl1-1");
  c.duration_s = 0.1;
  c.ptp.warmup_s = 1.0;
  const auto file = dir / "short.json";
  write_text(file, dump_scenario(c));
  return file;
}

}  // namespace

TEST(Cli, ListsFigures) {
  const Outcome o = cli({"reproduce", "--list"});
  EXPECT_EQ(o.code, 0);
  EXPECT_NE(o.out.find("baseline-generic\n"), std::string::npos);
  EXPECT_NE(o.out.find("txinject\n"), std::string::npos);
}

TEST(Cli, DumpIsParseable) {
  const Outcome o = cli({"reproduce", "real-ct-spq", "--dump"});
  ASSERT_EQ(o.code, 0);
  EXPECT_EQ(parse_scenario(o.out).selection, SelectionPolicy::Spq);
}

TEST(Cli, UnknownFigureIsConfigError) {
  const Outcome o = cli({"reproduce", "figure-99"});
  EXPECT_EQ(o.code, 1);
  EXPECT_NE(o.err.find("figure-99"), std::string::npos);
}

TEST(Cli, MissingSeedIsConfigError) {
  const auto dir = scratch("noseed");
  write_text(dir / "s.json", R"({"name": "noseed", "duration_s": 0.1})");
  const Outcome o = cli({"run", (dir / "s.json").string(), "--out", (dir / "out").string()});
  EXPECT_EQ(o.code, 1);
  EXPECT_NE(o.err.find("seed"), std::string::npos);
  EXPECT_FALSE(fs::exists(dir / "out" / "records.csv"));
}

TEST(Cli, MissingFileIsIoError) {
  const Outcome o = cli({"run", "/nonexistent/scenario.json"});
  EXPECT_EQ(o.code, 3);
}

TEST(Cli, BadFlagIsUsageError) {
  const Outcome o = cli({"run"});
  EXPECT_EQ(o.code, 1);
  EXPECT_FALSE(o.err.empty());
}

TEST(Cli, RunWritesOutputs) {
  const auto dir = scratch("run");
  const Outcome o = cli({"run", short_scenario(dir).string(), "--out", (dir / "out").string(), "--format", "csv,json"});
  ASSERT_EQ(o.code, 0) << o.err;
  EXPECT_TRUE(fs::exists(dir / "out" / "records.csv"));
  EXPECT_TRUE(fs::exists(dir / "out" / "result.json"));
  EXPECT_FALSE(fs::exists(dir / "out" / "ccdf.svg"));
  EXPECT_NE(o.out.find("theta-high"), std::string::npos);
}

TEST(Cli, SweepMakesOneDirectoryPerValue) {
  const auto dir = scratch("sweep");
  const Outcome o = cli({"sweep", short_scenario(dir).string(), "--vary", "gcl.slot_units=1,3", "--out",
                         (dir / "out").string(), "--format", "json"});
  ASSERT_EQ(o.code, 0) << o.err;
  EXPECT_TRUE(fs::exists(dir / "out" / "gcl.slot_units=1" / "result.json"));
  EXPECT_TRUE(fs::exists(dir / "out" / "gcl.slot_units=3" / "result.json"));

  const Outcome c = cli({"compare", (dir / "out" / "gcl.slot_units=1").string(), (dir / "out" / "gcl.slot_units=3").string(),
                         "--out", (dir / "cmp.svg").string()});
  ASSERT_EQ(c.code, 0) << c.err;
  EXPECT_TRUE(fs::exists(dir / "cmp.svg"));
}

TEST(Cli, SeedFlagOverrides) {
  const auto dir = scratch("seed");
  const auto file = short_scenario(dir);
  ASSERT_EQ(cli({"run", file.string(), "--seed", "99", "--out", (dir / "a").string(), "--format", "json"}).code, 0);
  EXPECT_EQ(parse_result_json(read_text(dir / "a" / "result.json")).seed, 99u);
}
