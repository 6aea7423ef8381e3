#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <nlohmann/json.hpp>

#include "rswp/instrumentation.hpp"

namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code = -1;
  std::string output;  // stdout and stderr
};

Outcome cli(const std::string& args) {
  const std::string cmd = std::string(RSWP_CLI_PATH) + " " + args + " 2>&1";
  Outcome o;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return o;
  char buf[4096];
  for (std::size_t n; (n = std::fread(buf, 1, sizeof buf, p)) > 0;) o.output.append(buf, n);
  const int st = pclose(p);
  o.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return o;
}

fs::path fresh(const char* name) {
  auto d = fs::temp_directory_path() / ("rswp_cli_" + std::string(name));
  fs::remove_all(d);
  return d;
}

}  // namespace

TEST(Cli, ListsScenarios) {
  const auto o = cli("scenarios");
  EXPECT_EQ(o.code, 0);
  for (const char* s : {"straight_galinstan", "straight_copper", "pec_walls", "surface_only", "l_turn_galinstan"})
    EXPECT_NE(o.output.find(s), std::string::npos) << s;
}

TEST(Cli, UnknownScenarioIsUsageError) {
  const auto o = cli("run --scenario bogus");
  EXPECT_EQ(o.code, 2);
  EXPECT_NE(o.output.find("bogus"), std::string::npos);
  EXPECT_NE(o.output.find("straight_galinstan"), std::string::npos);
}

TEST(Cli, UnknownFlagIsUsageError) {
  EXPECT_EQ(cli("run --scenario surface_only --frobnicate").code, 2);
  EXPECT_EQ(cli("").code, 2);
  EXPECT_EQ(cli("run --scenario surface_only --mode 4d").code, 2);
}

TEST(Cli, InvalidSceneFileFailsWithFieldName) {
  const auto dir = fresh("badscene");
  fs::create_directories(dir);
  std::ofstream(dir / "s.json") << R"({"slab": {"eps_r": 0.5}})";
  const auto o = cli("run --scene " + (dir / "s.json").string() + " --out " + dir.string());
  EXPECT_EQ(o.code, 1);
  EXPECT_NE(o.output.find("eps_r"), std::string::npos);
  fs::remove_all(dir);
}

TEST(Cli, EstimateReportsGrid) {
  const auto dir = fresh("estimate");
  const auto o = cli("estimate --scenario straight_galinstan --mode 3d --threads 1 --out " + dir.string());
  EXPECT_EQ(o.code, 0);
  EXPECT_NE(o.output.find("cells"), std::string::npos);
  EXPECT_NE(o.output.find("memory"), std::string::npos);
  fs::remove_all(dir);
}

TEST(Cli, ShortRunWritesTables) {
  const auto dir = fresh("run");
  const auto o = cli("run --scenario surface_only --path-lambda 6 --threads 1 --slice z=2 --out " + dir.string());
  ASSERT_EQ(o.code, 0) << o.output;
  const auto csv = dir / "surface_only" / "2d_0.25mm.csv";
  ASSERT_TRUE(fs::exists(csv));
  std::ifstream is(csv);
  std::stringstream ss;
  ss << is.rdbuf();
  const auto rows = rswp::parse_probe_csv(ss.str());
  EXPECT_GE(rows.size(), 6u);
  std::ifstream js(dir / "surface_only" / "metrics.json");
  const auto j = nlohmann::json::parse(js);
  EXPECT_TRUE(j.at("steady").get<bool>());
  bool raster = false;
  for (const auto& e : fs::directory_iterator(dir / "surface_only")) raster |= e.path().extension() == ".raster";
  EXPECT_TRUE(raster);
  fs::remove_all(dir);
}
