#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>
#include <json.hpp>

namespace {

struct CliRun {
  int code = -1;
  std::string out;
  std::string err;
};

CliRun run(const std::string& binary, const std::string& args) {
  const auto err_path = std::filesystem::temp_directory_path() / ("sumprod_cli_err_" + std::to_string(::getpid()));
  const std::string cmd = "'" + binary + "' " + args + " 2>'" + err_path.string() + "'";
  CliRun r;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  const int status = ::pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream in(err_path);
  std::stringstream ss;
  ss << in.rdbuf();
  r.err = ss.str();
  std::filesystem::remove(err_path);
  return r;
}

CliRun cli(const std::string& args) { return run(SUMPROD_CLI, args); }

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TEST(CliTest, StatsJson) {
  CliRun r = cli("stats --p 101 --set list:0,1,2 --json");
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["sumset"], 5);
  EXPECT_EQ(j["E2"], 19);
  EXPECT_EQ(j["E4"], 115);
  EXPECT_EQ(j["dyadic_argmax"]["t"], 2);
  EXPECT_EQ(j["reports"].size(), 3u);
}

TEST(CliTest, StatsText) {
  CliRun r = cli("stats --p 101 --set list:0,1,2 --poly quad2:1,0,0,0,1,0");
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("|A+A|"), std::string::npos);
  EXPECT_NE(r.out.find("115"), std::string::npos);
}

TEST(CliTest, SyntaxErrorsExitTwo) {
  CliRun r = cli("stats --p 101 --set list:0,1 --poly quad2:1,2");
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("SpecSyntax"), std::string::npos) << r.err;
  EXPECT_EQ(cli("stats --p 100 --set list:0").code, 2);
  EXPECT_EQ(cli("frobnicate").code, 2);
  EXPECT_EQ(cli("stats --set list:0").code, 2);
}

TEST(CliTest, Classify) {
  CliRun r = cli("classify --p 7 --poly quad2:1,1,2,0,0,3 --json");
  ASSERT_EQ(r.code, 0);
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["degeneracy"]["tag"], "Degenerate");
  EXPECT_TRUE(j["degeneracy"].contains("witness"));
  CliRun s = cli("classify --p 101 --poly quad2:1,0,0,0,1,0 --json");
  auto k = nlohmann::json::parse(s.out);
  EXPECT_EQ(k["degeneracy"]["tag"], "NonDegenerate");
  EXPECT_EQ(k["lift_form3"]["tag"], "NotOfForm");
}

TEST(CliTest, VerifyExitCodes) {
  CliRun ok = cli("verify --trials 20");
  EXPECT_EQ(ok.code, 0) << ok.out;
  EXPECT_EQ(ok.out.find("FAIL"), std::string::npos);
  CliRun bad = run(SUMPROD_CLI_FAULTY, "verify --trials 20");
  EXPECT_EQ(bad.code, 1);
  EXPECT_NE(bad.out.find("FAIL setstats.energy_oracle"), std::string::npos) << bad.out;
  CliRun vacuous = cli("verify --trials 0");
  EXPECT_EQ(vacuous.code, 0);
  EXPECT_NE(vacuous.err.find("warning"), std::string::npos);
}

TEST(CliTest, D4) {
  CliRun r = cli("d4 --p 5 --set list:0,1 --json");
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["value"], "9/8");
  EXPECT_EQ(j["mode"], "Exact");
  EXPECT_EQ(j["maximizer"], nlohmann::json({0, 1}));
  CliRun big = cli("d4 --p 101 --set list:0,1");
  EXPECT_EQ(big.code, 3);
  EXPECT_NE(big.err.find("UniverseTooLarge"), std::string::npos);
  CliRun search = cli("d4 --p 101 --set list:0,1 --mode search --json");
  ASSERT_EQ(search.code, 0);
  EXPECT_EQ(nlohmann::json::parse(search.out)["mode"], "HeuristicLowerBound");
}

TEST(CliTest, SweepWritesCsvAndManifest) {
  const auto dir = std::filesystem::temp_directory_path() / ("sumprod_cli_" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  const auto a = dir / "a.csv", b = dir / "b.csv";
  const std::string common = "sweep --p 10007 --family rand --sizes 8,16,32 --seed 9 --poly quad2:1,0,0,0,1,0 --d4";
  ASSERT_EQ(cli(common + " --out " + a.string()).code, 0);
  ASSERT_EQ(cli(common + " --workers 3 --out " + b.string()).code, 0);
  const std::string csv = slurp(a);
  EXPECT_EQ(csv, slurp(b));
  EXPECT_EQ(csv.rfind("family_id,p,size,", 0), 0u);
  auto m = nlohmann::json::parse(slurp(dir / "a.csv.json"));
  EXPECT_EQ(m["manifest"]["seed"], 9);
  EXPECT_EQ(m["manifest"]["sizes"], nlohmann::json({8, 16, 32}));
  EXPECT_EQ(m["manifest"]["digests"]["csv"].get<std::string>().size(), 64u);
  EXPECT_EQ(m["rows"], 3);
  EXPECT_EQ(m["fit"]["points"], 3);
  std::filesystem::remove_all(dir);
}

TEST(CliTest, SweepLimitErrorsExitThree) {
  CliRun r = cli("sweep --p 101 --family interval:0 --sizes 4,11 --sqrt-p-guard");
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("SizeAboveSqrtP"), std::string::npos) << r.err;
  EXPECT_EQ(cli("sweep --p 101 --family interval:0 --sizes 4,2").code, 2);
}

TEST(CliTest, IncidenceCheck) {
  CliRun r = cli("incidence-check --p 5 --full --json");
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["reports"][0]["lhs"], 3875);
  EXPECT_EQ(j["reports"][0]["holds"], "True");
  EXPECT_EQ(cli("incidence-check --p 7 --trials 5").code, 0);
}

}  // namespace
