#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "resdp/cli.hpp"

namespace resdp {
namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "resdp");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("resdp_cli_" + name)).string();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string strip_timestamp(std::string json) {
  const auto at = json.find("\"timestamp\"");
  return at == std::string::npos ? json : json.substr(0, at);
}

TEST(Cli, CasimirValueAndGradient) {
  const auto r = invoke({"casimir", "--n", "2", "--m", "1", "--sign", "plus", "--point", "1,0,0"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "value 1.2599210498948732");
  EXPECT_NE(r.out.find("gradient "), std::string::npos);
}

TEST(Cli, CasimirJson) {
  const auto path = temp_path("casimir.json");
  ASSERT_EQ(invoke({"casimir", "--point", "0.6,0,0.8", "--json", path}).code, 0);
  const auto j = nlohmann::json::parse(slurp(path));
  EXPECT_NEAR(j.at("value").get<double>(), 1.0, 1e-15);
  EXPECT_EQ(j.at("gradient").size(), 3u);
}

TEST(Cli, VerifyBracketTableWritesPassingReport) {
  const auto path = temp_path("bracket.json");
  const auto r = invoke({"verify", "bracket-table", "--n", "3", "--m", "2", "--sign", "plus", "--samples", "1000", "--seed",
                         "42", "--tol", "1e-7", "--json", path});
  EXPECT_EQ(r.code, 0) << r.err;
  const auto report = report_from_json(slurp(path));
  EXPECT_TRUE(report.pass);
  EXPECT_EQ(report.check, "bracket-table");
  EXPECT_EQ(report.n, 3);
  EXPECT_EQ(report.m, 2);
  EXPECT_EQ(report.samples, 1000u);
  EXPECT_EQ(report.tolerance, 1e-7);
}

TEST(Cli, VerifyJsonIsByteIdenticalApartFromTimestamp) {
  const auto a = temp_path("det_a.json"), b = temp_path("det_b.json");
  for (const auto& path : {a, b})
    ASSERT_EQ(invoke({"verify", "dual-pair", "--n", "2", "--m", "3", "--sign", "minus", "--samples", "50", "--seed", "9",
                      "--json", path})
                  .code,
              0);
  EXPECT_EQ(strip_timestamp(slurp(a)), strip_timestamp(slurp(b)));
  const auto c = temp_path("det_c.json");
  invoke({"verify", "dual-pair", "--n", "2", "--m", "3", "--sign", "minus", "--samples", "50", "--seed", "10", "--json", c});
  EXPECT_NE(strip_timestamp(slurp(a)), strip_timestamp(slurp(c)));
}

TEST(Cli, VerifyFailureExitsOne) {
  const auto r = invoke({"verify", "identity", "--samples", "10", "--tol", "1e-300"});
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(r.out.rfind("FAIL identity", 0), 0u);
}

TEST(Cli, VerifyAllAggregates) {
  const auto path = temp_path("all.json");
  const auto r = invoke({"verify", "all", "--samples", "3", "--json", path});
  EXPECT_EQ(r.code, 0) << r.err;
  const auto reports = reports_from_json(slurp(path));
  EXPECT_EQ(reports.size(), kChecks.size() * 32);
  EXPECT_EQ(reports.front().check, "bracket-table");
  EXPECT_EQ(reports.back().check, "transitivity");
  EXPECT_EQ(nlohmann::json::parse(slurp(path)).at("pass"), true);
}

TEST(Cli, SeedFromEnvironment) {
  setenv("RESDP_SEED", "1234", 1);
  const auto path = temp_path("env.json");
  invoke({"verify", "conservation", "--samples", "5", "--json", path});
  EXPECT_EQ(report_from_json(slurp(path)).seed, 1234u);
  invoke({"verify", "conservation", "--samples", "5", "--seed", "7", "--json", path});
  EXPECT_EQ(report_from_json(slurp(path)).seed, 7u);
  setenv("RESDP_SEED", "abc", 1);
  EXPECT_EQ(invoke({"verify", "conservation"}).code, 2);
  unsetenv("RESDP_SEED");
}

TEST(Cli, MeshOneMinusOneHasTwoSheets) {
  const auto path = temp_path("h.obj");
  const auto r = invoke({"mesh", "--n", "1", "--m", "1", "--sign", "minus", "--c", "1", "--slices", "64", "--rings", "32",
                         "--out", path});
  EXPECT_EQ(r.code, 0) << r.err;
  const auto mesh = read_obj(path);
  EXPECT_EQ(mesh.vertices.size(), 2u * (64u * 32u + 1u));
  std::size_t upper = 0, lower = 0;
  for (const auto& v : mesh.vertices) (v[2] > 0 ? upper : lower)++;
  EXPECT_EQ(upper, lower);
  for (const auto& v : mesh.vertices) EXPECT_LT(std::abs(v[0] * v[0] + v[1] * v[1] - v[2] * v[2] + 1.0), 1e-8);
}

TEST(Cli, MeshCsvByExtension) {
  const auto path = temp_path("m.csv");
  ASSERT_EQ(invoke({"mesh", "--c", "1", "--slices", "8", "--rings", "4", "--out", path}).code, 0);
  EXPECT_EQ(slurp(path).rfind("x,y,z\n", 0), 0u);
}

TEST(Cli, CurveToStdout) {
  const auto r = invoke({"curve", "--n", "1", "--m", "1", "--sign", "minus", "--c", "1", "--samples", "5"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.rfind("y,z\n", 0), 0u);
  EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 11);
}

TEST(Cli, FlowDownstairsCsv) {
  const auto r = invoke({"flow", "downstairs", "--dt", "0.01", "--T", "0.5", "--start", "1,0,0"});
  EXPECT_EQ(r.code, 0) << r.err;
  std::istringstream in(r.out);
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "t,x,y,z,H,C");
  std::string line, last;
  int rows = 0;
  while (std::getline(in, line)) {
    last = line;
    ++rows;
  }
  EXPECT_EQ(rows, 51);
  // The 1:1 field about the z axis turns (1,0,0) by angle 2t clockwise.
  double t, x, y;
  std::sscanf(last.c_str(), "%lf,%lf,%lf", &t, &x, &y);
  EXPECT_NEAR(x, std::cos(1.0), 1e-8);
  EXPECT_NEAR(y, -std::sin(1.0), 1e-8);
}

TEST(Cli, FlowUpstairsDrawsStartFromSeed) {
  const auto a = invoke({"flow", "upstairs", "--n", "2", "--m", "1", "--T", "0.1", "--dt", "0.05", "--seed", "3"});
  const auto b = invoke({"flow", "upstairs", "--n", "2", "--m", "1", "--T", "0.1", "--dt", "0.05", "--seed", "3"});
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.out.rfind("t,x1,y1,x2,y2,H\n", 0), 0u);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(invoke({}).code, 2);
  EXPECT_EQ(invoke({"bogus"}).code, 2);
  EXPECT_EQ(invoke({"casimir"}).code, 2);
  EXPECT_EQ(invoke({"casimir", "--point", "1,2"}).code, 2);
  EXPECT_EQ(invoke({"casimir", "--point", "1,0,0", "--sign", "sideways"}).code, 2);
  EXPECT_EQ(invoke({"curve", "--c", "-1"}).code, 2);
  EXPECT_EQ(invoke({"verify", "nothing"}).code, 2);
  EXPECT_EQ(invoke({"mesh", "--c", "1", "--out", "/nonexistent_dir/x.obj"}).code, 2);
  // On the axis and outside B the Casimir is undefined.
  const auto r = invoke({"casimir", "--point", "0,0,1"});
  EXPECT_EQ(r.code, 3);
  EXPECT_FALSE(r.err.empty());
  EXPECT_EQ(invoke({"casimir", "--sign", "minus", "--point", "1,0,0.5"}).code, 3);
  EXPECT_EQ(invoke({"flow", "downstairs", "--sign", "minus", "--start", "1,0,0.5"}).code, 3);
}

TEST(Cli, Help) {
  const auto r = invoke({"--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("verify"), std::string::npos);
}

}  // namespace
}  // namespace resdp
