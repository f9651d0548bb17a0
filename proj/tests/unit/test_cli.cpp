#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <string>

#include "app.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::string kData = TCUT_DATA_DIR;

struct Outcome {
  int code = 0;
  std::string out;
  std::string err;
  json report() const { return json::parse(out); }
};

Outcome invoke(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  Outcome r;
  r.code = tcut::app::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string data(const std::string& name) { return kData + "/" + name; }

class CliFiles : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("tcut_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  std::string write(const std::string& name, const std::string& text) const {
    std::ofstream(path(name)) << text;
    return path(name);
  }

  fs::path dir_;
};

json without_timings(json j) {
  j.erase("timings");
  return j;
}

}  // namespace

TEST(Cli, ScalarMatrixHasZeroTcut) {
  const Outcome r = invoke({"tcut", data("scalar.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.report()["results"]["tcut"], 0.0);
}

TEST(Cli, ReferencePairAllMethodsAgree) {
  const Outcome r = invoke({"tcut", data("a1.json"), "--method", "all"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json res = r.report()["results"];
  EXPECT_LE(res["maxDiscrepancy"].get<double>(), 1e-4);
  EXPECT_NEAR(res["tcut"].get<double>(), 1.422833846323806, 2e-6);
  for (const char* m : {"remez", "planar", "hull"}) EXPECT_TRUE(res["methods"].contains(m)) << m;
}

TEST(Cli, ReportKeyOrder) {
  const Outcome r = invoke({"tcut", data("diag.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  std::vector<std::string> keys;
  const auto report = nlohmann::ordered_json::parse(r.out);
  for (const auto& [k, v] : report.items()) keys.push_back(k);
  EXPECT_EQ(keys, (std::vector<std::string>{"tool", "command", "input", "config", "results",
                                            "certificates", "timings"}));
}

TEST(Cli, NotHurwitzExitsTwo) {
  const Outcome r = invoke({"tcut", data("unstable.json")});
  EXPECT_EQ(r.code, 2);
  EXPECT_EQ(r.err.rfind("tcut: error: not_hurwitz: ", 0), 0u) << r.err;
  EXPECT_EQ(std::count(r.err.begin(), r.err.end(), '\n'), 1);
  EXPECT_NE(r.err.find("not Hurwitz"), std::string::npos);
}

TEST_F(CliFiles, MalformedFileReportsLineAndColumn) {
  const std::string file = write("bad.json", "{\"matrix\": [[-1, 0],\n [0, -2,]]}");
  const Outcome r = invoke({"tcut", file});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("bad.json:2:9:"), std::string::npos) << r.err;
  EXPECT_EQ(std::count(r.err.begin(), r.err.end(), '\n'), 1);
}

TEST_F(CliFiles, StructuralErrorsUseJsonPointers) {
  const Outcome r = invoke({"tcut", write("ragged.json", R"({"matrix": [[-1, 0], [0]]})")});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("/matrix/1"), std::string::npos) << r.err;
}

TEST_F(CliFiles, NumericalFailureExitsThree) {
  const Outcome r = invoke({"tcut", write("stiff.json", R"({"matrix": [[-1000, 0], [0, -0.001]]})")});
  EXPECT_EQ(r.code, 3);
  EXPECT_EQ(r.err.rfind("tcut: error: numerical: ", 0), 0u) << r.err;
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(invoke({}).code, 1);
  EXPECT_EQ(invoke({"tcut"}).code, 1);
  EXPECT_EQ(invoke({"tcut", data("a1.json"), "--bogus"}).code, 1);
  EXPECT_EQ(invoke({"tcut", data("a1.json"), "--method", "newton"}).code, 1);
  EXPECT_EQ(invoke({"tcut", data("a1.json"), "--tol", "-1"}).code, 1);
  EXPECT_EQ(invoke({"tcut", "/nonexistent/file.json"}).code, 1);
  const Outcome r = invoke({"frobnicate"});
  EXPECT_EQ(r.err.rfind("tcut: error: usage: ", 0), 0u) << r.err;
}

TEST(Cli, HelpAndVersion) {
  const Outcome h = invoke({"--help"});
  EXPECT_EQ(h.code, 0);
  EXPECT_NE(h.out.find("least-deviation"), std::string::npos);
  const Outcome v = invoke({"--version"});
  EXPECT_EQ(v.code, 0);
  EXPECT_NE(v.out.find(tcut::app::kVersion), std::string::npos);
}

TEST(Cli, ReportsAreDeterministicApartFromTimings) {
  const std::vector<std::string> args{"tcut", data("a1.json"), "--method", "all"};
  EXPECT_EQ(without_timings(invoke(args).report()), without_timings(invoke(args).report()));
  const std::vector<std::string> dw{"dwell", data("pair_system.json"), "--simulate", "20",
                                    "10", "3", "--csv", "/dev/null"};
  EXPECT_EQ(without_timings(invoke(dw).report()), without_timings(invoke(dw).report()));
}

TEST_F(CliFiles, ConfigReplayReproducesReport) {
  const std::string first = path("first.json");
  ASSERT_EQ(invoke({"--report", first, "tcut", data("a1.json"), "--tol", "1e-4", "--method", "all",
                  "--hull-samples", "1000"})
                .code,
            0);
  const std::string second = path("second.json");
  const Outcome r = invoke({"--report", second, "--config", first});
  ASSERT_EQ(r.code, 0) << r.err;
  json a, b;
  std::ifstream(first) >> a;
  std::ifstream(second) >> b;
  EXPECT_EQ(a["config"], b["config"]);
  EXPECT_EQ(a["results"], b["results"]);
  EXPECT_EQ(b["config"]["options"]["hull-samples"], 1000);

  // explicit flags override the replayed ones
  const Outcome over = invoke({"--config", first, "--tol", "1e-3"});
  ASSERT_EQ(over.code, 0) << over.err;
  EXPECT_EQ(over.report()["config"]["options"]["tol"], 1e-3);
  EXPECT_EQ(over.report()["config"]["options"]["method"], "all");
}

TEST(Cli, EnvironmentSitsBelowFlags) {
  ::setenv("TCUT_TOL", "0.001", 1);
  const Outcome env = invoke({"tcut", data("diag.json")});
  const Outcome flag = invoke({"tcut", data("diag.json"), "--tol", "1e-5"});
  ::unsetenv("TCUT_TOL");
  ASSERT_EQ(env.code, 0) << env.err;
  EXPECT_EQ(env.report()["config"]["options"]["tol"], 0.001);
  const json res = env.report()["results"];
  EXPECT_LE(res["methods"]["remez"]["tHigh"].get<double>() - res["methods"]["remez"]["tLow"].get<double>(),
            0.001);
  EXPECT_EQ(flag.report()["config"]["options"]["tol"], 1e-5);
  EXPECT_EQ(invoke({"tcut", data("diag.json")}).report()["config"]["options"]["tol"], 1e-6);
}

TEST_F(CliFiles, LeastDeviationScalarAndCsv) {
  const std::string csv = path("p.csv");
  const Outcome r = invoke({"least-deviation", data("scalar.json"), "--T", "1", "--csv", csv});
  ASSERT_EQ(r.code, 0) << r.err;
  const json res = r.report()["results"];
  EXPECT_NEAR(res["lower"].get<double>(), std::exp(1.0), 1e-6);
  EXPECT_NEAR(res["upper"].get<double>(), std::exp(1.0), 1e-6);
  EXPECT_EQ(res["status"], "converged");
  std::ifstream in(csv);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "t,value");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 1000);
  EXPECT_TRUE(r.report().contains("trace"));
}

TEST_F(CliFiles, LeastDeviationAtReferencePairThreshold) {
  const Outcome r = invoke({"least-deviation", data("a1.json"), "--T", "1.4239", "--csv", path("p.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  const json res = r.report()["results"];
  EXPECT_NEAR(res["lower"].get<double>(), 1.0, 1e-5);
  EXPECT_NEAR(res["upper"].get<double>(), 1.0, 1e-5);
  EXPECT_EQ(r.report()["certificates"]["alternance"]["points"].size(), 2u);
}

TEST(Cli, DwellReferencePair) {
  const Outcome r = invoke({"dwell", data("pair_system.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  const json res = r.report()["results"];
  ASSERT_EQ(res["rows"].size(), 2u);
  for (const auto& row : res["rows"]) {
    EXPECT_NEAR(row["criticalM"].get<double>(), 2.422833846323806, 2e-6);
  }
  EXPECT_TRUE(res["boundsCoverCritical"].get<bool>());
}

TEST_F(CliFiles, DwellValidationNamesRegime) {
  const std::string file = write("sys.json", R"({"regimes": [
    {"label": "fast", "matrix": [[-1]], "m": 1, "M": 3},
    {"label": "slow", "matrix": [[-2]], "m": 2, "M": 2}]})");
  const Outcome r = invoke({"dwell", file});
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(r.err.rfind("tcut: error: validation: ", 0), 0u) << r.err;
  EXPECT_NE(r.err.find("slow"), std::string::npos);
}

TEST_F(CliFiles, DwellNonHurwitzWritesReportAndExitsTwo) {
  const std::string file = write("sys.json", R"({"regimes": [
    {"label": "up", "matrix": [[1]], "m": 1}]})");
  const std::string report = path("r.json");
  const Outcome r = invoke({"--report", report, "dwell", file});
  EXPECT_EQ(r.code, 2);
  json j;
  std::ifstream(report) >> j;
  EXPECT_FALSE(j["results"]["allHurwitz"].get<bool>());
  EXPECT_NE(r.err.find("not_hurwitz"), std::string::npos);
}

TEST_F(CliFiles, DwellSimulationWritesNormCsv) {
  const std::string csv = path("norm.csv");
  const Outcome r = invoke({"dwell", data("pair_system.json"), "--simulate", "50", "20", "7", "--csv", csv});
  ASSERT_EQ(r.code, 0) << r.err;
  const json sim = r.report()["results"]["simulation"];
  EXPECT_EQ(sim["trials"], 50);
  EXPECT_LT(sim["worstGrowth"].get<double>(), 1.0);
  std::ifstream in(csv);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "t,value");
}
