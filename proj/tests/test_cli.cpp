#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = nck::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("nck_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    unsetenv("NCK_TOL");
  }
  void TearDown() override {
    fs::remove_all(dir_);
    unsetenv("NCK_TOL");
  }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  std::string write(const std::string& name, const std::string& text) const {
    std::ofstream(path(name)) << text;
    return path(name);
  }

  static json load(const std::string& p) {
    std::ifstream in(p);
    return json::parse(in);
  }

  fs::path dir_;
};

void expect_consistent_summary(const json& doc) {
  const double tol = doc.at("tol").get<double>();
  int passed = 0;
  double max_res = 0.0;
  for (const auto& c : doc.at("checks")) {
    const double r = c.at("residual").get<double>();
    EXPECT_EQ(c.at("pass").get<bool>(), r < tol) << c.at("name");
    passed += c.at("pass").get<bool>() ? 1 : 0;
    max_res = std::max(max_res, r);
  }
  const auto& s = doc.at("summary");
  EXPECT_EQ(s.at("total").get<std::size_t>(), doc.at("checks").size());
  EXPECT_EQ(s.at("passed").get<int>(), passed);
  EXPECT_EQ(s.at("failed").get<int>(), static_cast<int>(doc.at("checks").size()) - passed);
  EXPECT_DOUBLE_EQ(s.at("max_residual").get<double>(), max_res);
}

}  // namespace

TEST_F(CliTest, VerifyDefaultTwoTorus) {
  const Result r = run({"verify", "--n", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json doc = json::parse(r.out);
  EXPECT_EQ(doc.at("n"), 2);
  EXPECT_EQ(doc.at("matching"), "1-2");
  EXPECT_EQ(doc.at("eps_prime"), 1);
  EXPECT_EQ(doc.at("command"), "verify");
  EXPECT_TRUE(doc.at("summary").at("all_pass").get<bool>());
  std::vector<std::string> names;
  for (const auto& c : doc.at("checks")) names.push_back(c.at("name"));
  for (const char* expected : {"d^2 = 0", "del^2 = 0", "delbar^2 = 0", "[T,del] = del", "{d,d*} = {d2,d2*}",
                               "hodge del = -delbar* hodge"})
    EXPECT_NE(std::find(names.begin(), names.end(), expected), names.end()) << expected;
  expect_consistent_summary(doc);
  EXPECT_EQ(doc.at("metadata").at("tool"), "nck");
}

TEST_F(CliTest, EnumerateSix) {
  const Result r = run({"enumerate", "--n", "6"});
  ASSERT_EQ(r.code, 0);
  const json doc = json::parse(r.out);
  EXPECT_EQ(doc.at("results").at("count"), 15);
  EXPECT_EQ(doc.at("results").at("matchings").size(), 15u);
  EXPECT_EQ(doc.at("results").at("matchings").at(0), "1-2,3-4,5-6");
}

TEST_F(CliTest, BadMatchingIsConfigError) {
  const Result r = run({"verify", "--n", "4", "--matching", "1-2,2-3"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("not a perfect matching"), std::string::npos) << r.err;
  EXPECT_TRUE(r.out.empty());
}

TEST_F(CliTest, ConfigErrors) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"verify", "--n", "3"}).code, 2);
  EXPECT_EQ(run({"verify", "--n", "2", "--eps-prime", "2"}).code, 2);
  EXPECT_EQ(run({"verify", "--n", "2", "--tol", "-1"}).code, 2);
  EXPECT_EQ(run({"verify", "--theta", path("missing.json")}).code, 2);
  EXPECT_EQ(run({"verify", "--theta", write("garbage.json", "{ not json")}).code, 2);
  EXPECT_EQ(run({"verify", "--theta", write("odd.json", R"({"n": 3, "theta": [[0,1,2],[0,0,3],[0,0,0]]})")}).code, 2);
  const std::string t2 = write("t2.json", R"({"n": 2, "theta": [[0, 0.318], [0, 0]]})");
  EXPECT_EQ(run({"verify", "--theta", t2, "--n", "4"}).code, 2);
  EXPECT_EQ(run({"holo", "kernel", "--n", "2", "--radius", "-1"}).code, 2);
  EXPECT_EQ(run({"holo", "flat", "--conn", write("c.json", R"({"m": 1, "A": [[[ [] ]]]})"), "--n", "4"}).code, 2);
  setenv("NCK_TOL", "abc", 1);
  EXPECT_EQ(run({"verify", "--n", "2"}).code, 2);
}

TEST_F(CliTest, ThetaFileAndEpsBoth) {
  const std::string t = write("t.json", R"({"n": 4, "theta": [[0,0.1234,0.5678,0.9101],[0,0,0.1121,0.3141],[0,0,0,0.5161],[0,0,0,0]]})");
  const Result r = run({"verify", "--theta", t, "--matching", "all", "--eps-prime", "both", "--out", path("r.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  const json doc = load(path("r.json"));
  EXPECT_EQ(doc.at("matching"), "all");
  EXPECT_EQ(doc.at("eps_prime"), "both");
  EXPECT_EQ(doc.at("checks").at(0).at("name").get<std::string>().rfind("[1-2,3-4 eps'=+1] ", 0), 0u);
  EXPECT_NEAR(doc.at("metadata").at("theta").at("theta").at(0).at(1).get<double>(), 0.1234, 1e-15);
  EXPECT_NE(r.out.find("checks passed"), std::string::npos);
  expect_consistent_summary(doc);
}

TEST_F(CliTest, NegativeEpsPrimeValue) {
  const Result r = run({"verify", "--n", "2", "--eps-prime", "-1"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(json::parse(r.out).at("eps_prime"), -1);
  EXPECT_EQ(run({"verify", "--n", "2", "--eps-prime=-1"}).code, 0);
}

TEST_F(CliTest, TolerancePrecedence) {
  setenv("NCK_TOL", "1e-6", 1);
  EXPECT_DOUBLE_EQ(json::parse(run({"verify", "--n", "2"}).out).at("tol").get<double>(), 1e-6);
  EXPECT_DOUBLE_EQ(json::parse(run({"verify", "--n", "2", "--tol", "1e-8"}).out).at("tol").get<double>(), 1e-8);
  unsetenv("NCK_TOL");
  EXPECT_DOUBLE_EQ(json::parse(run({"verify", "--n", "2"}).out).at("tol").get<double>(), 1e-10);
}

TEST_F(CliTest, FailingChecksExitOneAndStillWrite) {
  // A_1 = U_1, A_2 = U_2 on a 4-torus is not flat.
  const std::string conn = write("conn.json", R"({"m": 1, "A": [
      [[ [{"m": [1,0,0,0], "re": 1, "im": 0}] ]],
      [[ [{"m": [0,1,0,0], "re": 1, "im": 0}] ]] ]})");
  const Result r = run({"holo", "flat", "--conn", conn, "--out", path("flat.json")});
  EXPECT_EQ(r.code, 1);
  ASSERT_TRUE(fs::exists(path("flat.json")));
  const json doc = load(path("flat.json"));
  EXPECT_FALSE(doc.at("summary").at("all_pass").get<bool>());
  EXPECT_NEAR(doc.at("results").at("curvature_max").get<double>(), 6.283185307179586, 1e-10);
  EXPECT_NE(r.out.find("failed:"), std::string::npos);
}

TEST_F(CliTest, HoloSubcommands) {
  const std::string grass = write("g.json", R"({"m": 2, "A": [
      [[ [], [] ], [ [], [] ]],
      [[ [], [] ], [ [], [] ]] ]})");
  Result r = run({"holo", "flat", "--conn", grass});
  EXPECT_EQ(r.code, 0) << r.err;
  r = run({"holo", "h0", "--conn", grass, "--radius", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(json::parse(r.out).at("results").at("dim"), 2);
  r = run({"holo", "kernel", "--n", "4", "--radius", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(json::parse(r.out).at("results").at("dim"), 1);
  const std::string t2 = write("t2.json", R"({"n": 2, "theta": [[0, 0.318309886], [0, 0]]})");
  r = run({"holo", "ps-compare", "--theta2", t2});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(json::parse(r.out).at("results").at("c").at("re").get<double>(), 1.0, 1e-12);
  EXPECT_EQ(run({"holo"}).code, 2);
}

TEST_F(CliTest, CliffordAndForms) {
  Result r = run({"clifford", "--n", "4"});
  ASSERT_EQ(r.code, 0) << r.err;
  json doc = json::parse(r.out);
  EXPECT_EQ(doc.at("n"), 4);
  EXPECT_EQ(doc.at("results").at("N"), 4);
  EXPECT_LT(doc.at("results").at("relations_residual").get<double>(), 1e-12);
  EXPECT_EQ(doc.at("results").at("signs_plus").at("eps"), "-");
  EXPECT_EQ(doc.at("results").at("gammas").size(), 4u);

  r = run({"forms", "--n", "4"});
  ASSERT_EQ(r.code, 0) << r.err;
  doc = json::parse(r.out);
  const auto& levels = doc.at("results").at("levels");
  const int omega_d[] = {1, 4, 6, 4, 1, 0};
  const int omega_0q[] = {1, 2, 1, 0, 0, 0};
  for (int l = 0; l <= 5; ++l) {
    EXPECT_EQ(levels.at(l).at("level"), l);
    EXPECT_EQ(levels.at(l).at("omega_d"), omega_d[l]);
    EXPECT_EQ(levels.at(l).at("omega_0q"), omega_0q[l]);
    EXPECT_EQ(levels.at(l).at("omega_p0"), omega_0q[l]);
  }
}

TEST_F(CliTest, DeterministicApartFromTimestamp) {
  ASSERT_EQ(run({"verify", "--n", "4", "--matching", "all", "--out", path("a.json")}).code, 0);
  ASSERT_EQ(run({"verify", "--n", "4", "--matching", "all", "--out", path("b.json")}).code, 0);
  json a = load(path("a.json"));
  json b = load(path("b.json"));
  a["metadata"].erase("timestamp");
  b["metadata"].erase("timestamp");
  a["metadata"]["args"].back() = "";
  b["metadata"]["args"].back() = "";
  EXPECT_EQ(a.dump(), b.dump());
  EXPECT_FALSE(fs::exists(path("a.json.tmp")));
}

TEST_F(CliTest, DumpOps) {
  ASSERT_EQ(run({"verify", "--n", "2", "--dump-ops", path("ops.json"), "--out", path("r.json")}).code, 0);
  const json ops = load(path("ops.json"));
  for (const char* name : {"D", "d", "d_star", "del", "delbar", "I", "T", "T_bar", "grading", "hodge"})
    EXPECT_TRUE(ops.contains(name)) << name;
  const auto& d = ops.at("D");
  ASSERT_EQ(d.size(), 2u);
  EXPECT_EQ(d.at(0).at("alpha"), json::array({0, 1}));
  EXPECT_EQ(d.at(0).at("matrix").size(), 2u);
}

TEST_F(CliTest, Help) {
  const Result r = run({"--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("verify"), std::string::npos);
}
