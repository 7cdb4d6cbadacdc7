#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include <nlohmann/json.hpp>

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string command = std::string(SPINLB_CLI) + " " + args + " 2>&1";
  Run r;
  FILE* pipe = popen(command.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf;
  while (std::fgets(buf.data(), buf.size(), pipe)) r.out += buf.data();
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = std::filesystem::temp_directory_path() /
           ("spinlb_cli_test_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    std::filesystem::remove_all(dir_);
    std::filesystem::create_directories(dir_);
  }
  void TearDown() override { std::filesystem::remove_all(dir_); }

  std::string cache() const { return "--cache-dir " + (dir_ / "cache").string(); }
  std::string file(const std::string& name) const { return (dir_ / name).string(); }

  nlohmann::json read(const std::string& name) const {
    std::ifstream in(file(name));
    return nlohmann::json::parse(in);
  }

  std::filesystem::path dir_;
};

}  // namespace

TEST_F(CliTest, Table1) {
  const auto r = run("table1 --n-max 12 --out " + file("t1.json"));
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("9495"), std::string::npos);
  EXPECT_NE(r.out.find("1048576"), std::string::npos);
  EXPECT_EQ(r.out.find("MISMATCH"), std::string::npos);
  const auto doc = read("t1.json");
  EXPECT_EQ(doc["results"][0]["k"], 1);
  EXPECT_EQ(doc["results"][8]["k"], 9495);
  EXPECT_EQ(doc["results"][10]["enumerated"], doc["results"][10]["k"]);
  EXPECT_EQ(run("table1 --n-max 61").code, 2);
}

TEST_F(CliTest, Table2TwoSites) {
  const auto r = run("table2 --sizes 2 --restarts 4 " + cache() + " --out " + file("t2.json"));
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("-3.0000"), std::string::npos);
  const auto doc = read("t2.json");
  EXPECT_NEAR(doc["results"][0]["anderson_per_spin"].get<double>(), -3.0, 1e-9);
  EXPECT_NEAR(doc["results"][0]["variational_per_spin"].get<double>(), -3.0, 1e-9);
  EXPECT_EQ(doc["manifest"]["command"], "table2");
  EXPECT_EQ(doc["manifest"]["config"]["restarts"], 4);
  EXPECT_EQ(doc["manifest"]["cache_paths"].size(), 1u);
  EXPECT_TRUE(doc["manifest"].contains("started_at"));
  EXPECT_TRUE(doc["manifest"].contains("tool_version"));
}

TEST_F(CliTest, Table2IsDeterministic) {
  const std::string args = "table2 --sizes 3,4 --restarts 4 --seed 5 " + cache();
  ASSERT_EQ(run(args + " --out " + file("a.json")).code, 0);
  ASSERT_EQ(run(args + " --out " + file("b.json")).code, 0);
  EXPECT_EQ(read("a.json")["results"].dump(), read("b.json")["results"].dump());
}

TEST_F(CliTest, Table2Config) {
  std::ofstream(file("cfg.json")) << R"({"restarts": 3, "seed": 11})";
  const auto r = run("table2 --sizes 3 --config " + file("cfg.json") + " " + cache() + " --out " + file("c.json"));
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_EQ(read("c.json")["manifest"]["config"]["restarts"], 3);
  EXPECT_EQ(read("c.json")["manifest"]["seed"], 11);

  std::ofstream(file("bad.json")) << R"({"restart": 3})";
  EXPECT_EQ(run("table2 --sizes 3 --config " + file("bad.json") + " " + cache()).code, 2);
  EXPECT_EQ(run("table2 --sizes 3 --config " + file("missing.json") + " " + cache()).code, 2);
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(run("").code, 2);
  EXPECT_EQ(run("frobnicate").code, 2);
  EXPECT_EQ(run("table2 --sizes ''").code, 2);
  EXPECT_EQ(run("table2 --sizes 1").code, 2);
  EXPECT_EQ(run("table2 --sizes 3,x").code, 2);
  EXPECT_EQ(run("table2 --restarts 0 --sizes 3").code, 2);
  EXPECT_EQ(run("verify --level medium").code, 2);
  EXPECT_EQ(run("gram --n 9").code, 2);
  EXPECT_EQ(run("deps --n 0").code, 2);
  EXPECT_EQ(run("table1 --n-max abc").code, 2);
  EXPECT_EQ(run("--help").code, 0);
}

TEST_F(CliTest, GramFourSites) {
  const auto r = run("gram --n 4 --out " + file("g.json"));
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("(1,2)(3,4)       9      3      3"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("(1,3)(2,4)       3      9      3"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("(1,4)(2,3)       3      3      9"), std::string::npos) << r.out;
  const auto doc = read("g.json");
  EXPECT_EQ(doc["results"]["basis"].size(), 10u);
  EXPECT_EQ(doc["results"]["gram"][0][0], 1.0);
}

TEST_F(CliTest, DepsAndQuickVerify) {
  const auto deps = run("deps --n 5");
  EXPECT_EQ(deps.code, 0);
  EXPECT_NE(deps.out.find("Gram rank 42, predicted rank 42 -> PASS"), std::string::npos) << deps.out;
  const auto verify = run("verify --level quick");
  EXPECT_EQ(verify.code, 0) << verify.out;
  EXPECT_EQ(verify.out.find("FAIL"), std::string::npos);
}
