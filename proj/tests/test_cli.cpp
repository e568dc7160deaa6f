#include "mbasis/commands.hpp"

#include <gtest/gtest.h>

#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / (std::string("mbasis_cli_") + info->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  int run(std::vector<std::string> args) {
    args.insert(args.begin(), "mbasis");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    out_.str("");
    err_.str("");
    return mbasis::cli::run(static_cast<int>(argv.size()), argv.data(), out_, err_);
  }

  fs::path write(const std::string& name, const std::string& text) {
    const fs::path p = dir_ / name;
    std::ofstream(p, std::ios::binary) << text;
    return p;
  }

  std::string read(const std::string& name) const {
    std::ifstream in(dir_ / "out" / name, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  /// Rows of a CSV, header excluded, split on commas.
  std::vector<std::vector<std::string>> csv(const std::string& name) const {
    std::istringstream in(read(name));
    std::vector<std::vector<std::string>> rows;
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
      std::vector<std::string> cells;
      std::istringstream ls(line);
      std::string cell;
      while (std::getline(ls, cell, ',')) cells.push_back(cell);
      rows.push_back(cells);
    }
    return rows;
  }

  std::string out() const { return (dir_ / "out").string(); }

  fs::path dir_;
  std::ostringstream out_, err_;
};

TEST_F(Cli, AuditExampleReproducesSqrtTwo) {
  EXPECT_EQ(run({"audit-example", "--out", out()}), 0) << err_.str();
  const auto rows = csv("example12.products.csv");
  ASSERT_EQ(rows.size(), 2u);
  for (const auto& r : rows) EXPECT_NEAR(std::stod(r[3]), std::sqrt(2.0), 1e-12);
  const json j = json::parse(read("example12.audit.json"));
  EXPECT_NEAR(j["metrics"]["displayed_S1(x1)"].get<double>(), 1.0 / std::sqrt(2.0), 1e-12);
  EXPECT_FALSE(j["findings"].empty());
  EXPECT_EQ(read("example12.products.csv").find('\r'), std::string::npos);
}

TEST_F(Cli, ConstructExampleComplement) {
  const auto f = write("s.json", R"({"version":1,"name":"ex","system":{"generator":"example12"},
    "constructions":["complement"]})");
  EXPECT_EQ(run({"construct", f.string(), "--out", out()}), 2);  // products sqrt 2, not 1
  const auto rows = csv("ex.products.csv");
  ASSERT_EQ(rows.size(), 2u);
  for (const auto& r : rows) {
    EXPECT_EQ(r[0], "complement");
    EXPECT_NEAR(std::stod(r[4]), std::sqrt(2.0), 1e-12);
    EXPECT_LE(std::stod(r[5]), 1e-10);
  }
  const json j = json::parse(read("ex.audit.json"));
  EXPECT_FALSE(j["summary"]["all_within_tolerance"].get<bool>());
  EXPECT_TRUE(j["summary"]["constructions"][0]["m_basis"].get<bool>());
}

TEST_F(Cli, ConstructStandardBasisLiteral) {
  const auto f = write("s.json", R"({"version":1,"name":"e4","space":{"dim":4,"kind":"pnorm","p":2},
    "system":{"generator":"standard-basis"},"constructions":["literal"]})");
  EXPECT_EQ(run({"construct", f.string(), "--out", out()}), 0) << err_.str();
  const auto rows = csv("e4.products.csv");
  ASSERT_EQ(rows.size(), 4u);
  for (const auto& r : rows) EXPECT_NEAR(std::stod(r[4]), 1.0, 1e-15);
}

TEST_F(Cli, ConstructRandomAllVariantsCoincidenceFlag) {
  const auto f = write("s.json", R"({"version":1,"name":"r5","space":{"dim":5,"kind":"pnorm","p":3},
    "system":{"generator":"random","seed":7},"constructions":["literal","complement","min-norm"]})");
  const int code = run({"construct", f.string(), "--out", out()});
  EXPECT_TRUE(code == 0 || code == 2) << err_.str();
  const json j = json::parse(read("r5.audit.json"));
  EXPECT_TRUE(j["coincidence"]["flags_agree"].get<bool>());
  EXPECT_EQ(j["constructions"].size(), 3u);
  EXPECT_EQ(csv("r5.products.csv").size(), 15u);
}

TEST_F(Cli, MultipleScenariosKeepDeclarationOrder) {
  const auto f = write("s.json", R"({"version":1,"scenarios":[
    {"name":"b","system":{"generator":"example12"},"constructions":["min-norm"]},
    {"name":"a","space":{"dim":3,"kind":"pnorm","p":"inf"},"system":{"generator":"auerbach","seed":1},
     "constructions":["min-norm"],"tolerances":{"product":1e-4}}]})");
  EXPECT_EQ(run({"construct", f.string(), "--out", out()}), 2);
  const std::string log = err_.str();
  EXPECT_LT(log.find("b min-norm"), log.find("a min-norm")) << log;
  EXPECT_TRUE(fs::exists(dir_ / "out" / "a.audit.json"));
  EXPECT_TRUE(fs::exists(dir_ / "out" / "b.audit.json"));
}

TEST_F(Cli, ScenarioDiagnostics) {
  const auto bad = write("bad.json", "{\"version\":1,\n  \"name\": tru}");
  EXPECT_EQ(run({"construct", bad.string(), "--out", out()}), 1);
  EXPECT_NE(err_.str().find(":2:"), std::string::npos) << err_.str();

  const auto unknown = write("u.json", R"({"version":1,"name":"x","system":{"generator":"example12"},"colour":1})");
  EXPECT_EQ(run({"construct", unknown.string(), "--out", out()}), 1);
  EXPECT_NE(err_.str().find("scenario.colour"), std::string::npos) << err_.str();

  const auto version = write("v.json", R"({"version":2,"name":"x","system":{"generator":"example12"}})");
  EXPECT_EQ(run({"construct", version.string(), "--out", out()}), 1);
  EXPECT_NE(err_.str().find("version"), std::string::npos);

  const auto no_seed = write("n.json", R"({"version":1,"name":"x","space":{"dim":2,"kind":"pnorm","p":2},
    "system":{"generator":"random"}})");
  EXPECT_EQ(run({"construct", no_seed.string(), "--out", out()}), 1);
  EXPECT_NE(err_.str().find("seed"), std::string::npos);
}

TEST_F(Cli, DegenerateSystemIsReportedPerIndex) {
  const auto f = write("d.json", R"({"version":1,"name":"dup","space":{"dim":2,"kind":"pnorm","p":2},
    "system":{"generator":"explicit","X":[[1,0],[1,0]]},
    "hilbert":{"functionals":"explicit","U":[[1,0],[0,1]],"weights":"uniform"},
    "constructions":["complement"]})");
  EXPECT_EQ(run({"construct", f.string(), "--out", out()}), 2);
  const json j = json::parse(read("dup.audit.json"));
  EXPECT_TRUE(j["constructions"][0].contains("error"));
}

TEST_F(Cli, SweepOrthonormalEuclidean) {
  const auto f = write("w.json", R"({"version":1,"name":"l2","kind":"pnorm","p":2,"n_min":2,"n_max":12,
    "generator":"orthonormal","seed":5,"constructions":["literal","complement"]})");
  EXPECT_EQ(run({"sweep", f.string(), "--out", out()}), 0) << err_.str();
  const auto rows = csv("l2.sweep.csv");
  ASSERT_EQ(rows.size(), 22u);
  for (const auto& r : rows) {
    EXPECT_NEAR(std::stod(r[2]), 1.0, 1e-12);
    EXPECT_EQ(r[5], "0");
  }
}

TEST_F(Cli, SweepL1DualityInequalityAndDeterminism) {
  const auto f = write("w.json", R"({"version":1,"name":"l1","kind":"pnorm","p":1,"n_min":2,"n_max":10,
    "generator":"random","seed":3,"constructions":["complement","min-norm"]})");
  EXPECT_EQ(run({"sweep", f.string(), "--out", out()}), 2);
  const std::string first = read("l1.sweep.csv");
  for (const auto& r : csv("l1.sweep.csv")) EXPECT_GE(std::stod(r[2]), 1.0 - 1e-8);
  run({"sweep", f.string(), "--out", out()});
  EXPECT_EQ(read("l1.sweep.csv"), first);
}

TEST_F(Cli, SweepCapIsEnforced) {
  const auto f = write("w.json", R"({"version":1,"name":"big","kind":"pnorm","p":2,"n_min":2,"n_max":201,
    "generator":"standard-basis"})");
  EXPECT_EQ(run({"sweep", f.string(), "--out", out()}), 1);
  EXPECT_NE(err_.str().find("200"), std::string::npos);
}

TEST_F(Cli, Auerbach) {
  EXPECT_EQ(run({"auerbach", "--dim", "3", "--p", "inf", "--seed", "1", "--out", out(), "--trace"}), 0) << err_.str();
  const json j = json::parse(read("auerbach.audit.json"));
  EXPECT_LE(j["audit"]["metrics"]["max_product"].get<double>(), 1.0 + 1e-4);
  EXPECT_FALSE(j["det_trace"].empty());

  EXPECT_EQ(run({"auerbach", "--dim", "2", "--p", "2", "--name", "e2", "--out", out()}), 0);
  for (const auto& r : csv("e2.products.csv")) EXPECT_NEAR(std::stod(r[3]), 1.0, 1e-9);

  EXPECT_EQ(run({"auerbach", "--dim", "2", "--p", "0.5", "--out", out()}), 1);
  EXPECT_NE(err_.str().find("usage"), std::string::npos);
  EXPECT_EQ(run({"auerbach", "--weights", "1,2,3", "--p", "4", "--name", "w", "--out", out()}), 0);
  EXPECT_EQ(run({"frobnicate"}), 1);
}

TEST_F(Cli, EnvironmentOverridesOut) {
  const fs::path env_dir = dir_ / "env";
  ::setenv("MBASIS_OUT", env_dir.c_str(), 1);
  const int code = run({"audit-example", "--out", out()});
  ::unsetenv("MBASIS_OUT");
  EXPECT_EQ(code, 0);
  EXPECT_TRUE(fs::exists(env_dir / "example12.audit.json"));
  EXPECT_FALSE(fs::exists(dir_ / "out" / "example12.audit.json"));
}

}  // namespace
