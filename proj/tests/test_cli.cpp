#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "spintomo/cli.hpp"
#include "spintomo/group_verify.hpp"
#include "spintomo/serialization.hpp"

using namespace spintomo;
namespace fs = std::filesystem;

namespace {

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("spintomo_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  int run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    stdout_ = out.str();
    stderr_ = err.str();
    return code;
  }

  static std::string slurp(const std::string& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  static std::vector<std::string> lines(const std::string& p) {
    std::ifstream in(p);
    std::vector<std::string> out;
    for (std::string line; std::getline(in, line);) out.push_back(line);
    return out;
  }

  fs::path dir_;
  std::string stdout_, stderr_;
};

}  // namespace

TEST_F(Cli, SimulateIsDeterministicAndWritesManifest) {
  const std::vector<std::string> base = {"simulate", "--spin", "2", "--state", "coherent:0.8", "--samples", "500"};
  auto a = base, b = base;
  a.insert(a.end(), {"--out", path("a.csv")});
  b.insert(b.end(), {"--out", path("b.csv"), "--threads", "3"});
  ASSERT_EQ(run(a), 0) << stderr_;
  ASSERT_EQ(run(b), 0) << stderr_;
  EXPECT_EQ(slurp(path("a.csv")), slurp(path("b.csv")));
  EXPECT_EQ(lines(path("a.csv")).size(), 501u);

  const auto m = nlohmann::json::parse(slurp(path("a.csv.manifest.json")));
  EXPECT_EQ(m["schema_version"], kSchemaVersion);
  EXPECT_EQ(m["command"], "simulate");
  EXPECT_EQ(m["exit_code"], 0);
  EXPECT_EQ(m["seed"], 1);
  EXPECT_EQ(m["config"]["samples"], "500");
  EXPECT_EQ(m["outputs"][0], path("a.csv"));
  EXPECT_EQ(m["tool_version"].get<std::string>().rfind("0.1.0", 0), 0u);
  for (const char* key : {"started_at", "finished_at", "result"}) EXPECT_TRUE(m.contains(key)) << key;
}

TEST_F(Cli, SeedChangesOutput) {
  ASSERT_EQ(run({"simulate", "--spin", "1", "--state", "thermal:0.2", "--samples", "100", "--out", path("a.csv")}), 0);
  ASSERT_EQ(run({"simulate", "--spin", "1", "--state", "thermal:0.2", "--samples", "100", "--seed", "2", "--out", path("b.csv")}), 0);
  EXPECT_NE(slurp(path("a.csv")), slurp(path("b.csv")));
}

TEST_F(Cli, ThreadEnvironmentDoesNotChangeResults) {
  ASSERT_EQ(run({"simulate", "--spin", "3", "--state", "coherent:1", "--samples", "9000", "--out", path("a.json"), "--format", "json"}), 0);
  ::setenv("SPINTOMO_THREADS", "2", 1);
  const int code = run({"simulate", "--spin", "3", "--state", "coherent:1", "--samples", "9000", "--out", path("b.json"), "--format", "json"});
  ::unsetenv("SPINTOMO_THREADS");
  ASSERT_EQ(code, 0);
  EXPECT_EQ(slurp(path("a.json")), slurp(path("b.json")));
}

TEST_F(Cli, SimulateThenReconstruct) {
  ASSERT_EQ(run({"simulate", "--spin", "2", "--state", "thermal:0.5", "--samples", "20000", "--out", path("r.csv")}),
            0);
  ASSERT_EQ(run({"reconstruct", "--in", path("r.csv"), "--spin", "2", "--truth", "thermal:0.5", "--out",
                 path("est.json")}),
            0)
      << stderr_;
  const auto est = estimate_from_json(read_json_file(path("est.json")));
  EXPECT_EQ(est.dim(), 3);
  EXPECT_EQ(est.num_samples, 20000);
  const auto diag = lines(path("est.json.diag.csv"));
  ASSERT_EQ(diag.size(), 4u);
  EXPECT_EQ(diag[0], "index,label,value,std_error,theory");
  EXPECT_TRUE(fs::exists(path("est.json.manifest.json")));
}

TEST_F(Cli, ReconstructFiniteSchemesAndIndistinguishable) {
  ASSERT_EQ(run({"simulate", "--spin", "2", "--state", "coherent:0.5,0.5", "--scheme", "tetrahedral_one", "--samples", "700", "--out",
                 path("t.csv")}),
            0);
  EXPECT_EQ(run({"reconstruct", "--in", path("t.csv"), "--scheme", "tetrahedral_one", "--out", path("t.json")}), 0)
      << stderr_;
  ASSERT_EQ(run({"simulate", "--spin", "1", "--mode", "indistinguishable", "--particles", "3", "--state",
                 "thermal:0.4", "--samples", "1000", "--out", path("i.csv")}),
            0)
      << stderr_;
  ASSERT_EQ(run({"reconstruct", "--in", path("i.csv"), "--out", path("i.json")}), 0) << stderr_;
  EXPECT_EQ(estimate_from_json(read_json_file(path("i.json"))).dim(), 8);
}

TEST_F(Cli, FlagErrorsExitTwo) {
  EXPECT_EQ(run({}), 2);
  EXPECT_EQ(run({"simulate", "--samples", "10", "--out", path("x.csv")}), 2);  // missing --spin
  EXPECT_EQ(run({"simulate", "--spin", "1", "--samples", "15", "--out", path("x.csv")}), 2);
  EXPECT_EQ(run({"simulate", "--spin", "1", "--state", "squeezed:1", "--out", path("x.csv")}), 2);
  EXPECT_EQ(run({"simulate", "--spin", "1", "--bogus", "--out", path("x.csv")}), 2);
  EXPECT_EQ(run({"compare", "--spin", "3", "--out", path("c.csv")}), 2);
  EXPECT_EQ(run({"scaling", "--max-spins", "9", "--out", path("s.csv")}), 2);
  EXPECT_EQ(run({"verify-group", "--group", "pauli", "--rep", path("r.json"), "--out", path("v.json")}), 2);
  EXPECT_FALSE(stderr_.empty());
}

TEST_F(Cli, DataErrorsExitThree) {
  std::ofstream(path("bad.csv")) << "theta_1,phi_1,m_1\n0.1,0.2,0.5\n0.3,nope,0.5\n";
  EXPECT_EQ(run({"reconstruct", "--in", path("bad.csv"), "--spin", "1", "--out", path("e.json")}), 3);
  EXPECT_NE(stderr_.find("line 3"), std::string::npos) << stderr_;
  EXPECT_EQ(run({"reconstruct", "--in", path("missing.csv"), "--spin", "1", "--out", path("e.json")}), 3);
  const auto m = nlohmann::json::parse(slurp(path("e.json.manifest.json")));
  EXPECT_EQ(m["exit_code"], 3);
}

TEST_F(Cli, CompareWritesCheckpoints) {
  ASSERT_EQ(run({"compare", "--spin", "1", "--state", "coherent:2", "--samples", "6000", "--checkpoints", "3",
                 "--blocks", "10", "--out", path("c.csv")}),
            0)
      << stderr_;
  const auto rows = lines(path("c.csv"));
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[0], "num_samples,sz_continuous,sigma_continuous,sz_discrete,sigma_discrete,theory");
  EXPECT_EQ(rows[3].rfind("6000,", 0), 0u);
  ASSERT_EQ(run({"compare", "--samples", "0", "--out", path("z.csv")}), 0) << stderr_;
  EXPECT_EQ(lines(path("z.csv")).size(), 1u);
}

TEST_F(Cli, ScalingSingleSpin) {
  ASSERT_EQ(run({"scaling", "--max-spins", "1", "--samples", "2000", "--blocks", "10", "--out", path("s.csv")}), 0)
      << stderr_;
  const auto rows = lines(path("s.csv"));
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0], "num_spins,sz,sigma,theory");
  EXPECT_EQ(rows[1].rfind("1,", 0), 0u);
}

TEST_F(Cli, PlanField) {
  ASSERT_EQ(run({"plan-field", "--particle", "electron", "--steps", "4", "--out", path("f.csv")}), 0);
  const auto rows = lines(path("f.csv"));
  ASSERT_EQ(rows.size(), 6u);
  EXPECT_EQ(rows[0], "theta,b1_gauss");
  EXPECT_EQ(rows[1], "0,0");
  EXPECT_EQ(run({"plan-field", "--particle", "custom", "--gamma", "0", "--speed", "1", "--length", "1", "--out",
                 path("g.csv")}),
            2);
  EXPECT_EQ(run({"plan-field", "--particle", "muon", "--out", path("g.csv")}), 2);
}

TEST_F(Cli, VerifyGroup) {
  ASSERT_EQ(run({"verify-group", "--group", "tetrahedral", "--out", path("v.json")}), 0) << stderr_;
  EXPECT_TRUE(read_json_file(path("v.json"))["pass"].get<bool>());
  auto rep = tetrahedral_group_rep();
  rep.matrices[5](1, 2) += 0.01;
  write_json_file(path("bad_rep.json"), to_json(rep));
  EXPECT_EQ(run({"verify-group", "--rep", path("bad_rep.json"), "--out", path("w.json")}), 4);
  EXPECT_FALSE(read_json_file(path("w.json"))["pass"].get<bool>());
  std::ofstream(path("garbage.json")) << "{not json";
  EXPECT_EQ(run({"verify-group", "--rep", path("garbage.json"), "--out", path("x.json")}), 3);
}
