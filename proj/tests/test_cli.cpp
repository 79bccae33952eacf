#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

struct Result {
  int status = -1;
  std::string out;
};

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("qindep_cli_" +
            std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  Result run(const std::string& args) {
    const fs::path out = dir_ / "stdout.txt";
    const std::string cmd = std::string(QINDEP_CLI_PATH) + " " + args + " > " +
                            out.string() + " 2> " + (dir_ / "stderr.txt").string();
    const int raw = std::system(cmd.c_str());
    Result r;
    r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    r.out = slurp(out);
    return r;
  }

  fs::path write(const std::string& name, const std::string& text) {
    const fs::path p = dir_ / name;
    std::ofstream(p) << text;
    return p;
  }

  static std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  static std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
  }

  fs::path dir_;
};

bool has_line(const std::vector<std::string>& ls, const std::string& want) {
  for (const auto& l : ls) {
    if (l == want) return true;
  }
  return false;
}

}  // namespace

TEST_F(CliTest, BoundsAnchorRows) {
  const auto r = run("bounds --dgp baseline --delta-grid 0.5 --out -");
  ASSERT_EQ(r.status, 0);
  const auto ls = lines(r.out);
  ASSERT_FALSE(ls.empty());
  EXPECT_EQ(ls.front(), "delta,param,spec,lo,hi");
  EXPECT_TRUE(has_line(ls, "0.5,ATT,T,-1,3")) << r.out;
  EXPECT_TRUE(has_line(ls, "0.5,QTT,U,-3,5")) << r.out;
}

TEST_F(CliTest, BoundsAtZeroDeltaArePoints) {
  const auto r = run("bounds --dgp baseline --delta-grid 0 --out -");
  ASSERT_EQ(r.status, 0);
  const auto ls = lines(r.out);
  ASSERT_EQ(ls.size(), 5u);
  for (std::size_t i = 1; i < ls.size(); ++i) {
    std::istringstream row(ls[i]);
    std::vector<std::string> f;
    for (std::string c; std::getline(row, c, ',');) f.push_back(c);
    ASSERT_EQ(f.size(), 5u);
    EXPECT_EQ(f[3], f[4]) << ls[i];
  }
}

TEST_F(CliTest, BoundsIsDeterministic) {
  const auto a = run("bounds --dgp baseline --delta-grid 0:0.5:11 --out -");
  const auto b = run("bounds --dgp baseline --delta-grid 0:0.5:11 --out -");
  ASSERT_EQ(a.status, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(lines(a.out).size(), 1u + 11u * 4u);
}

TEST_F(CliTest, BoundsBothSelectsEverything) {
  const auto r =
      run("bounds --dgp baseline --delta-grid 0.5 --param both --spec both --out -");
  ASSERT_EQ(r.status, 0);
  EXPECT_EQ(lines(r.out).size(), 5u);
}

TEST_F(CliTest, BoundsFromConfigFile) {
  const auto cfg = write("sweep.cfg",
                         "# sweep\ndgp=baseline\ndelta_grid=0.5\nparam=ATT\nspec=T\n");
  const auto r = run("bounds --config " + cfg.string() + " --out -");
  ASSERT_EQ(r.status, 0);
  const auto ls = lines(r.out);
  ASSERT_EQ(ls.size(), 2u);
  EXPECT_EQ(ls[1], "0.5,ATT,T,-1,3");
  // A flag overrides the file.
  const auto u = run("bounds --config " + cfg.string() + " --spec U --out -");
  ASSERT_EQ(u.status, 0);
  EXPECT_EQ(lines(u.out).at(1), "0.5,ATT,U,-3,5");
}

TEST_F(CliTest, BoundsRejectsBadConfig) {
  const auto cfg = write("bad.cfg", "no_such_key=1\n");
  EXPECT_EQ(run("bounds --config " + cfg.string() + " --out -").status, 2);
  EXPECT_EQ(run("bounds --config " + (dir_ / "missing.cfg").string()).status, 2);
  EXPECT_EQ(run("bounds --dgp baseline --q 1.5 --out -").status, 2);
}

TEST_F(CliTest, BoundsUnboundedSupportWritesInf) {
  const auto r =
      run("bounds --dgp baseline --delta-grid 0.25 --param ATT --spec T "
          "--y0-support=-inf,4 --out -");
  ASSERT_EQ(r.status, 0);
  EXPECT_NE(r.out.find("inf"), std::string::npos) << r.out;
  EXPECT_FALSE(slurp(dir_ / "stderr.txt").empty());
}

TEST_F(CliTest, CheckConstantPasses) {
  const auto p = write("const.json", R"({"n":4,"values":[0.5,0.5,0.5,0.5]})");
  const auto r = run("check --propensity " + p.string() + " --spec T --tau 0.5");
  EXPECT_EQ(r.status, 0);
  EXPECT_NE(r.out.find("monotonicity"), std::string::npos);
}

TEST_F(CliTest, CheckRampFailsWithWitness) {
  std::string values;
  for (int i = 0; i < 50; ++i) values += (i ? "," : "") + std::to_string(i / 50.0);
  const auto p = write("ramp.json", "{\"values\":[" + values + "]}");
  const auto r = run("check --propensity " + p.string() + " --spec T --tau 0.5");
  EXPECT_EQ(r.status, 1);
  EXPECT_NE(r.out.find("witness"), std::string::npos);
}

TEST_F(CliTest, CheckFlatMiddle) {
  std::string values;
  for (int i = 0; i < 100; ++i) {
    const double u = (i + 0.5) / 100;
    values += (i ? "," : "") +
              std::string(u < 0.25 ? "0.9" : (u < 0.75 ? "0.5" : "0.1"));
  }
  const auto p = write("flat.json", "{\"values\":[" + values + "]}");
  EXPECT_EQ(run("check --propensity " + p.string() +
                " --spec U --interval 0.25,0.75")
                .status,
            0);
  EXPECT_EQ(run("check --propensity " + p.string() +
                " --spec T --interval 0.25,0.75")
                .status,
            1);
}

TEST_F(CliTest, CheckMalformedJsonIsUsageError) {
  const auto p = write("bad.json", "{\"values\": [0.5,");
  EXPECT_EQ(run("check --propensity " + p.string() + " --spec T --tau 0.5").status,
            2);
}

TEST_F(CliTest, VerifyExitCodes) {
  const auto t = run("verify --spec T --interval 0.25,0.75 --px 0.5 --n-cells 1000");
  EXPECT_EQ(t.status, 0);
  EXPECT_NE(t.out.find("max_discrepancy"), std::string::npos);
  EXPECT_EQ(run("verify --spec U --interval 0.25,0.75 --px 0.25 --n-cells 1000")
                .status,
            0);
  EXPECT_EQ(run("verify --spec T --interval 0.25,0.75 --px 0.5 --n-cells 10")
                .status,
            2);
  EXPECT_EQ(run("verify --spec T --interval 0.75,0.25 --px 0.5").status, 2);
}

TEST_F(CliTest, ReproduceFigure4) {
  const auto r = run("reproduce-figure4 --out-dir " + dir_.string());
  ASSERT_EQ(r.status, 0);
  for (const char* name : {"figure4_qtt.csv", "figure4_att.csv"}) {
    const auto ls = lines(slurp(dir_ / name));
    ASSERT_EQ(ls.size(), 1u + 2u * 101u) << name;
  }
  const auto att = lines(slurp(dir_ / "figure4_att.csv"));
  EXPECT_TRUE(has_line(att, "0.5,ATT,T,-1,3"));
  EXPECT_TRUE(has_line(att, "0.5,ATT,U,-3,5"));
}

TEST_F(CliTest, SimulateThenBoundsFromCsv) {
  const auto csv = dir_ / "draws.csv";
  ASSERT_EQ(run("simulate --n 5000 --seed 3 --out " + csv.string()).status, 0);
  const auto r = run("bounds --csv " + csv.string() +
                     " --delta-grid 0 --param ATT --spec T --out -");
  ASSERT_EQ(r.status, 0);
  EXPECT_EQ(lines(r.out).size(), 2u);
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(run("").status, 2);
  EXPECT_EQ(run("no-such-command").status, 2);
  EXPECT_EQ(run("check --spec T").status, 2);
  EXPECT_EQ(run("bounds --dgp baseline --csv x.csv").status, 2);
}
