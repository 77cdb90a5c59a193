#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include <gtest/gtest.h>
#include <json.hpp>

#include "covertsim/report.hpp"

namespace fs = std::filesystem;

namespace {

const std::string kBin = COVERTSIM_BIN;
const std::string kConfigs = COVERTSIM_CONFIG_DIR;

int run(const std::string& args, const std::string& env = "")
{
    const std::string cmd = env + (env.empty() ? "" : " ") + kBin + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string& name)
{
    const fs::path p = fs::temp_directory_path() / ("covertsim_cli_" + name);
    fs::remove_all(p);
    return p;
}

} // namespace

TEST(Cli, HelpAndVersionExitZero)
{
    EXPECT_EQ(run("--help"), 0);
    EXPECT_EQ(run("--version"), 0);
    EXPECT_EQ(run("covertness --help"), 0);
}

TEST(Cli, UsageErrorsExitTwo)
{
    EXPECT_EQ(run(""), 2);
    EXPECT_EQ(run("covertness --no-such-flag"), 2);
    EXPECT_EQ(run("covertness /nonexistent/config.json --out " + scratch("missing").string()), 2);
    EXPECT_EQ(run("roc --detector magic --out " + scratch("baddet").string()), 2);
    const fs::path bad = fs::temp_directory_path() / "covertsim_cli_bad.json";
    std::ofstream(bad) << R"({"p": 1.0})";
    EXPECT_EQ(run("covertness " + bad.string() + " --out " + scratch("bad").string()), 2);
    EXPECT_EQ(run("covertness --out " + scratch("badseed").string(), "COVERTSIM_SEED=abc"), 2);
}

TEST(Cli, CovertnessIdenticalAcrossWorkers)
{
    const auto a = scratch("cov1");
    const auto b = scratch("cov3");
    const std::string args = "covertness " + kConfigs + "/awgn.json --n-list 50,100 --trials 300 --seed 5";
    ASSERT_EQ(run(args + " --workers 1 --out " + a.string()), 0);
    ASSERT_EQ(run(args + " --workers 3 --out " + b.string()), 0);
    const std::string csv = slurp(a / "curve.csv");
    EXPECT_EQ(csv, slurp(b / "curve.csv"));
    EXPECT_EQ(csv.rfind("n,threshold,min_sum,", 0), 0u);

    const auto m = nlohmann::json::parse(slurp(a / "manifest.json"));
    EXPECT_EQ(m.at("command"), "covertness");
    EXPECT_EQ(m.at("seed"), 5);
    EXPECT_TRUE(m.contains("version") && m.contains("timestamp") && m.contains("config_hash"));
    ASSERT_EQ(m.at("outputs").size(), 1u);
    EXPECT_EQ(m.at("outputs")[0].at("file"), "curve.csv");
    EXPECT_EQ(m.at("outputs")[0].at("hash"), covertsim::git_blob_hash(csv));
}

TEST(Cli, SeedFromEnvironment)
{
    const auto a = scratch("env");
    const auto b = scratch("flag");
    const auto c = scratch("other");
    const std::string args = "covertness --n-list 40 --trials 200";
    ASSERT_EQ(run(args + " --out " + a.string(), "COVERTSIM_SEED=17"), 0);
    ASSERT_EQ(run(args + " --seed 17 --out " + b.string()), 0);
    ASSERT_EQ(run(args + " --seed 18 --out " + c.string()), 0);
    EXPECT_EQ(slurp(a / "curve.csv"), slurp(b / "curve.csv"));
    EXPECT_NE(slurp(a / "curve.csv"), slurp(c / "curve.csv"));
}

TEST(Cli, RocBoundaryCapacityCheckRun)
{
    const auto r = scratch("roc");
    ASSERT_EQ(run("roc " + kConfigs + "/fading_m2.json --trials 200 --points 10 --out " + r.string()), 0);
    EXPECT_EQ(slurp(r / "roc.csv").rfind("threshold,p_fa,p_md,", 0), 0u);

    const auto bd = scratch("boundary");
    const auto bd3 = scratch("boundary3");
    const std::string bargs = "boundary " + kConfigs + "/fading_m2.json --samples 300 --spot-checks 5";
    ASSERT_EQ(run(bargs + " --out " + bd.string()), 0);
    ASSERT_EQ(run(bargs + " --workers 3 --out " + bd3.string()), 0);
    EXPECT_EQ(slurp(bd / "boundary.csv"), slurp(bd3 / "boundary.csv"));
    EXPECT_NO_THROW(nlohmann::json::parse(slurp(bd / "boundary.json")));
    EXPECT_EQ(run("boundary " + kConfigs + "/awgn.json --samples 10 --out " + scratch("bawgn").string()), 2);

    const auto cp = scratch("capacity");
    ASSERT_EQ(run("capacity " + kConfigs + "/fading_m1.json --samples 2000 --n-list 100,400 --out " + cp.string()),
              0);
    EXPECT_EQ(slurp(cp / "capacity.csv").rfind("P_f,P_j,outage_prob,R,n,bits\n", 0), 0u);
    EXPECT_EQ(run("capacity --outage 1.5 --out " + scratch("capbad").string()), 2);

    const auto ck = scratch("check");
    ASSERT_EQ(run("check " + kConfigs + "/fading_m1.json --points 50 --trials 100 --out " + ck.string()), 0);
    const auto j = nlohmann::json::parse(slurp(ck / "check.json"));
    EXPECT_FALSE(j.empty());
    EXPECT_TRUE(fs::exists(ck / "monotonicity.csv"));
    EXPECT_TRUE(fs::exists(ck / "manifest.json"));
}
