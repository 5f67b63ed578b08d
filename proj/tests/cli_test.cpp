// Copyright the nlbvp authors.
// SPDX-License-Identifier: Apache-2.0

// Runs the command-line tool as a subprocess.

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>
#include <json.hpp>

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace
{

fs::path scratch(const std::string &name)
{
  fs::path p = fs::temp_directory_path() / "nlbvp_cli_test" / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

int run(const std::string &args)
{
  const std::string cmd = std::string(NLBVP_CLI) + " " + args + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path &p)
{
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json report(const fs::path &dir) { return json::parse(slurp(dir / "report.json")); }

fs::path write_config(const fs::path &dir, const std::string &text)
{
  fs::path p = dir / "config.json";
  std::ofstream(p) << text;
  return p;
}

std::string demo(const std::string &name) { return std::string(NLBVP_DEMOS) + "/" + name + ".json"; }

}  // namespace

TEST(Cli, DemoWritesThreeProblems)
{
  fs::path out = scratch("demo");
  ASSERT_EQ(run("--action demo --out " + out.string()), 0);
  for (const char *name : {"constant", "lambda_linear", "rational"})
  {
    json r = report(out / name);
    EXPECT_TRUE(r["pass"].get<bool>()) << name;
    EXPECT_TRUE(fs::exists(out / name / "eigenvalues.csv"));
    EXPECT_TRUE(fs::exists(out / name / "scan.csv"));
    EXPECT_TRUE(fs::exists(out / name / "solution.csv"));
  }
}

TEST(Cli, VerifyRationalDemoPasses)
{
  fs::path out = scratch("verify");
  ASSERT_EQ(run("--config " + demo("rational") + " --out " + out.string()), 0);
  json r = report(out);
  EXPECT_EQ(r["action"], "verify");
  EXPECT_TRUE(r["pass"].get<bool>());
  EXPECT_EQ(r["eigen"]["eigenvalues"].size(), 2u);
}

TEST(Cli, OutputsAreByteIdentical)
{
  fs::path a = scratch("det_a"), b = scratch("det_b");
  ASSERT_EQ(run("--config " + demo("lambda_linear") + " --action solve --out " + a.string()), 0);
  ASSERT_EQ(run("--config " + demo("lambda_linear") + " --action solve --jobs 3 --out " + b.string()), 0);
  EXPECT_EQ(slurp(a / "report.json"), slurp(b / "report.json"));
  EXPECT_EQ(slurp(a / "solution.csv"), slurp(b / "solution.csv"));
  fs::path c = scratch("det_c");
  ASSERT_EQ(run("--config " + demo("lambda_linear") + " --action solve --seed 99 --out " + c.string()), 0);
  EXPECT_NE(slurp(a / "solution.csv"), slurp(c / "solution.csv"));
}

TEST(Cli, SolveOnSquare)
{
  fs::path out = scratch("square");
  ASSERT_EQ(run("--config " + demo("square_solve") + " --out " + out.string()), 0);
  json r = report(out);
  EXPECT_TRUE(r["in_U"].get<bool>());
  EXPECT_LE(r["oracle"]["direct_solve"].get<double>(), 1e-10);
  EXPECT_LE(r["oracle"]["compressed_resolvent"].get<double>(), 1e-10);
}

TEST(Cli, PoleGivesStructuredOutsideU)
{
  fs::path out = scratch("pole");
  fs::path cfg = write_config(out, R"({"action": "solve", "problem": {"dim": 1, "n": 99},
    "tau": {"kind": "rational", "alpha": [0, 20], "beta": [1, 1]}, "lambda": 20, "seed": 1})");
  EXPECT_EQ(run("--config " + cfg.string() + " --out " + out.string()), 2);
  EXPECT_EQ(report(out)["error"]["kind"], "OutsideU");
}

TEST(Cli, ConfigErrorsExitOne)
{
  fs::path out = scratch("config");
  EXPECT_EQ(run("--config /nonexistent/config.json --action solve --out " + out.string()), 1);
  EXPECT_EQ(run("--config " + write_config(out, "{ not json").string() + " --out " + out.string()), 1);
  EXPECT_EQ(run("--config " + write_config(out, R"({"action": "solve", "problem": {"dim": 1, "n": 9},
    "tau": {"kind": "mystery"}, "lambda": [0, 1], "seed": 1})").string() + " --out " + out.string()),
            1);
  // random right-hand side without a seed
  EXPECT_EQ(run("--config " + write_config(out, R"({"action": "solve", "problem": {"dim": 1, "n": 9},
    "tau": {"kind": "constant", "theta": 1}, "lambda": [0, 1]})").string() + " --out " + out.string()),
            1);
  EXPECT_EQ(run("--action nonsense"), 1);
}

TEST(Cli, FailedInvariantExitsThree)
{
  fs::path out = scratch("strict_tol");
  EXPECT_EQ(run("--config " + demo("rational") + " --tol 1e-30 --out " + out.string()), 3);
  EXPECT_FALSE(report(out)["pass"].get<bool>());
}

TEST(Cli, EigenTables)
{
  fs::path out = scratch("eigen");
  ASSERT_EQ(run("--config " + demo("lambda_linear") + " --action eigen --out " + out.string()), 0);
  const std::string eig = slurp(out / "eigenvalues.csv");
  EXPECT_EQ(eig.substr(0, eig.find('\n')), "lambda_re,lambda_im,sigma_min,root_distance");
  const std::string scan = slurp(out / "scan.csv");
  EXPECT_EQ(scan.substr(0, scan.find('\n')), "lambda,sigma_min,negatives");
  EXPECT_EQ(report(out)["eigenvalues"].size(), 2u);
}

TEST(Cli, RealizeEmitsTriple)
{
  fs::path out = scratch("realize");
  ASSERT_EQ(run("--config " + demo("constant") + " --action realize --out " + out.string()), 0);
  json r = report(out);
  EXPECT_EQ(r["path"], "constant");
  EXPECT_EQ(r["signature"], json::array({2, 2}));
  EXPECT_LE(r["weyl_fidelity"].get<double>(), 1e-9);
  EXPECT_TRUE(r.contains("triple"));
}
