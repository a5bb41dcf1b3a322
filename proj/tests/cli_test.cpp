#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "json.hpp"
#include "lieiso/lie.hpp"

using namespace lieiso;
using Json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code = -1;
  std::string out, err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / ("lieiso_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

// Runs the CLI from the examples directory.
Outcome run(const std::string& args, const std::string& env = "") {
  const fs::path err = scratch() / "stderr.txt";
  std::string cmd = "cd '" LIEISO_EXAMPLES "' && " + env + " '" LIEISO_CLI "' " + args + " 2>'" + err.string() + "'";
  Outcome r;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  for (std::size_t n; (n = std::fread(buf, 1, sizeof buf, pipe)) > 0;) r.out.append(buf, n);
  int status = ::pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.err = slurp(err);
  return r;
}

std::string write_temp(const std::string& name, const std::string& text) {
  fs::path p = scratch() / name;
  std::ofstream(p) << text;
  return p.string();
}

LieAlgebra algebra(const std::string& name) { return parse_lie(slurp(fs::path(LIEISO_EXAMPLES) / name)); }

// Rebuilds the matrix from the JSON verdict and checks it with the library.
bool json_matrix_verifies(const Json& v, const LieAlgebra& L, const LieAlgebra& Lp) {
  if (v["matrix"].is_null()) return false;
  std::vector<std::vector<std::string>> entries = v["matrix"];
  AlgebraicMatrix M;
  if (v["algebraic"].is_null()) {
    std::vector<std::vector<Rational>> q;
    for (const auto& row : entries) {
      q.emplace_back();
      for (const auto& e : row) q.back().emplace_back(e);
      for (auto& x : q.back()) x.canonicalize();
    }
    M = AlgebraicMatrix::from_rationals(q);
  } else {
    const Json& a = v["algebraic"];
    std::optional<RootInterval> root;
    if (!a["interval"].is_null())
      root = RootInterval{Rational(a["interval"]["lo"].get<std::string>()),
                          Rational(a["interval"]["hi"].get<std::string>())};
    M = AlgebraicMatrix::from_theta(entries, a["modulus"].get<std::string>(), root);
  }
  return verify_isomorphism(L, Lp, M);
}

}  // namespace

TEST(CliIso, Example1RealHasVerifiedMatrix) {
  Outcome r = run("iso ex1_L.lie ex1_Lp.lie --field R --json");
  ASSERT_EQ(r.code, 0) << r.err;
  Json v = Json::parse(r.out);
  EXPECT_EQ(v["status"], "isomorphic");
  EXPECT_EQ(v["field"], "R");
  EXPECT_TRUE(json_matrix_verifies(v, algebra("ex1_L.lie"), algebra("ex1_Lp.lie")));
}

TEST(CliIso, G48AgainstG49) {
  EXPECT_EQ(run("iso g4_8.lie g4_9.lie --field R").code, 1);
  Outcome c = run("iso g4_8.lie g4_9.lie --field C --json");
  ASSERT_EQ(c.code, 0) << c.err;
  Json v = Json::parse(c.out);
  ASSERT_FALSE(v["algebraic"].is_null());
  EXPECT_TRUE(json_matrix_verifies(v, algebra("g4_8.lie"), algebra("g4_9.lie")));
}

TEST(CliIso, FileAgainstItself) {
  for (const char* f : {"ex1_L.lie", "g4_9.lie"}) {
    Outcome r = run(std::string("iso ") + f + " " + f + " --field R");
    EXPECT_EQ(r.code, 0) << f;
    EXPECT_EQ(r.out.rfind("isomorphic over R", 0), 0u) << r.out;
  }
}

TEST(CliIso, BudgetExhaustionIsUnknown) {
  Outcome r = run("iso g4_8.lie g4_9.lie --max-steps 1 --json");
  EXPECT_EQ(r.code, 2);
  EXPECT_EQ(Json::parse(r.out)["status"], "unknown");
}

TEST(CliErrors, ExitCodes) {
  EXPECT_EQ(run("iso l6_8.lie l6_10.lie").code, 3);  // parametric input
  EXPECT_EQ(run("").code, 3);
  EXPECT_EQ(run("iso g4_8.lie").code, 3);
  EXPECT_EQ(run("iso g4_8.lie g4_9.lie --field Q").code, 3);
  EXPECT_EQ(run("iso g4_8.lie g4_9.lie", "LIEISO_BUDGET_PRESET=huge").code, 3);
  EXPECT_EQ(run("iso missing.lie g4_9.lie").code, 66);
  EXPECT_EQ(run("--help").code, 0);

  std::string corrupt = write_temp("corrupt.lie", "dim 4\nbracket e2 e3 = e1\nbracket e2 e4 = e3\nbracket e3 e4 = -1*e3\n");
  Outcome v = run("check '" + corrupt + "'");
  EXPECT_EQ(v.code, 64);
  EXPECT_NE(v.err.find("not a Lie algebra"), std::string::npos);

  std::string bad = write_temp("bad.lie", "dim 3\nbracket e2 e1 = e3\n");
  Outcome p = run("iso '" + bad + "' g4_9.lie");
  EXPECT_EQ(p.code, 65);
  EXPECT_NE(p.err.find("line 2, column"), std::string::npos) << p.err;

  std::string sys = write_temp("bad.sys", "x^2 + = 1\n");
  EXPECT_EQ(run("solve '" + sys + "'").code, 65);
  std::string noop = write_temp("noop.sys", "x^2 + 1\n");
  EXPECT_EQ(run("solve '" + noop + "'").code, 65);
}

TEST(CliParam, G59TwoBlocks) {
  Outcome r = run("iso-param g5_9_bg.lie g5_9_ds.lie --json");
  ASSERT_EQ(r.code, 0) << r.err;
  Json v = Json::parse(r.out);
  const Json& cond = v["parameter_conditions"];
  EXPECT_EQ(cond["parameters"], Json({"b", "g", "d", "s"}));
  ASSERT_EQ(cond["blocks"].size(), 2u);
  std::set<std::set<std::string>> eqs;
  for (const auto& b : cond["blocks"]) eqs.insert(b["equations"].get<std::set<std::string>>());
  EXPECT_TRUE(eqs.count({"d - b", "s - g"}));
  EXPECT_TRUE(eqs.count({"d - g", "s - b"}));
}

TEST(CliParam, L68AgainstL610) {
  Outcome r = run("iso-param l6_8.lie l6_10.lie --json");
  ASSERT_EQ(r.code, 0) << r.err;
  Json blocks = Json::parse(r.out)["parameter_conditions"]["blocks"];
  ASSERT_EQ(blocks.size(), 1u);
  EXPECT_TRUE(blocks[0]["equations"].empty());
  EXPECT_EQ(blocks[0]["inequations"], Json({"c"}));
}

TEST(CliParam, ParameterFreeIsFullOrEmpty) {
  Json full = Json::parse(run("iso-param g4_8.lie g4_9.lie --field C --json").out);
  EXPECT_TRUE(full["parameter_conditions"]["parameters"].empty());
  ASSERT_EQ(full["parameter_conditions"]["blocks"].size(), 1u);
  EXPECT_TRUE(full["parameter_conditions"]["blocks"][0]["equations"].empty());
  Outcome real = run("iso-param g4_8.lie g4_9.lie --field R --json");
  EXPECT_EQ(real.code, 1);
  for (const auto& b : Json::parse(real.out)["parameter_conditions"]["blocks"]) EXPECT_EQ(b["status"], "out");
}

TEST(CliSolve, SphereEllipseHasThreeChains) {
  Outcome r = run("solve sphere_ellipse.sys --json");
  ASSERT_EQ(r.code, 0) << r.err;
  Json v = Json::parse(r.out);
  EXPECT_EQ(v["variables"], Json({"x", "y", "z"}));
  EXPECT_EQ(v["chains"].size(), 3u);
  EXPECT_EQ(run("solve sphere_ellipse.sys").out.rfind("3 chains\n", 0), 0u);
}

TEST(CliSolve, NoRealRootIsEmpty) {
  Outcome r = run("solve no_real_root.sys --real");
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(r.out.rfind("empty\n", 0), 0u) << r.out;
}

TEST(CliSolve, SquareRootWitnessBox) {
  Outcome r = run("solve sqrt2.sys --real --json");
  ASSERT_EQ(r.code, 0) << r.err;
  Json w = Json::parse(r.out)["witness"]["x"];
  Rational lo(w["lo"].get<std::string>()), hi(w["hi"].get<std::string>());
  lo.canonicalize();
  hi.canonicalize();
  EXPECT_GT(lo, 0);
  EXPECT_LT(lo * lo, 2);
  EXPECT_GT(hi * hi, 2);
  EXPECT_LT(hi - lo, Rational(1, 1000000));
}

TEST(CliSolve, InequationsAndInequalities) {
  Outcome r = run("solve with_inequation.sys --json");
  ASSERT_EQ(r.code, 0) << r.err;
  Json chains = Json::parse(r.out)["chains"];
  ASSERT_EQ(chains.size(), 1u);
  EXPECT_FALSE(chains[0]["inequations"].empty());
  EXPECT_EQ(run("solve sqrt2.sys").code, 3);  // '>' without --real
}

TEST(CliBatch, InputOrderAndJobsAgree) {
  Outcome one = run("batch pairs.txt --field R --jobs 1");
  Outcome three = run("batch pairs.txt --field R --jobs 3");
  EXPECT_EQ(one.code, 0);
  EXPECT_EQ(one.out, three.out);
  std::istringstream lines(one.out);
  std::string l1, l2, l3;
  std::getline(lines, l1);
  std::getline(lines, l2);
  std::getline(lines, l3);
  EXPECT_EQ(l1, "ex1_L.lie ex1_Lp.lie: isomorphic");
  EXPECT_EQ(l2, "g4_8.lie g4_9.lie: not_isomorphic");
  EXPECT_EQ(l3, "g4_8.lie g4_8.lie: isomorphic");
}

TEST(CliDeterminism, RepeatedRunsAreByteIdentical) {
  for (const char* args :
       {"iso g4_8.lie g4_9.lie --json", "iso ex1_L.lie ex1_Lp.lie --field R", "iso-param l6_8.lie l6_10.lie --field R --json",
        "solve sphere_ellipse.sys --json", "solve sqrt2.sys --real --json --seed 7", "check g5_9_bg.lie --json"}) {
    Outcome a = run(args), b = run(args);
    EXPECT_EQ(a.code, b.code) << args;
    EXPECT_EQ(a.out, b.out) << args;
  }
}
