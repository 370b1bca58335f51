#include "cli/commands.hpp"

#include <gtest/gtest.h>
#include <json.hpp>

#include <sstream>
#include <string>
#include <vector>

namespace {

struct CliRun {
  int code;
  std::string out, err;
};

CliRun cli(std::vector<std::string> args) {
  args.insert(args.begin(), "lanedit");
  std::ostringstream out, err;
  int code = lanedit::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string data(const char* name) { return std::string(LANEDIT_TEST_DATA) + "/" + name; }

}  // namespace

TEST(Cli, ParseMembership) {
  EXPECT_EQ(cli({"parse", data("dyck.cfg"), "aabb"}).out, "member\n");
  CliRun r = cli({"parse", data("dyck.cfg"), "abba"});
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(r.out, "non-member\n");
}

TEST(Cli, ParseJson) {
  CliRun r = cli({"parse", data("abplus.cfg"), "a b a b", "--json"});
  ASSERT_EQ(r.code, 0);
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["command"], "parse");
  EXPECT_TRUE(j["result"]["member"].get<bool>());
  EXPECT_FALSE(j.contains("timings"));
  EXPECT_TRUE(nlohmann::json::parse(cli({"parse", data("abplus.cfg"), "ab", "--json", "--timings"}).out)
                  .contains("timings"));
}

TEST(Cli, EditdistExact) {
  CliRun r = cli({"editdist", data("dyck.cfg"), "abba", "--script"});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out.rfind("distance 2\nscript_cost 2\n", 0), 0u);
  EXPECT_NE(r.out.find("\nresult "), std::string::npos);
}

TEST(Cli, EditdistLocalTable) {
  CliRun r = cli({"editdist", data("dyck.cfg"), "aab", "--local"});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out,
            "distance 1\ni\tj\testimate\texact\n"
            "0\t1\t1\t1\n0\t2\t1\t1\n0\t3\t1\t1\n1\t2\t1\t1\n1\t3\t0\t1\n2\t3\t1\t1\n");
}

TEST(Cli, EditdistApproxIsReproducible) {
  std::vector<std::string> base{"editdist", data("dyck.cfg"), "aabbbaabab", "--eps", "0.5", "--seed", "3", "--json"};
  CliRun a = cli(base);
  ASSERT_EQ(a.code, 0);
  base.insert(base.end(), {"--threads", "2"});
  EXPECT_EQ(cli(base).out, a.out);
  auto j = nlohmann::json::parse(a.out);
  EXPECT_EQ(j["parameters"]["mode"], "approx");
  EXPECT_GE(j["result"]["estimate"].get<double>(), 2.0);
}

TEST(Cli, EditdistBackends) {
  for (const char* be : {"naive", "boolean", "bigint"})
    EXPECT_EQ(cli({"editdist", data("abplus.cfg"), "abbab", "--backend", be, "--sidon"}).out, "distance 1\n") << be;
  EXPECT_EQ(cli({"editdist", data("abplus.cfg"), "abbab", "--backend", "fast"}).code, 2);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(cli({}).code, 2);
  EXPECT_EQ(cli({"editdist", data("dyck.cfg"), "ab", "--exact", "--eps", "0.5"}).code, 2);
  EXPECT_EQ(cli({"editdist", data("dyck.cfg"), "ab", "--eps", "0"}).code, 2);
  EXPECT_EQ(cli({"editdist", data("dyck.cfg"), "ab", "--eps", "0.5", "--threads", "0"}).code, 2);
  EXPECT_EQ(cli({"bogus"}).code, 2);
}

TEST(Cli, InputErrors) {
  EXPECT_EQ(cli({"parse", data("missing.cfg"), "ab"}).code, 4);
  CliRun r = cli({"parse", data("bad.cfg"), "ab"});
  EXPECT_EQ(r.code, 4);
  EXPECT_NE(r.err.find("line 2"), std::string::npos);
  EXPECT_EQ(cli({"editdist", data("empty.cfg"), "a"}).code, 3);
}

TEST(Cli, Scfg) {
  CliRun r = cli({"scfg", data("ab.scfg"), "aab"});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.out.rfind("probability 9/128\n", 0), 0u);
  EXPECT_NE(r.out.find("S -> A B [1/2] 0 3\n"), std::string::npos);
  EXPECT_EQ(cli({"scfg", data("ab.scfg"), "bb"}).code, 1);
  CliRun a = cli({"scfg", data("pairs.scfg"), "abab", "--eps", "0.5", "--seed", "1"});
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(cli({"scfg", data("pairs.scfg"), "abab", "--eps", "0.5", "--seed", "1", "--threads", "3"}).out, a.out);
  EXPECT_EQ(cli({"scfg", data("dyck.cfg"), "ab"}).code, 4);
}

TEST(Cli, ReduceMinPlus) {
  CliRun r = cli({"reduce", "minplus-led", data("a3.mat"), data("b3.mat"), "--verify"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "3\n1 2 3\n2 3 1\n3 3 1\nverify OK\n");
}

TEST(Cli, ReduceMinTimes) {
  CliRun r = cli({"reduce", "mintimes-scfg", data("r2a.mat"), data("r2b.mat"), "--verify"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "2\n1/2 1/8\n2/3 1/6\nverify OK\n");
}

TEST(Cli, ReduceNegativeTriangle) {
  CliRun r = cli({"reduce", "negtriangle", data("tri.mat"), "--verify"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.rfind("found ", 0), 0u);
  EXPECT_NE(r.out.find("verify OK"), std::string::npos);
  CliRun n = cli({"reduce", "negtriangle", data("tri.mat"), "--product", "naive", "--json"});
  auto j = nlohmann::json::parse(n.out);
  EXPECT_TRUE(j["result"]["found"].get<bool>());
  EXPECT_EQ(cli({"reduce", "minplus-led", data("a3.mat")}).code, 2);
}
