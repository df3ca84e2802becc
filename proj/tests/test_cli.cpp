#include <gtest/gtest.h>
#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "oracles.hpp"

using namespace weakiso;
using weakiso::io::json;

namespace {

struct Result {
  int code = -1;
  std::string out;
};

// Runs the CLI with stderr folded away; returns the exit code and stdout.
Result cli(const std::string& args) {
  const std::string cmd = std::string(WEAKISO_CLI_PATH) + " " + args + " 2>/dev/null";
  Result r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf{};
  while (std::size_t got = std::fread(buf.data(), 1, buf.size(), pipe)) r.out.append(buf.data(), got);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = std::filesystem::temp_directory_path() /
           ("weakiso_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    std::filesystem::create_directories(dir_);
  }
  void TearDown() override { std::filesystem::remove_all(dir_); }

  std::string write(const std::string& name, const std::string& body) const {
    const auto p = dir_ / name;
    std::ofstream(p) << body;
    return p.string();
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  std::filesystem::path dir_;
};

}  // namespace

TEST_F(Cli, GenerateThenClassify) {
  const std::string out = path("m.txt");
  ASSERT_EQ(cli("--seed 7 generate --family triple --n 7 --out " + out).code, 0);
  const auto r = cli("--json classify " + out);
  ASSERT_EQ(r.code, 0);
  const json j = json::parse(r.out);
  EXPECT_EQ(j.at("tag"), "Triple");
  EXPECT_EQ(j.at("params").at("family"), "triple");
  EXPECT_EQ(cli("preserved " + out).out, "{3,4,7}\n");
}

TEST_F(Cli, GenerateIsSeeded) {
  const auto a = cli("--seed 3 generate --family half_case1 --n 6");
  const auto b = cli("--seed 3 generate --family half_case1 --n 6");
  const auto c = cli("--seed 4 generate --family half_case1 --n 6");
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_NE(a.out, c.out);
}

TEST_F(Cli, GenerateFromParams) {
  const std::string params = write("p.json", R"({"family":"krasin","n":5,"i":2})");
  const auto r = cli("generate --params " + params + " --format json");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(io::map_from_json(json::parse(r.out)), build_krasin_example(Dimension(5), 2));
}

TEST_F(Cli, AutOrder) {
  EXPECT_EQ(cli("aut --n 3 --P 2 --order-only").out, "1152\n");
  EXPECT_EQ(cli("aut --n 5 --P {3} --order-only").out, "23040\n");
}

TEST_F(Cli, AutGeneratorsAreMaps) {
  const std::string out = path("gens.txt");
  ASSERT_EQ(cli("aut --n 3 --P 3 --emit-generators " + out).code, 0);
  std::ifstream in(out);
  const auto maps = io::read_map_text_all(in);
  ASSERT_FALSE(maps.empty());
  for (const auto& m : maps) EXPECT_TRUE(is_p_isometry(m, 3));
}

TEST_F(Cli, Count) {
  EXPECT_EQ(cli("count a2k --n 6 --p 3").out, "[\"12\",\"12\",\"20\"]\n");
  EXPECT_EQ(cli("count h --n 9").out, "[\"6/7\",\"1/1\",\"7/6\"]\n");
  EXPECT_EQ(cli("count case2 --n 8").code, 0);
  EXPECT_EQ(cli("count case2 --n 6").code, 2);
}

TEST_F(Cli, Enumerate) { EXPECT_EQ(cli("enumerate --family n_isometry --n 2").out, "8\n"); }

TEST_F(Cli, VerifyStatuses) {
  const auto ok = cli("--json verify lemma1 n=3");
  EXPECT_EQ(ok.code, 0);
  EXPECT_EQ(json::parse(ok.out).at("status"), "pass");
  EXPECT_FALSE(json::parse(ok.out).contains("wall_seconds"));
  EXPECT_TRUE(json::parse(cli("--json verify lemma1 n=3 --timing").out).contains("wall_seconds"));
  EXPECT_EQ(cli("verify lemma2 n=4").code, 4);
  EXPECT_EQ(cli("verify thm5 n=8").code, 5);
  EXPECT_EQ(cli("verify lemma1 n=9").code, 2);
  EXPECT_EQ(cli("verify main n=5 P={3}").code, 0);
}

TEST_F(Cli, VerifyIsDeterministic) {
  const auto a = cli("--json --threads 1 verify main n=6 P={3}");
  const auto b = cli("--json --threads 4 verify main n=6 P={3}");
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
}

TEST_F(Cli, ExitCodes) {
  EXPECT_EQ(cli("aut --n 3 --P x").code, 2);
  EXPECT_EQ(cli("aut --n 3 --P {}").code, 2);
  EXPECT_EQ(cli("aut --n 9 --P 3").code, 5);
  EXPECT_EQ(cli("classify " + path("missing.txt")).code, 2);
  EXPECT_EQ(cli("classify " + write("bad.txt", "n=1\n0 0\n1 0\n")).code, 3);
  EXPECT_EQ(cli("classify " + write("junk.txt", "hello\n")).code, 2);
  EXPECT_EQ(cli("frobnicate").code, 2);
  EXPECT_EQ(cli("generate --family triple --n 5").code, 2);
  EXPECT_EQ(cli("generate --params " + write("p.json", R"({"family":"even_isometry","n":3,"a":"000","pi":[1,2,3],"b":"001","sigma":[1,2,3]})")).code, 2);
  EXPECT_EQ(cli("enumerate --family n_isometry --n 5").code, 5);
}
