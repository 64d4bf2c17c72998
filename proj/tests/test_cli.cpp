#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace {

struct CliResult {
  int exitCode;
  std::string out;
};

CliResult runCli(const std::string& args) {
  std::string outFile = std::string(GOIM_BIN) + ".out.tmp";
  std::string cmd = std::string(GOIM_BIN) + " " + args + " > " + outFile + " 2>/dev/null";
  int rc = std::system(cmd.c_str());
  std::ifstream in(outFile);
  std::ostringstream os;
  os << in.rdbuf();
  std::remove(outFile.c_str());
  return {WEXITSTATUS(rc), os.str()};
}

}  // namespace

TEST_CASE("eval exit codes") {
  CliResult ok = runCli("eval --strategy need --engine both --fuel 1000 \"(\\x. x) (\\y. y)\"");
  CHECK(ok.exitCode == 0);
  CHECK(ok.out.find("counts-match") != std::string::npos);

  CliResult fuel =
      runCli("eval --strategy need --engine both --fuel 10000 \"(\\x. x x) (\\y. y y)\"");
  CHECK(fuel.exitCode == 3);
  CHECK(fuel.out.find("both-diverged") != std::string::npos);

  CliResult usage = runCli("eval --strategy need \"(\\x. x\"");
  CHECK(usage.exitCode == 2);

  CliResult mixed = runCli("eval --strategy need \"(x y) @lv z\"");
  CHECK(mixed.exitCode == 2);
}

TEST_CASE("eval writes a machine trace") {
  std::string trace = std::string(GOIM_BIN) + ".trace.tmp";
  CliResult r = runCli("eval --engine graph --trace " + trace + " \"(\\x. x) (\\y. y)\"");
  CHECK(r.exitCode == 0);
  std::ifstream in(trace);
  REQUIRE(in.good());
  std::string line, last;
  size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    last = line;
  }
  CHECK(n == 11);  // ten transitions plus the summary
  CHECK(last.find("summary") != std::string::npos);
  std::remove(trace.c_str());

  CliResult bad = runCli("eval --engine graph --trace /nonexistent-dir/t.jsonl \"\\x. x\"");
  CHECK(bad.exitCode == 2);
}

TEST_CASE("oracle traces carry rule numbers") {
  std::string trace = std::string(GOIM_BIN) + ".subtrace.tmp";
  CliResult r =
      runCli("eval --engine sub --trace " + trace + " --trace-focus \"(\\x. x) (\\y. y)\"");
  CHECK(r.exitCode == 0);
  std::ifstream in(trace);
  REQUIRE(in.good());
  std::string line;
  std::vector<std::string> lines;
  while (std::getline(in, line)) lines.push_back(line);
  std::remove(trace.c_str());
  REQUIRE(lines.size() == 5);  // rules 1, 2, 9, 10 and the summary
  CHECK(lines[0].find("\"rule\":1") != std::string::npos);
  CHECK(lines[1].find("\"rule\":2") != std::string::npos);
  CHECK(lines[1].find("\"label\":\"beta\"") != std::string::npos);
  CHECK(lines[0].find("\"focus\"") != std::string::npos);
  CHECK(lines[4].find("summary") != std::string::npos);
}

TEST_CASE("check command") {
  CliResult r = runCli("check --strategy rv --count 40 --max-size 20 --seed 3 --fuel 3000");
  CHECK(r.exitCode == 0);
  CHECK(r.out.find("checked 40 terms") != std::string::npos);
  CHECK(r.out.find("failure") == std::string::npos);
}

TEST_CASE("bench command emits the pinned csv") {
  CliResult r = runCli("bench --family identity-chain --min 1 --max 4 --strategy need");
  CHECK(r.exitCode == 0);
  CHECK(r.out.rfind("family,param,size,beta,sigma,eps_pass,eps_rewrite,total\n", 0) == 0);
  // four data rows
  size_t rows = 0;
  for (char c : r.out)
    if (c == '\n') ++rows;
  CHECK(rows == 5);
}

TEST_CASE("translate dump is stable") {
  CliResult a = runCli("translate \"\\x. x\"");
  CliResult b = runCli("translate \"\\x. x\"");
  CHECK(a.exitCode == 0);
  CHECK(a.out == b.out);
  CHECK(a.out.find("node") != std::string::npos);
  CHECK(a.out.find("box") != std::string::npos);
}

TEST_CASE("stdin input") {
  std::string cmd = std::string("echo '(\\x. x) (\\y. y)' | ") + GOIM_BIN +
                    " eval --engine sub - >/dev/null 2>&1";
  int rc = std::system(cmd.c_str());
  CHECK(WEXITSTATUS(rc) == 0);
}
