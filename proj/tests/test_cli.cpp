#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "dyck/cli.hpp"
#include "test_support.hpp"

using namespace dyck;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path dir;
  TempDir() {
    dir = fs::temp_directory_path() /
          ("dyckreach_test_" + std::to_string(::getpid()));
    fs::create_directories(dir);
  }
  ~TempDir() { fs::remove_all(dir); }
  std::string file(const std::string& name, const std::string& content) {
    fs::path p = dir / name;
    std::ofstream(p) << content;
    return p.string();
  }
  std::string path(const std::string& name) { return (dir / name).string(); }
};

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

} // namespace

TEST_CASE("dscc fast and naive print identical listings") {
  TempDir tmp;
  std::string file = tmp.file("fanout.dg", test::kFanoutGraphText);
  auto fast = cli({"dscc", file, "--algo", "fast"});
  auto naive = cli({"dscc", file, "--algo", "naive"});
  CHECK(fast.code == 0);
  CHECK(fast.out == "class u: u v z\nclass x: x\n");
  CHECK(naive.out == fast.out);
}

TEST_CASE("dscc emits stats json on request") {
  TempDir tmp;
  std::string file = tmp.file("fanout.dg", test::kFanoutGraphText);
  auto res = cli({"dscc", file, "--algo", "fast", "--stats-json"});
  CHECK(res.code == 0);
  CHECK(res.out.find("\"classes\":2") != std::string::npos);
  CHECK(res.out.find("\"n\":4") != std::string::npos);
}

TEST_CASE("fast on a general-mode file is a mode mismatch") {
  TempDir tmp;
  std::string file =
      tmp.file("gen.dg", "dyckgraph 1\nk 1\nmode general\nedge a b o1\n");
  CHECK(cli({"dscc", file, "--algo", "fast"}).code == 3);
  CHECK(cli({"query", file, "a", "b", "--algo", "fast"}).code == 3);
  CHECK(cli({"dscc", file, "--algo", "naive"}).code == 0);
}

TEST_CASE("query exit codes reflect the answer") {
  TempDir tmp;
  std::string file = tmp.file("fanout.dg", test::kFanoutGraphText);
  auto same = cli({"query", file, "u", "z"});
  CHECK(same.code == 0);
  CHECK(same.out == "true\n");
  auto diff = cli({"query", file, "x", "u"});
  CHECK(diff.code == 1);
  CHECK(diff.out == "false\n");
  CHECK(cli({"query", file, "u", "u"}).code == 0);
  CHECK(cli({"query", file, "nosuch", "u"}).code == 2);
}

TEST_CASE("malformed files exit 2") {
  TempDir tmp;
  std::string file = tmp.file("bad.dg", "dyckgraph 1\nk 1\nmode general\nedge a b o7\n");
  CHECK(cli({"dscc", file}).code == 2);
  CHECK(cli({"dscc", tmp.path("missing.dg")}).code == 2);
}

TEST_CASE("parse accepts and rejects via the reduction") {
  TempDir tmp;
  std::string grammar = tmp.file("anbn.cnf",
                                 "cnf 1\nstart S\nrule S -> A B\nrule S -> T B\n"
                                 "rule T -> A S\nrule A -> 'a'\nrule B -> 'b'\n");
  auto yes = cli({"parse", grammar, "aabb"});
  CHECK(yes.code == 0);
  CHECK(yes.out == "accept\n");
  auto no = cli({"parse", grammar, "ba"});
  CHECK(no.code == 1);
  CHECK(no.out == "reject\n");
  CHECK(cli({"parse", grammar, ""}).code == 1);
}

TEST_CASE("summarize and analyze answer the callback queries") {
  TempDir tmp;
  // Library: method g alone (the callback is unresolved).
  std::string lib = tmp.file("lib.dg",
                             "dyckgraph 1\nk 2\nmode general\n"
                             "node g.x method=0\nnode g.y method=0\n"
                             "node g.p method=0\nnode g.ret method=0\n"
                             "edge g.p g.ret eps\n");
  std::string summary_path = tmp.path("lib.sum");
  auto sum = cli({"summarize", lib, "--out", summary_path});
  REQUIRE(sum.code == 0);

  // Client including f1: the dependence of g.p on g.y appears.
  std::string with_f1 = tmp.file("with_f1.dg",
                                 "dyckgraph 1\nk 2\nmode general\n"
                                 "node g.x method=0\nnode g.y method=0\n"
                                 "node g.p method=0\nnode g.ret method=0\n"
                                 "node f1.x method=1\nnode f1.y method=1\n"
                                 "node f1.phi method=1\nnode f1.ret method=1\n"
                                 "edge g.p g.ret eps\n"
                                 "edge f1.x f1.phi eps\nedge f1.y f1.phi eps\n"
                                 "edge f1.phi f1.ret eps\n"
                                 "edge g.x f1.x o1\nedge g.y f1.y o1\n"
                                 "edge f1.ret g.p c1\n");
  std::string queries = tmp.file("queries.txt", "g.y g.p\ng.p g.y\n");
  auto res = cli({"analyze", summary_path, with_f1, "--queries", queries});
  REQUIRE(res.code == 0);
  CHECK(res.out == "g.y g.p true\ng.p g.y false\n");

  // Client including only f2 (ignores y): no dependence.
  std::string with_f2 = tmp.file("with_f2.dg",
                                 "dyckgraph 1\nk 2\nmode general\n"
                                 "node g.x method=0\nnode g.y method=0\n"
                                 "node g.p method=0\nnode g.ret method=0\n"
                                 "node f2.x method=2\nnode f2.y method=2\n"
                                 "node f2.phi method=2\nnode f2.ret method=2\n"
                                 "edge g.p g.ret eps\n"
                                 "edge f2.x f2.phi eps\nedge f2.phi f2.ret eps\n"
                                 "edge g.x f2.x o2\nedge g.y f2.y o2\n"
                                 "edge f2.ret g.p c2\n");
  auto res2 = cli({"analyze", summary_path, with_f2, "--queries", queries});
  REQUIRE(res2.code == 0);
  CHECK(res2.out == "g.y g.p false\ng.p g.y false\n");

  // Tampering with the library subgraph trips the digest.
  std::string stale = tmp.file("stale.dg",
                               "dyckgraph 1\nk 2\nmode general\n"
                               "node g.x method=0\nnode g.y method=0\n"
                               "node g.p method=0\nnode g.ret method=0\n"
                               "edge g.p g.ret eps\nedge g.x g.p eps\n");
  CHECK(cli({"analyze", summary_path, stale, "--queries", queries}).code == 4);

  // Missing method tags are an input error.
  std::string untagged = tmp.file("untagged.dg",
                                  "dyckgraph 1\nk 0\nmode general\nnode a\n");
  CHECK(cli({"summarize", untagged}).code == 2);
}

TEST_CASE("gen emits deterministic seeded files") {
  auto a = cli({"gen", "--family", "bidirected-random", "--seed", "7", "-n",
                "12", "-m", "20"});
  auto b = cli({"gen", "--family", "bidirected-random", "--seed", "7", "-n",
                "12", "-m", "20"});
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out.find("# family bidirected-random seed 7") == 0);

  auto pv = cli({"gen", "--family", "program-valid-random", "--seed", "3"});
  CHECK(pv.code == 0);
  CHECK(pv.out.find("method=") != std::string::npos);

  for (const char* family : {"union-seq-random", "ktree", "cnf-random"})
    CHECK(cli({"gen", "--family", family, "--seed", "5"}).code == 0);
}

TEST_CASE("generated graphs feed straight back into dscc") {
  TempDir tmp;
  std::string path = tmp.path("gen.dg");
  auto gen = cli({"gen", "--family", "bidirected-random", "--seed", "11", "-n",
                  "25", "-m", "50", "--out", path});
  REQUIRE(gen.code == 0);
  auto fast = cli({"dscc", path, "--algo", "fast"});
  auto naive = cli({"dscc", path, "--algo", "naive"});
  CHECK(fast.code == 0);
  CHECK(fast.out == naive.out);
}

TEST_CASE("bench prints the pinned CSV header") {
  auto res = cli({"bench", "--sizes", "500,1000", "--algos", "fast", "--seed", "2"});
  REQUIRE(res.code == 0);
  std::istringstream lines(res.out);
  std::string header;
  std::getline(lines, header);
  CHECK(header == "family,n,m,k,algo,ms,iterations,sum_sprime");
  int rows = 0;
  std::string row;
  while (std::getline(lines, row))
    if (!row.empty()) rows++;
  CHECK(rows == 2);
}
