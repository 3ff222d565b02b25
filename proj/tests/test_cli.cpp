// End-to-end tests of the command-line front end: each case invokes the
// built binary and checks printed output and exit status.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

#include "doctest.h"

namespace {

struct RunResult {
  int status = -1;
  std::string out;
};

RunResult sh(const std::string& cmd) {
  RunResult r;
  FILE* p = popen((cmd + " 2>/dev/null").c_str(), "r");
  REQUIRE(p != nullptr);
  char buf[4096];
  size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  int rc = pclose(p);
  r.status = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  return r;
}

std::string write_temp(const std::string& name, const std::string& text) {
  std::string path = std::string("/tmp/harrop_cli_") + name;
  std::ofstream f(path);
  f << text;
  return path;
}

const std::string kCli = HARROP_CLI_PATH;

const char* kRev =
    "rev(L1,L2) :- (rev_aux([],L2),"
    " forall X forall L3 forall K (rev_aux([X|L3],K) :- rev_aux(L3,[X|K])))"
    " => rev_aux(L1,[]).\n";

}  // namespace

TEST_CASE("run prints answers then yes and exits 0") {
  std::string f = write_temp("rev.hh", kRev);
  for (const char* engine : {"wam", "interp"}) {
    RunResult r = sh(kCli + " run " + f + " -q 'rev([1,2,3],L).' --engine " + engine);
    CHECK(r.status == 0);
    CHECK(r.out == "L = [3,2,1]\nyes\n");
  }
}

TEST_CASE("run reports no and exits 1 when the query has no proof") {
  std::string f = write_temp("pxx.hh", "p(X,X).\n");
  RunResult r = sh(kCli + " run " + f + " -q 'exists X forall Y p(X,Y).'");
  CHECK(r.status == 1);
  CHECK(r.out == "no\n");
  RunResult ok = sh(kCli + " run " + f + " -q 'forall Y exists X p(X,Y).'");
  CHECK(ok.status == 0);
}

TEST_CASE("missing file and parse errors exit 2") {
  CHECK(sh(kCli + " run /tmp/harrop_cli_nonexistent.hh -q 'a.'").status == 2);
  std::string f = write_temp("bad.hh", "p(.\n");
  CHECK(sh(kCli + " run " + f + " -q 'a.'").status == 2);
  std::string g = write_temp("ok.hh", "a.\n");
  CHECK(sh(kCli + " run " + g + " -q 'p( .'").status == 2);
}

TEST_CASE("run distinguishes a step limit from failure") {
  std::string f = write_temp("loop.hh", "loop(X) :- loop(X).\n");
  RunResult r = sh(kCli + " run " + f + " -q 'loop(a).' --max-steps 100");
  CHECK(r.status == 3);
}

TEST_CASE("all-solutions enumeration and max-solutions cap") {
  std::string f = write_temp("mem.hh", "m(a). m(b). m(c).\n");
  RunResult all = sh(kCli + " run " + f + " -q 'm(X).' --all");
  CHECK(all.out == "X = a\nX = b\nX = c\nyes\n");
  RunResult two = sh(kCli + " run " + f + " -q 'm(X).' --all --max-solutions 2");
  CHECK(two.out == "X = a\nX = b\nyes\n");
}

TEST_CASE("check agrees on a shared corpus program and exits 0") {
  std::string f = write_temp("rev2.hh", kRev);
  RunResult r = sh(kCli + " check " + f + " -q 'rev([1,2,3],L).'");
  CHECK(r.status == 0);
  CHECK(r.out == "AGREE: 1 answer(s)\n");
}

TEST_CASE("check under a tiny step budget is inconclusive, exit 3") {
  std::string f = write_temp("loop2.hh", "loop(X) :- loop(X).\n");
  RunResult r = sh(kCli + " check " + f + " -q 'loop(a).' --max-steps 1");
  CHECK(r.status == 3);
  CHECK(r.out.find("INCONCLUSIVE") == 0);
}

TEST_CASE("compile prints a bytecode listing") {
  std::string f = write_temp("rev3.hh", kRev);
  RunResult r = sh(kCli + " compile " + f);
  CHECK(r.status == 0);
  CHECK(r.out.find("rev: allocate 1") != std::string::npos);
  CHECK(r.out.find("push_impl_point t1,1") != std::string::npos);
  CHECK(r.out.find("trust_ext 1") != std::string::npos);
}

TEST_CASE("run --emit-bytecode dumps the listing before solving") {
  std::string f = write_temp("rev4.hh", kRev);
  RunResult r = sh(kCli + " run " + f + " -q 'rev([1],L).' --emit-bytecode");
  CHECK(r.status == 0);
  CHECK(r.out.find("allocate") != std::string::npos);
  CHECK(r.out.find("L = [1]\nyes\n") != std::string::npos);
}

TEST_CASE("repl streams answers on ';', stops on blank, survives bad input") {
  std::string f = write_temp("mem2.hh", "m(a). m(b).\n");
  RunResult r = sh(std::string("printf 'm(X).\\n;\\n;\\nnot a query(\\nm(a).\\n\\n:quit\\n' | ") +
                   kCli + " repl " + f);
  CHECK(r.status == 0);
  // both answers, then exhaustion; the malformed line is skipped; the last
  // query's first answer is accepted with a blank line
  CHECK(r.out.find("X = a") != std::string::npos);
  CHECK(r.out.find("X = b") != std::string::npos);
  CHECK(r.out.find("no") != std::string::npos);
  CHECK(r.out.find("yes") != std::string::npos);
}

TEST_CASE("repl :engine directive switches engines") {
  std::string f = write_temp("mem3.hh", "m(a).\n");
  RunResult r = sh(std::string("printf ':engine interp\\nm(X).\\n\\n:quit\\n' | ") +
                   kCli + " repl " + f);
  CHECK(r.status == 0);
  CHECK(r.out.find("X = a") != std::string::npos);
}
