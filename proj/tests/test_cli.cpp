#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <string>

#include "doctest.h"

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + (env.empty() ? "" : " ") + CARNOT_CLI_PATH + std::string(" ") + args + " 2>&1";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::array<char, 4096> buf{};
  while (std::fgets(buf.data(), buf.size(), p)) r.out += buf.data();
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string data(const std::string& name) { return std::string(CARNOT_DATA_DIR) + "/" + name; }

std::string last_line(const std::string& s) {
  std::string t = s;
  while (!t.empty() && t.back() == '\n') t.pop_back();
  const auto pos = t.rfind('\n');
  return pos == std::string::npos ? t : t.substr(pos + 1);
}

bool has(const std::string& s, const std::string& needle) { return s.find(needle) != std::string::npos; }

}  // namespace

TEST_CASE("probe reports stabilization for g235") {
  const auto r = run("probe g235 --degree 8");
  CHECK(r.code == 0);
  CHECK(has(last_line(r.out), "stabilized at 14"));
  const auto f = run("probe " + data("g235.grp") + " --degree 8");
  CHECK(f.code == 0);
  CHECK(has(last_line(f.out), "stabilized at 14"));
}

TEST_CASE("validate flags a Jacobi failure and names the triple") {
  const auto bad = run("validate " + data("broken_jacobi.grp"));
  CHECK(bad.code == 1);
  CHECK(has(bad.out, "jacobi"));
  CHECK(has(bad.out, "(1,1)"));
  CHECK(has(bad.out, "invalid"));
  CHECK(run("validate engel").code == 0);
  CHECK(run("validate " + data("heisenberg.grp")).code == 0);
}

TEST_CASE("frame prints the Heisenberg frame") {
  const auto r = run("--format machine frame heisenberg");
  CHECK(r.code == 0);
  CHECK(has(r.out, "X1=1 d1 + -1/2*x2 d3\n"));
  CHECK(has(r.out, "X2=1 d2 + 1/2*x1 d3\n"));
  CHECK(has(r.out, "X3=1 d3\n"));
  const auto h = run("frame heisenberg");
  CHECK(has(h.out, "left-invariant frame"));
  CHECK(has(h.out, "coframe"));
}

TEST_CASE("machine output is byte-stable") {
  for (const std::string args : {"frame g235", "probe engel --degree 4", "solve-contact heisenberg --degree 2 --basis",
                                 "verify-weak heisenberg --field kernel:2:3"}) {
    CAPTURE(args);
    const auto a = run("--format machine " + args), b = run("--format machine " + args);
    CHECK(a.code == b.code);
    CHECK(a.out == b.out);
    for (std::size_t pos = 0; pos < a.out.size();) {
      const auto end = a.out.find('\n', pos);
      const std::string line = a.out.substr(pos, end - pos);
      CHECK(has(line, "="));
      pos = end + 1;
    }
  }
}

TEST_CASE("every subcommand documents its object in --help") {
  const std::pair<const char*, const char*> cmds[] = {
      {"validate", "Jacobi"},          {"frame", "frame"},           {"solve-contact", "contact"},
      {"probe", "Rigidity"},           {"smooth-demo", "Mollification"}, {"verify-weak", "Weak contact"},
      {"chart-demo", "flow charts"}};
  for (const auto& [cmd, word] : cmds) {
    CAPTURE(cmd);
    const auto r = run(std::string(cmd) + " --help");
    CHECK(r.code == 0);
    CHECK(has(r.out, word));
  }
}

TEST_CASE("usage errors exit with code 2") {
  CHECK(run("").code == 2);
  CHECK(run("nosuchcommand").code == 2);
  CHECK(run("probe g235 --degree 99").code == 2);
  CHECK(run("frame " + data("missing.grp")).code == 2);
  CHECK(run("verify-weak heisenberg --field bogus:1").code == 2);
  CHECK(run("--format xml frame heisenberg").code == 2);
}

TEST_CASE("verify-weak and chart-demo exit codes follow the verdict") {
  const auto ok = run("--format machine verify-weak heisenberg --field kernel:2:3");
  CHECK(ok.code == 0);
  CHECK(has(ok.out, "verdict=pass"));
  const auto no = run("--format machine verify-weak heisenberg --field 'poly:x3;0;0'");
  CHECK(no.code == 1);
  CHECK(has(no.out, "verdict=fail"));
  const auto push = run("--format machine verify-weak heisenberg --field right:1 --pushforward dilation:2@left:1,0,0");
  CHECK(push.code == 0);
  CHECK(has(push.out, "verdict=pass"));
  CHECK(run("chart-demo heisenberg --map left:1,2,3").code == 0);
  CHECK(run("chart-demo heisenberg --map identity --point 0.1,0.2").code == 2);
}

TEST_CASE("CARNOT_GRID_ORDER sets the default grid") {
  const auto a = run("--format machine smooth-demo heisenberg", "CARNOT_GRID_ORDER=5");
  CHECK(a.code == 0);
  CHECK(has(a.out, "grid=5\n"));
  const auto b = run("--format machine smooth-demo heisenberg --grid 7", "CARNOT_GRID_ORDER=5");
  CHECK(has(b.out, "grid=7\n"));
}
