#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace {

const std::string cli = FAIRDYN_CLI_PATH;

struct TempDir {
  std::string path;
  TempDir() {
    char tmpl[] = "/tmp/fairdyn-cli-XXXXXX";
    path = mkdtemp(tmpl);
  }
  ~TempDir() { std::system(("rm -rf " + path).c_str()); }
  std::string file(const std::string& name) const { return path + "/" + name; }
};

int run_cli(const std::string& args) {
  const int status = std::system((cli + " " + args + " >/dev/null 2>&1").c_str());
  return WEXITSTATUS(status);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

TEST_CASE("bad invocations exit 1") {
  CHECK(run_cli("definitely-not-a-command") == 1);
  CHECK(run_cli("gen") == 1);                          // missing required options
  CHECK(run_cli("run --alloc exact") == 1);            // no instance
  CHECK(run_cli("gen nonsense --out /tmp/x") == 1);    // unknown kind
}

TEST_CASE("gen then run round-trips an instance") {
  TempDir dir;
  const auto inst = dir.file("geom.jsonl");
  const auto report = dir.file("report.json");
  CHECK(run_cli("gen geometric --n 50 --out " + inst) == 0);
  CHECK(run_cli("run --alloc exact --instance " + inst + " --report " + report) == 0);
  const auto text = slurp(report);
  CHECK(text.find("\"total_disruptions\": 1225") != std::string::npos);  // 50*49/2
  CHECK(text.find("\"format_version\": 1") != std::string::npos);
  CHECK(text.find("\"feasibility_violations\": 0") != std::string::npos);
}

TEST_CASE("inline instances avoid the temp file") {
  TempDir dir;
  const auto report = dir.file("report.json");
  CHECK(run_cli("run --alloc logstar --gen geometric:64 --report " + report) == 0);
  const auto text = slurp(report);
  CHECK(text.find("\"approx_violations\": 0") != std::string::npos);
}

TEST_CASE("seeded runs are byte-identical") {
  TempDir dir;
  const auto r1 = dir.file("r1.json");
  const auto r2 = dir.file("r2.json");
  const std::string base = "run --alloc threshold --seed 42 --gen randperm:1,2,4,8,16,32 --report ";
  CHECK(run_cli(base + r1) == 0);
  CHECK(run_cli(base + r2) == 0);
  CHECK(slurp(r1) == slurp(r2));
}

TEST_CASE("strict mode exits 2 on a violated claim") {
  // The threshold allocator is honestly 4-approximate; claiming 1 is a
  // lie that strict mode turns into exit 2. Without --strict the run
  // records the violations and still exits 0.
  const std::string base = "run --alloc threshold --seed 1 --gen geometric:16 --claimed-c 1";
  CHECK(run_cli(base + " --strict") == 2);
  CHECK(run_cli(base) == 0);
  // Arrival-only allocators reject departure streams outright.
  CHECK(run_cli("run --alloc logstar --gen randperm:1,2,4:random") == 1);
  CHECK(run_cli("run --alloc exact --gen randperm:1,2,4:random") == 0);
}

TEST_CASE("games certify honest opponents and report dishonest ones") {
  TempDir dir;
  const auto rep = dir.file("game.json");
  CHECK(run_cli("game --adversary batch --opponent exact --M 32 --b 2 --c 1 --report " + rep) ==
        0);
  const auto text = slurp(rep);
  CHECK(text.find("\"certified\": true") != std::string::npos);

  // The threshold allocator is 4-approximate, not 1-approximate: the
  // batch adversary catches the false claim.
  CHECK(run_cli("game --adversary batch --opponent threshold --seed 3 --M 32 --b 2 --c 1") == 3);

  CHECK(run_cli("game --adversary monotone --opponent lightheavy --n 64 --c 2 --report " + rep) ==
        0);
  CHECK(slurp(rep).find("\"certified\": true") != std::string::npos);
}

TEST_CASE("sweep emits the master seed and one row per trial") {
  TempDir dir;
  const auto cfgp = dir.file("sweep.json");
  const auto csv = dir.file("rows.csv");
  std::ofstream cfg(cfgp);
  cfg << R"({
    "master_seed": 9,
    "trials": 3,
    "configs": [
      {"id": "exact-small",
       "instance": {"kind": "geometric", "n": 20},
       "alloc": {"kind": "exact"},
       "claimed_c": "1"}
    ]
  })";
  cfg.close();
  CHECK(run_cli("sweep --config " + cfgp + " --out " + csv) == 0);
  const auto text = slurp(csv);
  CHECK(text.rfind("# master_seed=9\n", 0) == 0);
  CHECK(text.find("config_id,seed,n,") != std::string::npos);
  int rows = 0;
  for (char ch : text)
    if (ch == '\n') ++rows;
  CHECK(rows == 2 + 3);  // comment + header + trials
  CHECK(text.find("exact-small") != std::string::npos);
}

TEST_CASE("report directory env var prefixes relative paths") {
  TempDir dir;
  const std::string cmd = "cd /tmp && FAIRDYN_REPORT_DIR=" + dir.path + " " + cli +
                          " run --alloc exact --gen geometric:5 --report sub.json >/dev/null 2>&1";
  CHECK(WEXITSTATUS(std::system(cmd.c_str())) == 0);
  CHECK(slurp(dir.file("sub.json")).find("\"arrivals\": 5") != std::string::npos);
}
