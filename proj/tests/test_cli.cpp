#include <catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(LANDAU_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p);
  std::string out;
  char buf[4096];
  while (std::size_t k = fread(buf, 1, sizeof buf, p)) out.append(buf, k);
  const int status = pclose(p);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch() {
  const auto d = fs::temp_directory_path() / "landau_cli_test";
  fs::create_directories(d);
  return d;
}

}  // namespace

TEST_CASE("level command prints the Landau level") {
  const auto r = run("landau level --b 1 --d 1 --q 1");
  CHECK(r.code == 0);
  CHECK(r.out == "1\n");
  CHECK(run("landau level --b 2 --d 2 --q 3").out == "12\n");
  CHECK(run("landau level --q 0").code == 2);
}

TEST_CASE("limit table for the lowest level approaches one") {
  const auto out = scratch() / "limit.csv";
  REQUIRE(run("toeplitz limit --q 1 --b 2 --R 1 --jmax 40 --precision 256 --output " + out.string()).code == 0);
  std::istringstream in(slurp(out));
  std::string line, last;
  std::getline(in, line);
  CHECK(line == "j,s_j,limit");
  int rows = 0;
  while (std::getline(in, line)) {
    last = line;
    ++rows;
  }
  CHECK(rows == 40);
  const double limit = std::stod(last.substr(last.rfind(',') + 1));
  CHECK(std::abs(limit - 1) < 0.1);
  CHECK_FALSE(fs::exists(out.string() + ".tmp"));
}

TEST_CASE("malformed curve files exit 2 with a line number") {
  const auto bad = scratch() / "bad_curve.txt";
  std::ofstream(bad) << "4\n0 1 0\n1.0 0 1\n";
  const std::string cmd = std::string(LANDAU_CLI_PATH) + " capacity --curve " + bad.string() + " 2>&1";
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p);
  char buf[512] = {};
  const std::size_t k = fread(buf, 1, sizeof buf - 1, p);
  const int status = pclose(p);
  CHECK(WEXITSTATUS(status) == 2);
  CHECK(std::string(buf, k).find("line 3") != std::string::npos);
}

TEST_CASE("config file: flags win, unknown keys are rejected") {
  const auto cfg = scratch() / "run.cfg";
  std::ofstream(cfg) << "# level of the second band\nb = 2\nq = 2\n";
  CHECK(run("landau level --config " + cfg.string()).out == "6\n");
  CHECK(run("landau level --q 3 --config " + cfg.string()).out == "10\n");
  const auto bogus = scratch() / "bogus.cfg";
  std::ofstream(bogus) << "b = 2\nwidth = 3\n";
  CHECK(run("landau level --config " + bogus.string()).code == 2);
  const auto malformed = scratch() / "malformed.cfg";
  std::ofstream(malformed) << "b 2\n";
  CHECK(run("landau level --config " + malformed.string()).code == 2);
  CHECK(run("landau level --b x").code == 2);
}

TEST_CASE("JSON output embeds the resolved configuration and is deterministic") {
  const auto a = scratch() / "cap_a.json", b = scratch() / "cap_b.json";
  REQUIRE(run("capacity --curve ellipse:2:1 --n 256 --output " + a.string()).code == 0);
  REQUIRE(run("capacity --curve ellipse:2:1 --n 256 --output " + b.string()).code == 0);
  CHECK(slurp(a) == slurp(b));
  const auto doc = nlohmann::json::parse(slurp(a));
  CHECK(doc["config"]["command"] == "capacity");
  CHECK(doc["config"]["n"] == 256);
  CHECK(std::abs(doc["capacity"].get<double>() - 1.5) < 1e-6);

  const auto g1 = scratch() / "green1.csv", g2 = scratch() / "green2.csv";
  REQUIRE(run("green --d 3 --N 6 --precision 128 --output " + g1.string()).code == 0);
  REQUIRE(run("green --d 3 --N 6 --precision 128 --output " + g2.string()).code == 0);
  CHECK(slurp(g1) == slurp(g2));
  CHECK(slurp(g1).rfind("s,I,I0,Iinf,expansion,residual\n", 0) == 0);
}

TEST_CASE("numerical failures exit 3") {
  // mode 30 on 64 nodes is not resolved well enough for the boundary extrapolation
  CHECK(run("bie jump --curve circle --n 64 --b 1 --density mode:30").code == 3);
}

TEST_CASE("boundary commands produce reports") {
  const auto out = scratch() / "generic.csv";
  REQUIRE(run("bie generic --curve circle --n 32 --b 1 --output " + out.string()).code == 0);
  CHECK(slurp(out).rfind("epsilon,cond_plus,cond_minus,singular\n", 0) == 0);
  const auto rep = scratch() / "rep.json";
  REQUIRE(run("bie represent --curve circle --n 256 --source 0.2,-0.1 --side exterior --output " + rep.string()).code == 0);
  CHECK(nlohmann::json::parse(slurp(rep))["max_residual"].get<double>() < 1e-8);
  CHECK(run("bie represent --curve circle --n 256 --source 0.2,-0.1 --side interior").code == 2);
}
