#include "doctest.h"

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

namespace fs = std::filesystem;

namespace {
const fs::path& workdir() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / "degenlab_cli_io";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string prefix(const std::string& name) { return (workdir() / name).string(); }

int run(const std::string& args) {
  std::string cmd = std::string(DEGENLAB_CLI_PATH) + " " + args + " > " + prefix("stdout.txt") + " 2>&1";
  int st = std::system(cmd.c_str());
  return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

nlohmann::json report(const std::string& pre) { return nlohmann::json::parse(slurp(pre + "_report.json")); }

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }
}  // namespace

TEST_CASE("compare writes trajectory and report, exit 0 when all checks pass") {
  std::string pre = prefix("st");
  REQUIRE(run("compare --model st --seed 7 --out " + pre) == 0);
  std::string csv = slurp(pre + "_trajectory.csv");
  REQUIRE_FALSE(csv.empty());
  std::string header = first_line(csv);
  CHECK(header.rfind("t,el.", 0) == 0);
  CHECK(header.find("dist.el-hamiltonian") != std::string::npos);
  nlohmann::json r = report(pre);
  CHECK(r["all_pass"].get<bool>());
  CHECK(r["seed"] == 7);
  CHECK(r["config"]["model"] == "st");
  // rows after the header: t = 0, then the first sample time
  std::string rows = csv.substr(csv.find('\n') + 1);
  CHECK(rows.rfind("0,", 0) == 0);
  std::string second = rows.substr(rows.find('\n') + 1);
  CHECK(std::stod(second.substr(0, second.find(','))) > 0.0);
}

TEST_CASE("identical invocations give identical bytes") {
  std::string a = prefix("det_a"), b = prefix("det_b");
  REQUIRE(run("simulate --model clement --out " + a) == 0);
  REQUIRE(run("simulate --model clement --out " + b) == 0);
  CHECK(slurp(a + "_trajectory.csv") == slurp(b + "_trajectory.csv"));
}

TEST_CASE("inline JSON config") {
  std::string pre = prefix("inline");
  std::string cfg =
      R"('{"model":"st","initial":{"q":[1,0,0,0,1,0],"qd":[0,1,0,0,0,1]},"integrator":{"t_end":0.5},"formulations":["el","hamiltonian"]}')";
  REQUIRE(run("simulate --config " + cfg + " --out " + pre) == 0);
  std::string header = first_line(slurp(pre + "_trajectory.csv"));
  CHECK(header.find("skinner_rusk") == std::string::npos);
  CHECK(header.find("dist.el-hamiltonian") != std::string::npos);
}

TEST_CASE("bad config exits 2") {
  CHECK(run(R"(simulate --config '{"model":"nope"}' --out )" + prefix("bad")) == 2);
  CHECK(run(R"(simulate --config '{"model":"st","initial":{"q":[1],"qd":[0]}}' --out )" + prefix("bad")) == 2);
  CHECK(run("simulate --config /nonexistent/file.json --out " + prefix("bad")) == 2);
}

TEST_CASE("unknown subcommand options are rejected by the parser") {
  CHECK(run("verify --model moon") != 0);
}

TEST_CASE("verify: exit code follows the report") {
  std::string pre = prefix("verify_ref");
  int code = run("verify --model reference --points 10 --seed 3 --out " + pre);
  nlohmann::json r = report(pre);
  CHECK(code == (r["all_pass"].get<bool>() ? 0 : 1));
  CHECK(code == 0);
  bool saw_arc = false;
  for (const auto& c : r["checks"]) {
    std::string n = c["name"];
    CHECK(n.find(".st.") == std::string::npos);
    if (n == "zermelo.reference.arc_length") saw_arc = true;
  }
  CHECK(saw_arc);
}

TEST_CASE("sweep reports each grid point") {
  std::string pre = prefix("sweep");
  std::string cfg = R"('{"model":"st","initial":{"q":[1,0,0,0,1,0],"qd":[0,1,0,0,0,1]},"integrator":{"t_end":0.3}}')";
  REQUIRE(run("sweep --config " + cfg + R"( --grid '{"mu":[0.5,2.0]}' --threads 2 --out )" + pre) == 0);
  nlohmann::json r = report(pre);
  REQUIRE(r["extra"]["points"].size() == 2);
  CHECK(r["extra"]["points"][1]["parameters"]["mu"] == 2.0);
}
