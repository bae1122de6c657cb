#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "levitsim/io.hpp"

namespace fs = std::filesystem;
using levitsim::io::json;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

const fs::path& work() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / "levitsim_cli_test";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

Result cli(const std::string& args, const std::string& env = "") {
  const auto out = work() / "stdout.txt";
  const auto err = work() / "stderr.txt";
  const std::string cmd = "cd '" + work().string() + "' && " + env + " '" LEVITSIM_CLI "' " + args +
                          " > '" + out.string() + "' 2> '" + err.string() + "'";
  const int status = std::system(cmd.c_str());
  REQUIRE(WIFEXITED(status));
  return {WEXITSTATUS(status), slurp(out), slurp(err)};
}

fs::path write(const std::string& name, const std::string& body) {
  const auto p = work() / name;
  std::ofstream(p) << body;
  return p;
}

const char* kBudget = R"({
  "name": "cli_budget", "kind": "budget", "seed": 3,
  "parameters": {
    "particle": {"radius": {"value": 50, "unit": "nm"}, "density": {"value": 2200, "unit": "kg/m^3"}},
    "gas": {"pressure": {"value": 1e-6, "unit": "mbar"}},
    "trap": {
      "frequencies": [{"value": 0.5, "unit": "MHz"}, {"value": 0.5, "unit": "MHz"},
                      {"value": 0.5, "unit": "MHz"}],
      "intensity": {"value": 1, "unit": "W/um^2"}
    },
    "cavity": {"length": {"value": 1, "unit": "cm"}, "waist": {"value": 20, "unit": "um"},
               "kappa": {"value": 0.1, "unit": "MHz"}},
    "noise": {"s_eps": {"value": 1e-14, "unit": "1/Hz"}, "s_x": {"value": 1e-36, "unit": "m^2/Hz"},
              "linewidth": {"value": 1, "unit": "kHz"}, "gamma_c": {"value": 3, "unit": "kHz"},
              "n_c": 1e7}
  }
})";

}  // namespace

TEST_CASE("successful run exits 0 and honours LEVITSIM_OUT") {
  const auto f = write("budget.json", kBudget);
  const auto root = work() / "env_root";
  const auto r = cli("run " + f.string(), "LEVITSIM_OUT='" + root.string() + "'");
  CHECK(r.code == 0);
  CHECK(fs::exists(root / "cli_budget" / "manifest.json"));
  CHECK(fs::exists(root / "cli_budget" / "budget.json"));
  const auto status = json::parse(r.out);
  CHECK(status["status"] == "ok");

  const auto r2 = cli("run --quiet --out explicit " + f.string(),
                      "LEVITSIM_OUT='" + root.string() + "'");
  CHECK(r2.code == 0);
  CHECK(fs::exists(work() / "explicit" / "cli_budget" / "manifest.json"));

  const auto r3 = cli("run -q " + f.string(), "env -u LEVITSIM_OUT");
  CHECK(r3.code == 0);
  CHECK(fs::exists(work() / "levitsim-out" / "cli_budget" / "manifest.json"));
}

TEST_CASE("config errors exit 2 with a structured message") {
  std::string bad = kBudget;
  bad.replace(bad.find("\"pressure\""), 10, "\"preasure\"");
  const auto f = write("bad.json", bad);
  const auto r = cli("run --out o " + f.string());
  CHECK(r.code == 2);
  const auto e = json::parse(r.err);
  CHECK(e["error"]["category"] == "config");
  CHECK(e["error"]["exit_code"] == 2);
  CHECK(e["error"]["message"].get<std::string>().find("preasure") != std::string::npos);
  CHECK(e["error"]["source"].get<std::string>().find("bad.json") != std::string::npos);
  CHECK_FALSE(fs::exists(work() / "o" / "cli_budget"));

  CHECK(cli("validate " + f.string()).code == 2);
  CHECK(cli("run --out o " + (work() / "missing.json").string()).code == 2);
  CHECK(cli("run --format xml " + write("ok.json", kBudget).string()).code != 0);
}

TEST_CASE("numerical failure exits 3") {
  const auto f = write("huge.json", R"({
    "name": "huge", "kind": "cavity-cool",
    "parameters": {"omega_m": {"value": 1e6, "unit": "rad/s"}, "kappa": {"value": 1e5, "unit": "rad/s"},
      "g": {"value": 1e200, "unit": "rad/s"},
      "drive": {"detuning": {"value": -1e6, "unit": "rad/s"}, "rabi": {"value": 1e200, "unit": "rad/s"}}}
  })");
  const auto r = cli("run --out o " + f.string());
  CHECK(r.code == 3);
  CHECK(json::parse(r.err)["error"]["category"] == "numerical");
}

TEST_CASE("validate and list-scenarios") {
  const auto f = write("budget.json", kBudget);
  const auto v = cli("validate --print " + f.string());
  CHECK(v.code == 0);
  CHECK(v.out.find("\"pressure\"") != std::string::npos);
  const auto l = cli("list-scenarios --dir '" LEVITSIM_SCENARIO_DIR "'");
  CHECK(l.code == 0);
  for (const char* name : {"fig_velocity", "feedback_ladder", "collision_stream"}) {
    CHECK(l.out.find(name) != std::string::npos);
  }
  CHECK(cli("frobnicate").code != 0);
}

TEST_CASE("parallel run matches serial run") {
  const auto a = write("a.json", kBudget);
  std::string other = kBudget;
  other.replace(other.find("cli_budget"), 10, "cli_budgex");
  const auto b = write("b.json", other);
  CHECK(cli("run -q -j 2 --out par " + a.string() + " " + b.string()).code == 0);
  CHECK(cli("run -q --out ser " + a.string() + " " + b.string()).code == 0);
  for (const char* name : {"cli_budget", "cli_budgex"}) {
    CHECK(slurp(work() / "par" / name / "budget.json") ==
          slurp(work() / "ser" / name / "budget.json"));
  }
}
