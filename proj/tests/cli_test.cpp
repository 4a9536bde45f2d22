#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <sys/wait.h>

#include <nlohmann/json.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const fs::path kWork = fs::temp_directory_path() / "prefgame_cli_tests";

int run(const std::string& args, std::string* captured = nullptr) {
  fs::create_directories(kWork);
  fs::path log = kWork / "stdout.txt";
  std::string cmd = std::string(PREFGAME_CLI_PATH) + " " + args + " > " +
                    log.string() + " 2> " + (kWork / "stderr.txt").string();
  int rc = std::system(cmd.c_str());
  if (captured) {
    std::ifstream in(log);
    std::ostringstream os;
    os << in.rdbuf();
    *captured = os.str();
  }
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

fs::path write(const std::string& name, const std::string& content) {
  fs::create_directories(kWork);
  fs::path p = kWork / name;
  std::ofstream(p) << content;
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

const char* kSpecAB = "prefltlf 2\nF a\nF b\n> 0 1\n";

const char* kToyGame = R"({
  "ap": ["a", "b"],
  "states": [
    {"id": "s0", "owner": 1},
    {"id": "sa", "owner": 1, "label": ["a"]},
    {"id": "sb", "owner": 1, "label": ["b"]}
  ],
  "actions": [
    {"id": "m1", "owner": 1, "cost": 1},
    {"id": "m2", "owner": 1, "cost": 1}
  ],
  "trans": [["s0", "m1", "sa"], ["s0", "m2", "sb"]],
  "init": "s0"
})";

}  // namespace

TEST_CASE("compile writes the automaton artifacts") {
  fs::path spec = write("ab.prefltlf", kSpecAB);
  fs::path out = kWork / "compile_out";
  REQUIRE(run("compile " + spec.string() + " --out " + out.string()) == 0);
  json aut = json::parse(slurp(out / "automaton.json"));
  CHECK(aut.contains("states"));
  CHECK(slurp(out / "automaton.dot").find("digraph") != std::string::npos);
}

TEST_CASE("compile rejects an inconsistent spec with exit code 2") {
  fs::path spec = write("bad.prefltlf", "prefltlf 2\nF a\nF b\n> 0 1\n> 1 0\n");
  CHECK(run("compile " + spec.string() + " --out " +
            (kWork / "bad_out").string()) == 2);
}

TEST_CASE("missing input files exit with code 2") {
  CHECK(run("compile " + (kWork / "nope.prefltlf").string() + " --out " +
            (kWork / "x").string()) == 2);
}

TEST_CASE("solve reports the aligned characterization on the toy game") {
  fs::path game = write("toy.json", kToyGame);
  fs::path spec = write("ab.prefltlf", kSpecAB);
  fs::path out = kWork / "solve_out";
  std::string printed;
  REQUIRE(run("solve " + game.string() + " --spec1 " + spec.string() +
                  " --out " + out.string(),
              &printed) == 0);
  json report = json::parse(slurp(out / "report.json"));
  CHECK(report["alignment"] == "fully_aligned");
  CHECK(report["case"] == "Thm-1");
  REQUIRE(report["outcomes"].size() == 1);
  CHECK(report["outcomes"][0]["state"].get<std::string>().find("sa") !=
        std::string::npos);
  CHECK(printed.find("Thm-1") != std::string::npos);
  CHECK(fs::exists(out / "product.json"));
  CHECK(fs::exists(out / "summary.txt"));
}

TEST_CASE("repeated runs produce byte-identical outputs") {
  fs::path game = write("toy.json", kToyGame);
  fs::path spec = write("ab.prefltlf", kSpecAB);
  fs::path out1 = kWork / "det1", out2 = kWork / "det2";
  std::string base = "solve " + game.string() + " --spec1 " + spec.string();
  REQUIRE(run(base + " --out " + out1.string()) == 0);
  REQUIRE(run(base + " --out " + out2.string()) == 0);
  for (const char* f : {"report.json", "report.dot", "product.json",
                        "summary.txt"})
    CHECK(slurp(out1 / f) == slurp(out2 / f));
}

TEST_CASE("a game that never terminates exits with code 3") {
  fs::path game = write("loop.json", R"({
    "ap": ["a", "b"],
    "states": [{"id": "s0", "owner": 1}],
    "actions": [{"id": "m1", "owner": 1, "cost": 1}],
    "trans": [["s0", "m1", "s0"]],
    "init": "s0"
  })");
  fs::path spec = write("ab.prefltlf", kSpecAB);
  CHECK(run("solve " + game.string() + " --spec1 " + spec.string() +
            " --out " + (kWork / "loop_out").string()) == 3);
  // The horizon transform makes the same input solvable.
  CHECK(run("solve " + game.string() + " --spec1 " + spec.string() +
            " --horizon 3 --out " + (kWork / "loop_out").string()) == 0);
}

TEST_CASE("specs over different goal sets exit with code 4") {
  fs::path game = write("toy.json", kToyGame);
  fs::path spec1 = write("ab.prefltlf", kSpecAB);
  fs::path spec2 = write("other.prefltlf", "prefltlf 2\nF a\nF (a & b)\n> 1 0\n");
  CHECK(run("solve " + game.string() + " --spec1 " + spec1.string() +
            " --spec2 " + spec2.string() + " --out " +
            (kWork / "mismatch_out").string()) == 4);
}

TEST_CASE("check accepts the solver's witness and rejects a deviation") {
  fs::path game = write("toy.json", kToyGame);
  fs::path spec = write("ab.prefltlf", kSpecAB);
  fs::path out = kWork / "check_out";
  REQUIRE(run("solve " + game.string() + " --spec1 " + spec.string() +
              " --out " + out.string()) == 0);
  json report = json::parse(slurp(out / "report.json"));
  fs::path good = write("profile_good.json", report["witnesses"].dump(2));
  std::string printed;
  CHECK(run("check " + game.string() + " " + good.string() + " --spec1 " +
                spec.string(),
            &printed) == 0);
  CHECK(printed.find("NASH") != std::string::npos);

  // Steer player 1 to the dominated b-sink instead.
  json bad = report["witnesses"];
  for (auto& [key, val] : bad[0]["moves"].items()) {
    (void)key;
    val = "m2";
  }
  fs::path badp = write("profile_bad.json", bad.dump(2));
  CHECK(run("check " + game.string() + " " + badp.string() + " --spec1 " +
                spec.string(),
            &printed) == 1);
  CHECK(printed.find("NOT-NASH") != std::string::npos);
}

TEST_CASE("oracle agrees with the solver on the toy game") {
  fs::path game = write("toy.json", kToyGame);
  fs::path spec = write("ab.prefltlf", kSpecAB);
  fs::path out = kWork / "oracle_out";
  std::string printed;
  REQUIRE(run("oracle " + game.string() + " --spec1 " + spec.string() +
                  " --both-readings --out " + out.string(),
              &printed) == 0);
  json o = json::parse(slurp(out / "oracle.json"));
  CHECK(o["diff"]["agree"] == true);
  CHECK(o.contains("weak"));
}

TEST_CASE("scenario sweeps emit a grid with blocked cells marked") {
  fs::path cfg = write("mini_scenario.json", R"({
    "width": 3, "height": 3,
    "walls": [], "obstacles": [[1, 1]],
    "packages": [[0, 1], [2, 0], [2, 2]],
    "destinations": [[2, 1], [0, 0], [0, 2]],
    "droneA": [0, 0], "droneB": [2, 2], "tmax": 4
  })");
  fs::path spec = write("drone.prefltlf",
                        "prefltlf 2\nF d1\nF d2\n>= 0 1\n>= 1 0\n");
  fs::path out = kWork / "sweep_out";
  std::string printed;
  REQUIRE(run("scenario " + cfg.string() + " --spec1 " + spec.string() +
                  " --sweep maxrank --out " + out.string(),
              &printed) == 0);
  std::string csv = slurp(out / "sweep_maxrank.csv");
  REQUIRE(!csv.empty());
  // Rows are printed top (highest y) first; the obstacle at (1, 1) is the
  // middle cell of the middle row and must be ineligible.
  std::vector<std::string> rows;
  std::istringstream is(csv);
  for (std::string line; std::getline(is, line);) rows.push_back(line);
  REQUIRE(rows.size() == 3);
  std::istringstream mid(rows[1]);
  std::string c0, c1;
  std::getline(mid, c0, ',');
  std::getline(mid, c1, ',');
  CHECK(c1 == "-1");
}
