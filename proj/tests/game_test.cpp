#include <doctest.h>

#include <queue>
#include <set>

#include <nlohmann/json.hpp>

#include "prefgame/game.hpp"
#include "prefgame/scenario.hpp"

using namespace prefgame::game;
using nlohmann::json;

namespace {

json tiny_game() {
  return json::parse(R"({
    "ap": ["p"],
    "states": [
      {"id": "s0", "owner": 1},
      {"id": "s1", "owner": 2, "label": ["p"]}
    ],
    "actions": [
      {"id": "go", "owner": 1, "cost": 1},
      {"id": "stay", "owner": 2, "cost": 1}
    ],
    "trans": [["s0", "go", "s1"]],
    "init": "s0"
  })");
}

int find_action(const GameGraph& g, const std::string& id) {
  for (size_t i = 0; i < g.actions.size(); ++i)
    if (g.actions[i].id == id) return static_cast<int>(i);
  return -1;
}

/// Shortest path (in transitions) from init to any state satisfying pred.
int bfs_distance(const GameGraph& g, auto pred) {
  std::vector<int> dist(g.num_states(), -1);
  std::queue<int> q;
  q.push(g.init);
  dist[g.init] = 0;
  while (!q.empty()) {
    int s = q.front();
    q.pop();
    if (pred(s)) return dist[s];
    for (auto& [a, d] : g.trans[s])
      if (dist[d] < 0) dist[d] = dist[s] + 1, q.push(d);
  }
  return -1;
}

}  // namespace

TEST_CASE("a one-state game loads as a single sink") {
  json doc = json::parse(R"({
    "ap": [], "states": [{"id": "only", "owner": 1}],
    "actions": [], "trans": [], "init": "only"
  })");
  GameGraph g = load_game(doc);
  CHECK(g.num_states() == 1);
  CHECK(g.is_sink(0));
}

TEST_CASE("game json round-trips") {
  GameGraph g = load_game(tiny_game());
  GameGraph g2 = load_game(game_to_json(g));
  CHECK(game_to_json(g) == game_to_json(g2));
  CHECK(g.states[1].label == 1u);
}

TEST_CASE("using the opponent's action is an owner violation") {
  json doc = tiny_game();
  doc["trans"].push_back({"s0", "stay", "s1"});
  CHECK_THROWS_WITH_AS(load_game(doc),
                       doctest::Contains("owner violation"), GameError);
}

TEST_CASE("duplicate transitions on one action are nondeterministic") {
  json doc = tiny_game();
  doc["trans"].push_back({"s0", "go", "s0"});
  CHECK_THROWS_WITH_AS(load_game(doc),
                       doctest::Contains("nondeterministic"), GameError);
}

TEST_CASE("all validation problems are reported together") {
  json doc = tiny_game();
  doc["trans"].push_back({"s0", "stay", "s1"});   // owner violation
  doc["trans"].push_back({"s0", "go", "nowhere"});  // dangling reference
  try {
    load_game(doc);
    FAIL("expected a validation error");
  } catch (const GameError& e) {
    std::string msg = e.what();
    CHECK(msg.find("owner violation") != std::string::npos);
    CHECK(msg.find("dangling state reference") != std::string::npos);
  }
}

TEST_CASE("unrolling to horizon zero leaves a single sink") {
  GameGraph g = load_game(tiny_game());
  GameGraph u = unroll_horizon(g, 0);
  CHECK(u.num_states() == 1);
  CHECK(u.is_sink(0));
}

TEST_CASE("unrolling a self-loop produces a bounded chain") {
  json doc = json::parse(R"({
    "ap": [], "states": [{"id": "s", "owner": 1}],
    "actions": [{"id": "loop", "owner": 1, "cost": 1}],
    "trans": [["s", "loop", "s"]], "init": "s"
  })");
  GameGraph u = unroll_horizon(load_game(doc), 3);
  CHECK(u.num_states() == 4);
  int s = u.init, steps = 0;
  while (!u.is_sink(s)) s = u.trans[s][0].second, ++steps;
  CHECK(steps == 3);
}

TEST_CASE("only unit-cost actions advance the horizon counter") {
  json doc = json::parse(R"({
    "ap": [],
    "states": [{"id": "x", "owner": 1}, {"id": "y", "owner": 1},
               {"id": "z", "owner": 1}],
    "actions": [{"id": "free", "owner": 1, "cost": 0},
                {"id": "step", "owner": 1, "cost": 1}],
    "trans": [["x", "free", "y"], ["y", "step", "z"], ["z", "free", "x"]],
    "init": "x"
  })");
  GameGraph u = unroll_horizon(load_game(doc), 2);
  // Path x@0 -free-> y@0 -step-> z@1 -free-> x@1 -free?-... the counter
  // moves only on `step`, so exactly the two `step` edges fit in budget 2.
  std::set<std::string> ids;
  for (auto& s : u.states) ids.insert(s.id);
  CHECK(ids.count("x@0"));
  CHECK(ids.count("y@0"));
  CHECK(ids.count("z@1"));
  CHECK(ids.count("y@1"));
  CHECK(ids.count("z@2"));
  CHECK(!ids.count("x@2"));
  int path_cost = 0, s = u.init;
  while (!u.is_sink(s)) {
    path_cost += u.actions[u.trans[s][0].first].cost;
    s = u.trans[s][0].second;
  }
  CHECK(path_cost == 2);
}

// --- drone scenario -------------------------------------------------------

static DroneScenarioConfig small_scenario() {
  DroneScenarioConfig c;
  c.width = 3;
  c.height = 3;
  c.packages = {{0, 1}, {2, 0}, {2, 2}};
  c.destinations = {{2, 1}, {0, 0}, {0, 2}};
  c.drone_a = {0, 0};
  c.drone_b = {2, 2};
  c.tmax = 6;
  return c;
}

TEST_CASE("scenario config problems are aggregated") {
  DroneScenarioConfig c = small_scenario();
  c.obstacles = {{0, 1}};       // on package 1
  c.drone_a = {5, 5};           // out of bounds
  try {
    build_drone_scenario(c);
    FAIL("expected a config error");
  } catch (const GameError& e) {
    std::string msg = e.what();
    CHECK(msg.find("scenario config invalid") != std::string::npos);
  }
}

TEST_CASE("scenario config json round-trips") {
  DroneScenarioConfig c = small_scenario();
  c.walls = {{{0, 0}, {0, 1}}};
  c.obstacles = {{1, 1}};
  DroneScenarioConfig c2 = scenario_from_json(scenario_to_json(c));
  CHECK(scenario_to_json(c) == scenario_to_json(c2));
}

TEST_CASE("a zero-budget scenario is a single unlabeled sink") {
  DroneScenarioConfig c = small_scenario();
  c.tmax = 0;
  GameGraph g = build_drone_scenario(c);
  CHECK(g.num_states() == 1);
  CHECK(g.is_sink(0));
  CHECK(g.states[0].label == 0u);
}

TEST_CASE("a delivery is possible exactly when the clock allows it") {
  // Drone A starts one move from package 1 at (0,1) whose destination is
  // (2,1): three unit-cost moves plus an instantaneous pick.  Turns
  // alternate, and B can make at most every other action instantaneous, so
  // at least one B move is forced: the threshold lies in [4, 6].  Delivery
  // feasibility must be monotone in the budget with a sharp threshold.
  auto delivered = [](const GameGraph& g) {
    return bfs_distance(g, [&](int s) { return g.states[s].label & 1u; }) >= 0;
  };
  std::vector<bool> feasible;
  for (int t = 0; t <= 6; ++t) {
    DroneScenarioConfig c = small_scenario();
    c.tmax = t;
    feasible.push_back(delivered(build_drone_scenario(c)));
  }
  CHECK(!feasible[0]);
  CHECK(!feasible[3]);
  CHECK(feasible[6]);
  for (int t = 1; t <= 6; ++t)
    CHECK(feasible[t] >= feasible[t - 1]);  // monotone in the budget
}

TEST_CASE("blocked moves bounce back and still cost time") {
  DroneScenarioConfig c = small_scenario();
  c.tmax = 2;
  GameGraph g = build_drone_scenario(c);
  int a_s = find_action(g, "A_S");  // A at (0,0): south is off-grid
  REQUIRE(a_s >= 0);
  int dst = g.transition(g.init, a_s);
  REQUIRE(dst >= 0);
  // Bounce: same drone positions, but the turn passed to B.
  int a_n = find_action(g, "A_N");
  int moved = g.transition(g.init, a_n);
  CHECK(dst != moved);
  CHECK(g.states[dst].id != g.states[g.init].id);
}

TEST_CASE("walls block movement between adjacent cells") {
  DroneScenarioConfig c = small_scenario();
  c.tmax = 2;
  c.walls = {{{0, 0}, {0, 1}}};
  GameGraph walled = build_drone_scenario(c);
  c.walls.clear();
  GameGraph open = build_drone_scenario(c);
  int a_n = find_action(open, "A_N");
  // With the wall, moving north from (0,0) bounces: the successor equals
  // the bounce successor of a blocked move (same cell, turn flips).
  int a_s = find_action(walled, "A_S");
  CHECK(walled.transition(walled.init, a_n) ==
        walled.transition(walled.init, a_s));
  CHECK(open.transition(open.init, a_n) != open.transition(open.init, a_s));
}

TEST_CASE("an attacked drone can only pass afterwards") {
  DroneScenarioConfig c = small_scenario();
  c.drone_b = {0, 0};  // co-located with A from the start
  c.tmax = 4;
  GameGraph g = build_drone_scenario(c);
  int atk = find_action(g, "A_attack");
  REQUIRE(atk >= 0);
  int s = g.transition(g.init, atk);
  REQUIRE(s >= 0);
  // It is now B's turn and B is disabled: pass is the only enabled action.
  REQUIRE(g.trans[s].size() == 1);
  CHECK(g.actions[g.trans[s][0].first].id == "B_pass");
}

TEST_CASE("handover requires adjacency") {
  DroneScenarioConfig c = small_scenario();
  c.tmax = 4;
  GameGraph g = build_drone_scenario(c);
  // A has nothing to give and B is far away: no give action enabled at init.
  for (auto& [a, d] : g.trans[g.init]) {
    (void)d;
    CHECK(g.actions[a].id.find("give") == std::string::npos);
  }
}

TEST_CASE("scenario graphs stay within the clock bound") {
  DroneScenarioConfig c = small_scenario();
  c.tmax = 3;
  GameGraph g = build_drone_scenario(c);
  // Every maximal path uses at most tmax unit-cost actions; check via the
  // longest cost-weighted path (the graph is a DAG in (clock, flags)).
  std::vector<int> depth(g.num_states(), -1);
  auto longest = [&](auto&& self, int s) -> int {
    if (depth[s] >= 0) return depth[s];
    depth[s] = 0;
    for (auto& [a, d] : g.trans[s])
      depth[s] = std::max(depth[s], g.actions[a].cost + self(self, d));
    return depth[s];
  };
  CHECK(longest(longest, g.init) <= 3);
}
