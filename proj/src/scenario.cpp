#include "prefgame/scenario.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <nlohmann/json.hpp>

namespace prefgame::game {

namespace {

Cell cell_from_json(const nlohmann::json& j) {
  return Cell{j.at(0).get<int>(), j.at(1).get<int>()};
}

nlohmann::json cell_to_json(const Cell& c) { return {c.x, c.y}; }

// Packed scenario state.
struct Pos {
  uint64_t pos_a : 6;
  uint64_t pos_b : 6;
  uint64_t turn : 1;      // 0 = A
  uint64_t carrier : 6;   // 2 bits per package: 0 source, 1 A, 2 B, 3 done
  uint64_t alive_a : 1;
  uint64_t alive_b : 1;
  uint64_t flag_a : 1;    // instantaneous action taken since last move
  uint64_t flag_b : 1;
  uint64_t clock : 7;
};

uint64_t pack(const Pos& p) {
  uint64_t k = 0;
  k |= p.pos_a;
  k |= p.pos_b << 6;
  k |= p.turn << 12;
  k |= p.carrier << 13;
  k |= p.alive_a << 19;
  k |= p.alive_b << 20;
  k |= p.flag_a << 21;
  k |= p.flag_b << 22;
  k |= p.clock << 23;
  return k;
}

Pos unpack(uint64_t k) {
  Pos p{};
  p.pos_a = k & 63;
  p.pos_b = (k >> 6) & 63;
  p.turn = (k >> 12) & 1;
  p.carrier = (k >> 13) & 63;
  p.alive_a = (k >> 19) & 1;
  p.alive_b = (k >> 20) & 1;
  p.flag_a = (k >> 21) & 1;
  p.flag_b = (k >> 22) & 1;
  p.clock = (k >> 23) & 127;
  return p;
}

int carrier_of(const Pos& p, int i) { return (p.carrier >> (2 * i)) & 3; }

void set_carrier(Pos& p, int i, int who) {
  p.carrier = (p.carrier & ~(uint64_t{3} << (2 * i))) |
              (uint64_t(who) << (2 * i));
}

constexpr int kAtSource = 0, kHeldA = 1, kHeldB = 2, kDelivered = 3;

}  // namespace

DroneScenarioConfig scenario_from_json(const nlohmann::json& doc) {
  DroneScenarioConfig c;
  c.width = doc.at("width").get<int>();
  c.height = doc.at("height").get<int>();
  for (const auto& w : doc.value("walls", nlohmann::json::array()))
    c.walls.push_back({cell_from_json(w.at(0)), cell_from_json(w.at(1))});
  for (const auto& o : doc.value("obstacles", nlohmann::json::array()))
    c.obstacles.push_back(cell_from_json(o));
  for (const auto& p : doc.at("packages")) c.packages.push_back(cell_from_json(p));
  for (const auto& d : doc.at("destinations"))
    c.destinations.push_back(cell_from_json(d));
  c.drone_a = cell_from_json(doc.at("droneA"));
  c.drone_b = cell_from_json(doc.at("droneB"));
  c.tmax = doc.at("tmax").get<int>();
  return c;
}

nlohmann::json scenario_to_json(const DroneScenarioConfig& c) {
  nlohmann::json j;
  j["width"] = c.width;
  j["height"] = c.height;
  j["walls"] = nlohmann::json::array();
  for (auto& [u, v] : c.walls)
    j["walls"].push_back({cell_to_json(u), cell_to_json(v)});
  j["obstacles"] = nlohmann::json::array();
  for (auto& o : c.obstacles) j["obstacles"].push_back(cell_to_json(o));
  j["packages"] = nlohmann::json::array();
  for (auto& p : c.packages) j["packages"].push_back(cell_to_json(p));
  j["destinations"] = nlohmann::json::array();
  for (auto& d : c.destinations) j["destinations"].push_back(cell_to_json(d));
  j["droneA"] = cell_to_json(c.drone_a);
  j["droneB"] = cell_to_json(c.drone_b);
  j["tmax"] = c.tmax;
  return j;
}

GameGraph build_drone_scenario(const DroneScenarioConfig& c) {
  std::vector<std::string> errors;
  auto in_grid = [&](const Cell& p) {
    return p.x >= 0 && p.x < c.width && p.y >= 0 && p.y < c.height;
  };
  auto check_cell = [&](const Cell& p, const std::string& what) {
    if (!in_grid(p))
      errors.push_back(what + " (" + std::to_string(p.x) + "," +
                       std::to_string(p.y) + ") outside grid");
  };
  if (c.width <= 0 || c.height <= 0 || c.width * c.height > 64)
    errors.push_back("grid must be between 1x1 and 64 cells");
  if (c.tmax < 0 || c.tmax > 127) errors.push_back("tmax must be in [0, 127]");
  if (c.packages.size() != 3 || c.destinations.size() != 3)
    errors.push_back("exactly three packages and three destinations required");
  for (auto& o : c.obstacles) check_cell(o, "obstacle");
  check_cell(c.drone_a, "drone A start");
  check_cell(c.drone_b, "drone B start");
  auto on_obstacle = [&](const Cell& p) {
    return std::find(c.obstacles.begin(), c.obstacles.end(), p) !=
           c.obstacles.end();
  };
  for (size_t i = 0; i < c.packages.size() && i < 3; ++i) {
    check_cell(c.packages[i], "package " + std::to_string(i + 1));
    if (on_obstacle(c.packages[i]))
      errors.push_back("package " + std::to_string(i + 1) + " on an obstacle");
  }
  for (size_t i = 0; i < c.destinations.size() && i < 3; ++i) {
    check_cell(c.destinations[i], "destination " + std::to_string(i + 1));
    if (on_obstacle(c.destinations[i]))
      errors.push_back("destination " + std::to_string(i + 1) + " on an obstacle");
    if (i < c.packages.size() && c.packages[i] == c.destinations[i])
      errors.push_back("package " + std::to_string(i + 1) +
                       " starts on its own destination");
  }
  if (on_obstacle(c.drone_a)) errors.push_back("drone A starts on an obstacle");
  if (on_obstacle(c.drone_b)) errors.push_back("drone B starts on an obstacle");
  for (auto& [u, v] : c.walls) {
    check_cell(u, "wall endpoint");
    check_cell(v, "wall endpoint");
    if (std::abs(u.x - v.x) + std::abs(u.y - v.y) != 1)
      errors.push_back("wall endpoints must be orthogonally adjacent");
  }
  if (!errors.empty()) {
    std::ostringstream os;
    os << "scenario config invalid:";
    for (auto& e : errors) os << "\n  - " << e;
    throw GameError(os.str());
  }

  auto cell_id = [&](const Cell& p) { return p.y * c.width + p.x; };
  auto cell_at = [&](int id) { return Cell{id % c.width, id / c.width}; };

  std::unordered_set<uint64_t> wall_set;
  auto wall_key = [&](int u, int v) {
    if (u > v) std::swap(u, v);
    return (uint64_t(u) << 32) | uint64_t(v);
  };
  for (auto& [u, v] : c.walls) wall_set.insert(wall_key(cell_id(u), cell_id(v)));

  // Bouncy movement: a blocked move keeps the drone in place.
  auto move_to = [&](int from, int dx, int dy) {
    Cell src = cell_at(from);
    Cell dst{src.x + dx, src.y + dy};
    if (!in_grid(dst) || on_obstacle(dst)) return from;
    if (wall_set.count(wall_key(from, cell_id(dst)))) return from;
    return cell_id(dst);
  };

  GameGraph g;
  g.ap = {"d1", "d2", "d3"};
  struct ActDef {
    std::string name;
    int cost;
  };
  const std::vector<ActDef> defs = {
      {"N", 1},    {"E", 1},     {"S", 1},     {"W", 1},     {"pass", 1},
      {"pick", 0}, {"give1", 0}, {"give2", 0}, {"give3", 0}, {"attack", 0}};
  for (int drone = 0; drone < 2; ++drone)
    for (const auto& d : defs)
      g.actions.push_back(
          {std::string(drone == 0 ? "A_" : "B_") + d.name, drone + 1, d.cost});
  auto action_id = [&](int drone, int slot) { return drone * 10 + slot; };

  auto deliver = [&](Pos& p) {
    for (int i = 0; i < 3; ++i) {
      int who = carrier_of(p, i);
      if (who == kHeldA && int(p.pos_a) == cell_id(c.destinations[i]))
        set_carrier(p, i, kDelivered);
      if (who == kHeldB && int(p.pos_b) == cell_id(c.destinations[i]))
        set_carrier(p, i, kDelivered);
    }
  };
  auto label_of = [&](const Pos& p) {
    uint32_t l = 0;
    for (int i = 0; i < 3; ++i)
      if (carrier_of(p, i) == kDelivered) l |= 1u << i;
    return l;
  };

  std::unordered_map<uint64_t, int> index;
  std::vector<uint64_t> keys;
  auto intern = [&](Pos p) {
    deliver(p);
    uint64_t k = pack(p);
    auto it = index.find(k);
    if (it != index.end()) return it->second;
    int id = static_cast<int>(keys.size());
    index.emplace(k, id);
    keys.push_back(k);
    g.states.push_back({std::to_string(k), int(p.turn) + 1, label_of(p)});
    g.trans.emplace_back();
    return id;
  };

  Pos init{};
  init.pos_a = cell_id(c.drone_a);
  init.pos_b = cell_id(c.drone_b);
  init.alive_a = init.alive_b = 1;
  g.init = intern(init);

  const int dx[] = {0, 1, 0, -1};
  const int dy[] = {1, 0, -1, 0};  // N, E, S, W

  for (size_t w = 0; w < keys.size(); ++w) {
    Pos p = unpack(keys[w]);
    if (int(p.clock) >= c.tmax) continue;  // time is up: sink
    const bool is_a = p.turn == 0;
    const bool alive = is_a ? p.alive_a : p.alive_b;
    const bool flag = is_a ? p.flag_a : p.flag_b;
    const int me = is_a ? p.pos_a : p.pos_b;
    const int other = is_a ? p.pos_b : p.pos_a;
    const int held = is_a ? kHeldA : kHeldB;
    const int drone = is_a ? 0 : 1;

    std::vector<std::pair<int, Pos>> moves;  // (action slot, successor)
    auto after_timed = [&](Pos q) {
      q.clock = p.clock + 1;
      q.turn = 1 - p.turn;
      if (is_a) q.flag_a = 0; else q.flag_b = 0;
      return q;
    };
    auto after_instant = [&](Pos q) {
      q.turn = 1 - p.turn;
      if (is_a) q.flag_a = 1; else q.flag_b = 1;
      return q;
    };

    if (!alive) {
      moves.push_back({4, after_timed(p)});
    } else {
      for (int dir = 0; dir < 4; ++dir) {
        Pos q = p;
        int dst = move_to(me, dx[dir], dy[dir]);
        if (is_a) q.pos_a = dst; else q.pos_b = dst;
        moves.push_back({dir, after_timed(q)});
      }
      moves.push_back({4, after_timed(p)});
      if (!flag) {
        bool can_pick = false;
        for (int i = 0; i < 3; ++i)
          if (carrier_of(p, i) == kAtSource && cell_id(c.packages[i]) == me)
            can_pick = true;
        if (can_pick) {
          Pos q = p;
          for (int i = 0; i < 3; ++i)
            if (carrier_of(q, i) == kAtSource && cell_id(c.packages[i]) == me)
              set_carrier(q, i, held);
          moves.push_back({5, after_instant(q)});
        }
        Cell mc = cell_at(me), oc = cell_at(other);
        bool near = std::abs(mc.x - oc.x) <= 1 && std::abs(mc.y - oc.y) <= 1;
        if (near)
          for (int i = 0; i < 3; ++i)
            if (carrier_of(p, i) == held) {
              Pos q = p;
              set_carrier(q, i, is_a ? kHeldB : kHeldA);
              moves.push_back({6 + i, after_instant(q)});
            }
        bool other_alive = is_a ? p.alive_b : p.alive_a;
        if (me == other && other_alive) {
          Pos q = p;
          if (is_a) q.alive_b = 0; else q.alive_a = 0;
          moves.push_back({9, after_instant(q)});
        }
      }
    }
    for (auto& [slot, q] : moves) {
      int succ = intern(q);  // may grow g.trans
      g.trans[w].push_back({action_id(drone, slot), succ});
    }
    std::sort(g.trans[w].begin(), g.trans[w].end());
  }
  return g;
}

}  // namespace prefgame::game
