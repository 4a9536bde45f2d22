#pragma once

#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "prefgame/game.hpp"

namespace prefgame::game {

struct Cell {
  int x = 0;
  int y = 0;
  bool operator==(const Cell&) const = default;
  bool operator<(const Cell& o) const { return x < o.x || (x == o.x && y < o.y); }
};

/// Two-drone gridworld delivery scenario.  Drone A is player 1 and moves
/// first; three packages must travel from their pickup cells to their
/// destination cells.
struct DroneScenarioConfig {
  int width = 5;
  int height = 5;
  std::vector<std::pair<Cell, Cell>> walls;  // blocked adjacent cell pairs
  std::vector<Cell> obstacles;
  std::vector<Cell> packages;      // pickup cells p1..p3
  std::vector<Cell> destinations;  // d1..d3
  Cell drone_a;
  Cell drone_b;
  int tmax = 10;
};

DroneScenarioConfig scenario_from_json(const nlohmann::json& doc);
nlohmann::json scenario_to_json(const DroneScenarioConfig& c);

/// Builds the turn-based game: move actions (N/E/S/W) bounce off walls,
/// grid edges and obstacles and cost one time unit; pick, give_i and
/// attack are instantaneous; each drone may take at most one instantaneous
/// action between moves; an attacked drone is permanently disabled and can
/// only pass (cost 1).  States at clock tmax are sinks.  Proposition d_i
/// holds once package i sits at destination i.
GameGraph build_drone_scenario(const DroneScenarioConfig& c);

}  // namespace prefgame::game
