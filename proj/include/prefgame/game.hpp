#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace prefgame::game {

struct GameError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Deterministic two-player turn-based game graph.  States and actions are
/// owned by exactly one player; only the owner's actions are enabled at a
/// state.  A state with no outgoing transitions is a sink.
struct GameGraph {
  struct State {
    std::string id;
    int owner = 1;       // 1 or 2
    uint32_t label = 0;  // bitmask over ap
  };
  struct Action {
    std::string id;
    int owner = 1;
    int cost = 1;  // 0 = instantaneous, 1 = advances a horizon counter
  };

  std::vector<std::string> ap;
  std::vector<State> states;
  std::vector<Action> actions;
  /// Per state, sorted by action index: (action, destination).
  std::vector<std::vector<std::pair<int, int>>> trans;
  int init = 0;

  int num_states() const { return static_cast<int>(states.size()); }
  /// -1 when T is undefined at (s, a).
  int transition(int s, int a) const;
  bool is_sink(int s) const { return trans[s].empty(); }
};

/// Parses and validates the game JSON document; all invariant violations
/// found in one pass are reported together in the error message.
GameGraph load_game(const nlohmann::json& doc);

nlohmann::json game_to_json(const GameGraph& g);

/// Pairs every state with a counter 0..T that advances on cost-1 actions.
/// States at counter T lose all outgoing transitions and become sinks.
GameGraph unroll_horizon(const GameGraph& g, int horizon);

}  // namespace prefgame::game
