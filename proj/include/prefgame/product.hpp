#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "prefgame/game.hpp"
#include "prefgame/preference.hpp"
#include "prefgame/preorder.hpp"

namespace prefgame::prod {

struct ProductError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// The two players' preference automata do not share a semi-automaton (or
/// the game's AP set disagrees with it).
struct MismatchError : ProductError {
  using ProductError::ProductError;
};

/// A reachable cycle avoids all sinks; `cycle` lists the offending vertex
/// indices in order.
struct NonTerminatingError : ProductError {
  NonTerminatingError(const std::string& msg, std::vector<int> witness)
      : ProductError(msg), cycle(std::move(witness)) {}
  std::vector<int> cycle;
};

/// Product of a game graph with the shared semi-automaton.  Only the part
/// reachable from the initial vertex is materialized; construction fails if
/// that part is not sink-terminating.  Immutable once built.
struct ProductGame {
  game::GameGraph g;
  pref::SemiAutomatonPtr semi;  // may be null for synthetic instances
  Preorder e1, e2;              // players' preorders on automaton states

  std::vector<int> vs, vq;  // per vertex: game state / automaton state
  std::vector<std::vector<std::pair<int, int>>> trans;  // sorted (action, vertex)
  int init = 0;

  // Filled by finalize_product.
  std::vector<int> rank1, rank2;  // per vertex
  int k1max = 0, k2max = 0;
  std::vector<int> sinks;  // ascending vertex indices
  std::vector<int> topo;   // topological order, init first

  int num_vertices() const { return static_cast<int>(vs.size()); }
  int owner(int v) const { return g.states[vs[v]].owner; }
  bool is_sink(int v) const { return trans[v].empty(); }
  int rank(int player, int v) const { return player == 1 ? rank1[v] : rank2[v]; }
  /// Lifted weak preference: compares automaton components only.
  bool geq(int player, int v, int w) const {
    return (player == 1 ? e1 : e2).geq(vq[v], vq[w]);
  }
  /// -1 when the action is not enabled at v.
  int transition(int v, int a) const;
  int vertex_index(int s, int q) const;  // -1 if not materialized
  std::string vertex_id(int v) const;

  std::map<std::pair<int, int>, int> index;  // (s, q) -> vertex
};

/// Computes sinks, topological order and both rank maps; throws
/// NonTerminatingError on a sink-avoiding cycle.  Exposed so synthetic
/// products assembled in tests go through the same validation.
void finalize_product(ProductGame& h);

ProductGame build_product(const game::GameGraph& g,
                          const pref::PreferenceAutomaton& p1,
                          const pref::PreferenceAutomaton& p2);

/// The player's preorder lifted to product vertices (ignores the game
/// component).  Quadratic; intended for cross-checks.
Preorder lifted_preorder(const ProductGame& h, int player);

/// Lifts a path of game states (starting at the game's initial state and
/// respecting T) to the unique product trace.
std::vector<int> trace_lift(const ProductGame& h, const std::vector<int>& path);

/// Every materialized vertex is reachable, so this is just the sink set:
/// exactly the possible outcomes of strategy-profile plays.
const std::vector<int>& reachable_sinks(const ProductGame& h);

std::string product_to_dot(const ProductGame& h);
nlohmann::json product_to_json(const ProductGame& h);

}  // namespace prefgame::prod
