#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "prefgame/product.hpp"

namespace prefgame::solve {

struct SolveError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A characterization was invoked outside its alignment class.
struct WrongClassError : SolveError {
  using SolveError::SolveError;
};

/// Neither player needs cooperation yet no sink attains both minimum ranks;
/// the characterization is silent here, so we refuse to guess.
struct EmptyOutcomeError : SolveError {
  using SolveError::SolveError;
};

enum class Alignment { FullyAligned, CompletelyOpposite, PartiallyAligned };
std::string to_string(Alignment a);

enum class Attitude { Cooperative, Agnostic };
Attitude parse_attitude(const std::string& name);

/// Memoryless strategy on a product game: per vertex, the sorted enabled
/// actions the player allows.  Empty at sinks, at opponent states, and at
/// states the strategy does not cover.  Deterministic = one action each.
struct Strategy {
  int player = 1;
  std::vector<std::vector<int>> act;  // indexed by product vertex

  bool covers(int v) const { return !act[v].empty(); }
};

struct NashReport {
  Alignment alignment{};
  std::string case_tag;  // which characterization produced the set
  std::array<int, 2> k_star{};  // guaranteed levels (maximal sure winning)
  std::array<int, 2> m{};       // best cooperative rank over outcomes
  std::array<bool, 2> needs{};  // needs-cooperation flags
  std::optional<std::array<bool, 2>> incentives;
  std::vector<int> outcomes;  // equilibrium outcome sinks, ascending
  Strategy w1, w2;            // deterministic witness profile
  Strategy perm1, perm2;      // permissive strategies backing the case, if any
  std::vector<int> pareto;
};

/// Least fixed point: the set from which `player` can force termination in
/// `target` (a subset of sinks), with the region-preserving permissive
/// strategy at the player's states inside the region.
std::pair<std::vector<int>, Strategy> attractor(const prod::ProductGame& h,
                                                int player,
                                                const std::vector<int>& target);

/// Sure-winning region for terminating at a sink of rank <= k.
std::vector<int> swin(const prod::ProductGame& h, int player, int k);

/// Smallest k whose sure-winning region contains the initial vertex, with
/// the permissive strategy keeping exactly the value-preserving actions at
/// the player's states reachable under the restriction.
std::pair<int, Strategy> max_sure_winning(const prod::ProductGame& h,
                                          int player);

/// Backward induction: sinks carry their rank, the player minimizes,
/// the opponent maximizes.
std::vector<int> value_map(const prod::ProductGame& h, int player);

Alignment classify_alignment(const prod::ProductGame& h,
                             bool strict_opposite = false);

NashReport nash_aligned(const prod::ProductGame& h);
NashReport nash_opposite(const prod::ProductGame& h);

/// True iff the player's guaranteed level is strictly worse than its best
/// rank over reachable sinks.
bool needs_cooperation(const prod::ProductGame& h, int player);

/// The sub-game where `restricted_player` keeps only the actions some
/// maximal sure winning strategy of theirs plays (value-preserving rule),
/// with unreachable vertices pruned.  Rank values carry over from h.
prod::ProductGame restricted_game(const prod::ProductGame& h,
                                  int restricted_player = 2);

/// Reachable sinks beaten by no reachable sink in either player's rank;
/// may be empty.
std::vector<int> pareto_states(const prod::ProductGame& h);

/// Per-player instrumental incentive to cooperate; requires a nonempty
/// Pareto set.
std::array<bool, 2> incentive_to_cooperate(const prod::ProductGame& h);

NashReport nash_partial(const prod::ProductGame& h, Attitude attitude1,
                        Attitude attitude2);

NashReport solve(const prod::ProductGame& h,
                 Attitude attitude1 = Attitude::Agnostic,
                 Attitude attitude2 = Attitude::Agnostic,
                 bool strict_opposite = false);

struct CheckResult {
  bool nash = false;
  std::string explanation;
};

/// Tests a deterministic profile against the characterization that solve
/// selects for h; the explanation names the violated clause when false.
CheckResult check_nash(const prod::ProductGame& h, const Strategy& p1,
                       const Strategy& p2,
                       Attitude attitude1 = Attitude::Agnostic,
                       Attitude attitude2 = Attitude::Agnostic,
                       bool strict_opposite = false);

/// Play of a deterministic profile from the initial vertex; returns the
/// vertex path ending at a sink.
std::vector<int> play_profile(const prod::ProductGame& h, const Strategy& p1,
                              const Strategy& p2);

nlohmann::json strategy_to_json(const prod::ProductGame& h, const Strategy& s);
Strategy strategy_from_json(const prod::ProductGame& h, const nlohmann::json& j);
nlohmann::json nash_report_to_json(const prod::ProductGame& h,
                                   const NashReport& r);
/// Product graph with equilibrium outcomes highlighted and the backing
/// permissive-strategy edges marked.
std::string nash_report_to_dot(const prod::ProductGame& h, const NashReport& r);

}  // namespace prefgame::solve
