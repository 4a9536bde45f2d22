#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "prefgame/ltlf.hpp"
#include "prefgame/preorder.hpp"

namespace prefgame::pref {

enum class ConstraintOp {
  WeakPref,    // >=
  StrictPref,  // >
  Indiff,      // ~
  Incomp,      // <>
};

struct Constraint {
  ConstraintOp op;
  int lhs;
  int rhs;
};

/// A preference specification: an ordered list of LTLf alternatives and a
/// list of atomic constraints between them (by index).
struct PrefSpec {
  std::vector<ltlf::Formula> alternatives;
  std::vector<Constraint> constraints;
};

struct SpecError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InconsistencyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Text format: line 1 `prefltlf <N>`, then N formula lines (0-indexed),
/// then constraint lines `<op> <i> <j>` with op in {>=, >, ~, <>}.
/// `#` starts a comment.
PrefSpec parse_prefspec(const std::string& text);

std::string constraint_to_string(const Constraint& c);

/// Where the synthetic "nothing satisfied" outcome sits relative to the
/// alternatives.
enum class EmptyPolicy { Bottom, Top, Incomparable };

EmptyPolicy parse_empty_policy(const std::string& name);

/// Index of the synthetic bottom element in the closed order.
inline int bottom_index(const PrefSpec& s) {
  return static_cast<int>(s.alternatives.size());
}

/// Expands the constraints into a preorder over alternative indices plus
/// the synthetic bottom element (carrier size N+1).  Strictness and
/// incomparability constraints are re-checked after transitive closure;
/// a violated constraint raises InconsistencyError naming it.
Preorder close_constraints(const PrefSpec& s, EmptyPolicy policy);

/// Synchronous product of the alternatives' DFAs, keeping acceptance per
/// component as a satisfaction map instead of a single accepting set.
struct SemiAutomaton {
  std::vector<std::string> ap;
  int num_states = 0;
  int initial = 0;
  std::vector<int> delta;             // q * num_letters() + letter -> q'
  std::vector<std::vector<int>> sat;  // per state, sorted alternative indices
  int num_alternatives = 0;

  int num_letters() const { return 1 << static_cast<int>(ap.size()); }
  int step(int q, ltlf::Letter l) const { return delta[q * num_letters() + l]; }
  int run(const ltlf::Word& w) const {
    int q = initial;
    for (ltlf::Letter l : w) q = step(q, l);
    return q;
  }
};

using SemiAutomatonPtr = std::shared_ptr<const SemiAutomaton>;

SemiAutomatonPtr build_semi_automaton(const std::vector<ltlf::Formula>& alternatives,
                                      const std::vector<std::string>& ap,
                                      int max_states = 100000);

/// The shared semi-automaton plus one player's preorder on its states.
struct PreferenceAutomaton {
  SemiAutomatonPtr semi;
  Preorder order;  // on semi->num_states
};

/// Derives the state preorder from the closed constraint order: q is weakly
/// preferred to q' iff every maximal satisfied alternative of q' is weakly
/// below some maximal satisfied alternative of q (an empty satisfaction set
/// stands for the bottom element).  The result is checked to be a preorder.
PreferenceAutomaton attach_preorder(SemiAutomatonPtr semi, const PrefSpec& s,
                                    EmptyPolicy policy);

PreferenceAutomaton build_preference_automaton(const PrefSpec& s,
                                               const std::vector<std::string>& ap,
                                               EmptyPolicy policy,
                                               int max_states = 100000);

enum class WordComparison {
  StrictlyPreferred,     // first word better
  StrictlyDispreferred,  // second word better
  Indifferent,
  Incomparable,
};

std::string to_string(WordComparison c);

WordComparison compare_words(const PreferenceAutomaton& p, const ltlf::Word& w,
                             const ltlf::Word& w2);

/// Condensation of the state preorder: nodes are indifference classes, an
/// edge X -> Y means Y's states are strictly preferred to X's.  Transitive
/// edges are pruned.
struct PreferenceGraph {
  std::vector<std::vector<int>> classes;   // sorted states per class
  std::vector<int> state_class;            // state -> class index
  std::vector<std::pair<int, int>> edges;  // (lower class, higher class)
};

PreferenceGraph preference_graph(const PreferenceAutomaton& p);

std::string preference_automaton_to_dot(const PreferenceAutomaton& p);
nlohmann::json preference_automaton_to_json(const PreferenceAutomaton& p);

}  // namespace prefgame::pref
