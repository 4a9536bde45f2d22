#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace prefgame::ltlf {

enum class Kind {
  True,
  False,
  Atom,
  Not,
  And,
  Or,
  Next,
  Until,
  Eventually,
  Always,
};

struct Node;
/// Immutable formula tree.  Shared subtrees are fine; nodes are never
/// mutated after construction.
using Formula = std::shared_ptr<const Node>;

struct Node {
  Kind kind;
  std::string atom;            // Kind::Atom only
  std::vector<Formula> kids;   // arity per kind
};

// Smart constructors.  And/Or flatten, constant-fold, deduplicate and sort
// their operands; Not folds constants and double negation.  All other
// shapes are kept as written.
Formula f_true();
Formula f_false();
Formula f_atom(std::string name);
Formula f_not(Formula f);
Formula f_and(std::vector<Formula> fs);
Formula f_or(std::vector<Formula> fs);
Formula f_next(Formula f);
Formula f_until(Formula lhs, Formula rhs);
Formula f_eventually(Formula f);
Formula f_always(Formula f);

/// Structural total order (kind, then atom name, then children).
int compare(const Formula& a, const Formula& b);
bool equal(const Formula& a, const Formula& b);

std::string to_string(const Formula& f);

/// Collects atom names in first-occurrence order.
std::vector<std::string> atoms_of(const Formula& f);

struct ParseError : std::runtime_error {
  ParseError(const std::string& msg, size_t position)
      : std::runtime_error(msg + " (at position " + std::to_string(position) +
                           ")"),
        pos(position) {}
  size_t pos;
};

/// Concrete syntax, loosest to tightest: U; |; &; unary ! X F G; atoms,
/// `true`, `false`, parentheses.  U is right-associative.
Formula parse_ltlf(const std::string& text);

/// A letter is a subset of the declared AP list, encoded as a bitmask over
/// its index order.
using Letter = uint32_t;
using Word = std::vector<Letter>;

std::string letter_to_string(Letter l, const std::vector<std::string>& ap);

/// Residual of f after consuming one letter.  Atoms not listed in `ap`
/// evaluate as absent.
Formula progress(const Formula& f, Letter letter,
                 const std::vector<std::string>& ap);

/// Truth of f on the empty word: atoms and Next are false, Until defers to
/// its right operand, Always is true.
bool eval_empty(const Formula& f);

struct CapacityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Dfa {
  std::vector<std::string> ap;
  int num_states = 0;
  int initial = 0;
  std::vector<uint8_t> accepting;  // indexed by state
  std::vector<int> delta;          // state * num_letters() + letter -> state

  int num_letters() const { return 1 << static_cast<int>(ap.size()); }
  int step(int q, Letter l) const { return delta[q * num_letters() + l]; }
};

/// Compiles f over the ordered AP set into a minimal complete DFA.  States
/// are residual formulas of f under progression, merged up to
/// propositional equivalence, then minimized by partition refinement.
Dfa ltlf_to_dfa(const Formula& f, const std::vector<std::string>& ap,
                int max_states = 100000);

/// Extended transition from the initial state; empty word accepted iff the
/// initial state is accepting.
bool dfa_accepts(const Dfa& d, const Word& w);

/// Moore partition refinement; exposed so language preservation can be
/// checked against the unminimized automaton.
Dfa minimize(const Dfa& d);

std::string dfa_to_dot(const Dfa& d);
nlohmann::json dfa_to_json(const Dfa& d);

}  // namespace prefgame::ltlf
