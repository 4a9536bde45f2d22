#include <doctest.h>

#include <random>
#include <vector>

#include "prefgame/ltlf.hpp"
#include "support.hpp"

using namespace prefgame::ltlf;
using testsup::sem_eval;

namespace {

/// All words of length <= max_len over an alphabet of 2^num_ap letters.
std::vector<Word> all_words(int num_ap, int max_len) {
  std::vector<Word> out{{}};
  std::vector<Word> frontier{{}};
  for (int len = 1; len <= max_len; ++len) {
    std::vector<Word> next;
    for (const Word& w : frontier)
      for (Letter l = 0; l < (1u << num_ap); ++l) {
        Word w2 = w;
        w2.push_back(l);
        next.push_back(w2);
      }
    out.insert(out.end(), next.begin(), next.end());
    frontier = std::move(next);
  }
  return out;
}

}  // namespace

TEST_CASE("parser handles derived operators and precedence") {
  Formula f = parse_ltlf("F d1");
  REQUIRE(f->kind == Kind::Eventually);
  CHECK(f->kids[0]->kind == Kind::Atom);
  CHECK(f->kids[0]->atom == "d1");

  Formula g = parse_ltlf("(!d1 & !d3) U d2");
  REQUIRE(g->kind == Kind::Until);
  CHECK(g->kids[0]->kind == Kind::And);
  CHECK(g->kids[1]->kind == Kind::Atom);
  CHECK(g->kids[1]->atom == "d2");

  // & binds tighter than |, unary tightest.
  Formula h = parse_ltlf("a | b & c");
  CHECK(h->kind == Kind::Or);
  // U binds loosest.
  Formula u = parse_ltlf("a & b U c");
  CHECK(u->kind == Kind::Until);
}

TEST_CASE("parser rejects malformed input with a position") {
  CHECK_THROWS_AS(parse_ltlf("d1 U"), ParseError);
  CHECK_THROWS_AS(parse_ltlf("(a & b"), ParseError);
  CHECK_THROWS_AS(parse_ltlf("a ? b"), ParseError);
}

TEST_CASE("pretty printer round-trips") {
  std::mt19937 rng(424242);
  std::vector<std::string> ap{"a", "b", "c"};
  for (int i = 0; i < 200; ++i) {
    Formula f = testsup::random_formula(rng, ap, 4);
    Formula g = parse_ltlf(to_string(f));
    CHECK(equal(f, g));
  }
}

TEST_CASE("progression consumes one letter") {
  std::vector<std::string> ap{"a", "b"};
  Formula fa = f_eventually(f_atom("a"));
  CHECK(equal(progress(fa, 0b01, ap), f_true()));   // goal met now
  CHECK(equal(progress(fa, 0b00, ap), fa));          // no progress
  Formula u = f_until(f_atom("b"), f_atom("a"));
  CHECK(equal(progress(u, 0b10, ap), u));            // b holds, a pending
}

TEST_CASE("progression agrees with positional semantics") {
  // For nonempty w = l . w': w satisfies f iff w' satisfies progress(f, l).
  std::mt19937 rng(99);
  std::vector<std::string> ap{"a", "b"};
  for (int i = 0; i < 500; ++i) {
    Formula f = testsup::random_formula(rng, ap, 3);
    Word w = testsup::random_word(rng, 2, 4);
    if (w.empty()) w.push_back(static_cast<Letter>(rng() % 4));
    Word rest(w.begin() + 1, w.end());
    CHECK(sem_eval(f, w, ap) == sem_eval(progress(f, w[0], ap), rest, ap));
  }
}

TEST_CASE("eval on the empty word follows the no-more-positions rules") {
  CHECK(eval_empty(f_true()));
  CHECK(!eval_empty(f_atom("a")));
  CHECK(!eval_empty(f_next(f_true())));
  CHECK(eval_empty(f_always(f_atom("a"))));
  CHECK(!eval_empty(f_eventually(f_atom("a"))));
  CHECK(eval_empty(f_until(f_atom("a"), f_true())));
}

TEST_CASE("eventually compiles to the expected two-state recognizer") {
  std::vector<std::string> ap{"a"};
  Dfa d = ltlf_to_dfa(f_eventually(f_atom("a")), ap);
  CHECK(d.num_states == 2);
  CHECK(dfa_accepts(d, {0, 0, 1}));
  CHECK(!dfa_accepts(d, {0, 0}));
}

TEST_CASE("constant true compiles to a single accepting state") {
  Dfa d = ltlf_to_dfa(f_true(), {"a"});
  CHECK(d.num_states == 1);
  CHECK(dfa_accepts(d, {}));
  CHECK(dfa_accepts(d, {1, 0, 1}));
}

TEST_CASE("always distinguishes a broken run") {
  std::vector<std::string> ap{"a"};
  Dfa d = ltlf_to_dfa(f_always(f_atom("a")), ap);
  CHECK(dfa_accepts(d, {1, 1}));
  CHECK(!dfa_accepts(d, {1, 0}));
}

TEST_CASE("empty word acceptance equals the initial state's flag") {
  std::mt19937 rng(5);
  std::vector<std::string> ap{"a", "b"};
  for (int i = 0; i < 50; ++i) {
    Dfa d = ltlf_to_dfa(testsup::random_formula(rng, ap, 3), ap);
    CHECK(dfa_accepts(d, {}) == static_cast<bool>(d.accepting[d.initial]));
  }
}

TEST_CASE("compiled automata match positional semantics on short words") {
  std::mt19937 rng(20240601);
  std::vector<std::string> ap{"a", "b", "c"};
  auto words = all_words(3, 4);
  for (int i = 0; i < 150; ++i) {
    Formula f = testsup::random_formula(rng, ap, 4);
    Dfa d = ltlf_to_dfa(f, ap);
    for (const Word& w : words)
      CHECK(dfa_accepts(d, w) == sem_eval(f, w, ap));
  }
}

TEST_CASE("minimization preserves the language and never grows") {
  std::mt19937 rng(31337);
  std::vector<std::string> ap{"a", "b"};
  auto words = all_words(2, 5);
  for (int i = 0; i < 60; ++i) {
    Formula f = testsup::random_formula(rng, ap, 4);
    Dfa d = ltlf_to_dfa(f, ap);
    Dfa m = minimize(d);
    CHECK(m.num_states <= d.num_states);
    for (const Word& w : words) CHECK(dfa_accepts(d, w) == dfa_accepts(m, w));
  }
}

TEST_CASE("state capacity bound is enforced") {
  std::vector<std::string> ap{"a"};
  // A conjunction of staggered Next chains needs more than two states.
  Formula f = f_and({f_next(f_next(f_atom("a"))), f_eventually(f_atom("a"))});
  CHECK_THROWS_AS(ltlf_to_dfa(f, ap, 2), CapacityError);
}
