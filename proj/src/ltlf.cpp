#include "prefgame/ltlf.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <queue>
#include <sstream>
#include <unordered_map>

#include <nlohmann/json.hpp>

namespace prefgame::ltlf {

namespace {

Formula make(Kind k, std::string atom, std::vector<Formula> kids) {
  auto n = std::make_shared<Node>();
  n->kind = k;
  n->atom = std::move(atom);
  n->kids = std::move(kids);
  return n;
}

}  // namespace

Formula f_true() {
  static const Formula t = make(Kind::True, {}, {});
  return t;
}

Formula f_false() {
  static const Formula f = make(Kind::False, {}, {});
  return f;
}

Formula f_atom(std::string name) {
  return make(Kind::Atom, std::move(name), {});
}

Formula f_not(Formula f) {
  if (f->kind == Kind::True) return f_false();
  if (f->kind == Kind::False) return f_true();
  if (f->kind == Kind::Not) return f->kids[0];
  return make(Kind::Not, {}, {std::move(f)});
}

static Formula nary(Kind k, std::vector<Formula> fs) {
  // k is And or Or; `unit` folds away, `zero` absorbs.
  const Formula unit = k == Kind::And ? f_true() : f_false();
  const Formula zero = k == Kind::And ? f_false() : f_true();
  std::vector<Formula> flat;
  for (auto& f : fs) {
    if (f->kind == k) {
      for (auto& c : f->kids) flat.push_back(c);
    } else {
      flat.push_back(std::move(f));
    }
  }
  std::vector<Formula> kept;
  for (auto& f : flat) {
    if (f->kind == zero->kind) return zero;
    if (f->kind == unit->kind) continue;
    kept.push_back(std::move(f));
  }
  std::sort(kept.begin(), kept.end(),
            [](const Formula& a, const Formula& b) { return compare(a, b) < 0; });
  kept.erase(std::unique(kept.begin(), kept.end(),
                         [](const Formula& a, const Formula& b) {
                           return compare(a, b) == 0;
                         }),
             kept.end());
  if (kept.empty()) return unit;
  if (kept.size() == 1) return kept[0];
  return make(k, {}, std::move(kept));
}

Formula f_and(std::vector<Formula> fs) { return nary(Kind::And, std::move(fs)); }
Formula f_or(std::vector<Formula> fs) { return nary(Kind::Or, std::move(fs)); }

Formula f_next(Formula f) { return make(Kind::Next, {}, {std::move(f)}); }

Formula f_until(Formula lhs, Formula rhs) {
  return make(Kind::Until, {}, {std::move(lhs), std::move(rhs)});
}

Formula f_eventually(Formula f) {
  return make(Kind::Eventually, {}, {std::move(f)});
}

Formula f_always(Formula f) { return make(Kind::Always, {}, {std::move(f)}); }

int compare(const Formula& a, const Formula& b) {
  if (a.get() == b.get()) return 0;
  if (a->kind != b->kind)
    return static_cast<int>(a->kind) < static_cast<int>(b->kind) ? -1 : 1;
  if (a->kind == Kind::Atom) return a->atom.compare(b->atom);
  if (a->kids.size() != b->kids.size())
    return a->kids.size() < b->kids.size() ? -1 : 1;
  for (size_t i = 0; i < a->kids.size(); ++i)
    if (int c = compare(a->kids[i], b->kids[i]); c != 0) return c;
  return 0;
}

bool equal(const Formula& a, const Formula& b) { return compare(a, b) == 0; }

namespace {

int prec(Kind k) {
  switch (k) {
    case Kind::Until: return 0;
    case Kind::Or: return 1;
    case Kind::And: return 2;
    default: return 3;
  }
}

void print(std::ostream& os, const Formula& f, int parent_prec) {
  const int p = prec(f->kind);
  const bool paren = p < parent_prec;
  if (paren) os << '(';
  switch (f->kind) {
    case Kind::True: os << "true"; break;
    case Kind::False: os << "false"; break;
    case Kind::Atom: os << f->atom; break;
    case Kind::Not:
      os << '!';
      print(os, f->kids[0], 3);
      break;
    case Kind::Next:
      os << "X ";
      print(os, f->kids[0], 3);
      break;
    case Kind::Eventually:
      os << "F ";
      print(os, f->kids[0], 3);
      break;
    case Kind::Always:
      os << "G ";
      print(os, f->kids[0], 3);
      break;
    case Kind::And:
      for (size_t i = 0; i < f->kids.size(); ++i) {
        if (i) os << " & ";
        print(os, f->kids[i], p + 1);
      }
      break;
    case Kind::Or:
      for (size_t i = 0; i < f->kids.size(); ++i) {
        if (i) os << " | ";
        print(os, f->kids[i], p + 1);
      }
      break;
    case Kind::Until:
      print(os, f->kids[0], p + 1);
      os << " U ";
      print(os, f->kids[1], p + 1);
      break;
  }
  if (paren) os << ')';
}

}  // namespace

std::string to_string(const Formula& f) {
  std::ostringstream os;
  print(os, f, 0);
  return os.str();
}

std::vector<std::string> atoms_of(const Formula& f) {
  std::vector<std::string> out;
  auto walk = [&](auto&& self, const Formula& g) -> void {
    if (g->kind == Kind::Atom) {
      if (std::find(out.begin(), out.end(), g->atom) == out.end())
        out.push_back(g->atom);
      return;
    }
    for (auto& k : g->kids) self(self, k);
  };
  walk(walk, f);
  return out;
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

namespace {

struct Lexer {
  const std::string& text;
  size_t pos = 0;

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos])))
      ++pos;
  }
  bool done() {
    skip_ws();
    return pos >= text.size();
  }
  char peek() {
    skip_ws();
    return pos < text.size() ? text[pos] : '\0';
  }
};

struct Parser {
  Lexer lex;

  explicit Parser(const std::string& t) : lex{t} {}

  [[noreturn]] void fail(const std::string& msg) {
    throw ParseError(msg, lex.pos);
  }

  bool eat(char c) {
    if (lex.peek() == c) {
      ++lex.pos;
      return true;
    }
    return false;
  }

  // Identifier or keyword starting at current position, empty if none.
  std::string peek_word() {
    lex.skip_ws();
    size_t p = lex.pos;
    std::string w;
    while (p < lex.text.size() &&
           (std::isalnum(static_cast<unsigned char>(lex.text[p])) ||
            lex.text[p] == '_'))
      w += lex.text[p++];
    return w;
  }

  void consume_word(const std::string& w) { lex.pos += w.size(); }

  Formula parse_until() {
    Formula left = parse_or();
    std::string w = peek_word();
    if (w == "U") {
      consume_word(w);
      if (lex.done()) fail("syntax error at end of input: missing right operand of U");
      return f_until(std::move(left), parse_until());
    }
    return left;
  }

  Formula parse_or() {
    Formula left = parse_and();
    while (eat('|')) {
      Formula right = parse_and();
      left = f_or({std::move(left), std::move(right)});
    }
    return left;
  }

  Formula parse_and() {
    Formula left = parse_unary();
    while (eat('&')) {
      Formula right = parse_unary();
      left = f_and({std::move(left), std::move(right)});
    }
    return left;
  }

  Formula parse_unary() {
    if (eat('!')) return f_not(parse_unary());
    std::string w = peek_word();
    if (w == "X" || w == "F" || w == "G") {
      consume_word(w);
      Formula sub = parse_unary();
      if (w == "X") return f_next(std::move(sub));
      if (w == "F") return f_eventually(std::move(sub));
      return f_always(std::move(sub));
    }
    return parse_primary();
  }

  Formula parse_primary() {
    if (eat('(')) {
      Formula f = parse_until();
      if (!eat(')')) fail("expected ')'");
      return f;
    }
    if (lex.done()) fail("syntax error at end of input");
    std::string w = peek_word();
    if (w.empty()) fail(std::string("unknown token '") + lex.peek() + "'");
    if (w == "U") fail("unexpected 'U'");
    consume_word(w);
    if (w == "true") return f_true();
    if (w == "false") return f_false();
    return f_atom(w);
  }
};

}  // namespace

Formula parse_ltlf(const std::string& text) {
  Parser p(text);
  Formula f = p.parse_until();
  if (!p.lex.done()) p.fail("trailing input");
  return f;
}

// ---------------------------------------------------------------------------
// Progression
// ---------------------------------------------------------------------------

std::string letter_to_string(Letter l, const std::vector<std::string>& ap) {
  std::string out = "{";
  bool first = true;
  for (size_t i = 0; i < ap.size(); ++i)
    if (l & (Letter{1} << i)) {
      if (!first) out += ",";
      out += ap[i];
      first = false;
    }
  return out + "}";
}

Formula progress(const Formula& f, Letter letter,
                 const std::vector<std::string>& ap) {
  switch (f->kind) {
    case Kind::True:
    case Kind::False:
      return f;
    case Kind::Atom: {
      auto it = std::find(ap.begin(), ap.end(), f->atom);
      if (it == ap.end()) return f_false();
      size_t bit = static_cast<size_t>(it - ap.begin());
      return (letter & (Letter{1} << bit)) ? f_true() : f_false();
    }
    case Kind::Not:
      return f_not(progress(f->kids[0], letter, ap));
    case Kind::And: {
      std::vector<Formula> ks;
      for (auto& k : f->kids) ks.push_back(progress(k, letter, ap));
      return f_and(std::move(ks));
    }
    case Kind::Or: {
      std::vector<Formula> ks;
      for (auto& k : f->kids) ks.push_back(progress(k, letter, ap));
      return f_or(std::move(ks));
    }
    case Kind::Next:
      return f->kids[0];
    case Kind::Until:
      return f_or({progress(f->kids[1], letter, ap),
                   f_and({progress(f->kids[0], letter, ap), f})});
    case Kind::Eventually:
      return f_or({progress(f->kids[0], letter, ap), f});
    case Kind::Always:
      return f_and({progress(f->kids[0], letter, ap), f});
  }
  return f_false();  // unreachable
}

bool eval_empty(const Formula& f) {
  switch (f->kind) {
    case Kind::True: return true;
    case Kind::False: return false;
    case Kind::Atom: return false;
    case Kind::Not: return !eval_empty(f->kids[0]);
    case Kind::And:
      for (auto& k : f->kids)
        if (!eval_empty(k)) return false;
      return true;
    case Kind::Or:
      for (auto& k : f->kids)
        if (eval_empty(k)) return true;
      return false;
    case Kind::Next: return false;
    case Kind::Until: return eval_empty(f->kids[1]);
    case Kind::Eventually: return eval_empty(f->kids[0]);
    case Kind::Always: return true;
  }
  return false;
}

// ---------------------------------------------------------------------------
// DFA construction
// ---------------------------------------------------------------------------

namespace {

// Non-boolean subformulas treated as opaque propositions when deciding
// whether two residuals are propositionally equivalent.
void collect_props(const Formula& f, std::vector<Formula>& props) {
  switch (f->kind) {
    case Kind::True:
    case Kind::False:
      return;
    case Kind::Not:
    case Kind::And:
    case Kind::Or:
      for (auto& k : f->kids) collect_props(k, props);
      return;
    default:
      for (auto& p : props)
        if (equal(p, f)) return;
      props.push_back(f);
  }
}

bool eval_assignment(const Formula& f, const std::vector<Formula>& props,
                     uint32_t assignment) {
  switch (f->kind) {
    case Kind::True: return true;
    case Kind::False: return false;
    case Kind::Not: return !eval_assignment(f->kids[0], props, assignment);
    case Kind::And:
      for (auto& k : f->kids)
        if (!eval_assignment(k, props, assignment)) return false;
      return true;
    case Kind::Or:
      for (auto& k : f->kids)
        if (eval_assignment(k, props, assignment)) return true;
      return false;
    default:
      for (size_t i = 0; i < props.size(); ++i)
        if (equal(props[i], f)) return (assignment >> i) & 1u;
      return false;  // unreachable: every prop was collected
  }
}

// Key identifying the propositional equivalence class of a residual.
std::string semantic_key(const Formula& f) {
  std::vector<Formula> props;
  collect_props(f, props);
  std::sort(props.begin(), props.end(),
            [](const Formula& a, const Formula& b) { return compare(a, b) < 0; });
  if (props.size() > 16) return "struct:" + to_string(f);
  std::string key;
  for (auto& p : props) key += to_string(p) + ";";
  key += "|";
  const uint32_t n = 1u << props.size();
  for (uint32_t a = 0; a < n; ++a)
    key += eval_assignment(f, props, a) ? '1' : '0';
  return key;
}

// Relabels states in BFS order from the initial state; output is unique for
// a given machine, keeping exports byte-stable.
Dfa canonical_order(const Dfa& d) {
  std::vector<int> order(d.num_states, -1);
  std::vector<int> bfs;
  order[d.initial] = 0;
  bfs.push_back(d.initial);
  for (size_t i = 0; i < bfs.size(); ++i)
    for (int l = 0; l < d.num_letters(); ++l) {
      int t = d.step(bfs[i], l);
      if (order[t] < 0) {
        order[t] = static_cast<int>(bfs.size());
        bfs.push_back(t);
      }
    }
  Dfa out;
  out.ap = d.ap;
  out.num_states = static_cast<int>(bfs.size());
  out.initial = 0;
  out.accepting.assign(out.num_states, 0);
  out.delta.assign(out.num_states * d.num_letters(), 0);
  for (int q = 0; q < d.num_states; ++q) {
    if (order[q] < 0) continue;  // unreachable
    out.accepting[order[q]] = d.accepting[q];
    for (int l = 0; l < d.num_letters(); ++l)
      out.delta[order[q] * d.num_letters() + l] = order[d.step(q, l)];
  }
  return out;
}

}  // namespace

Dfa minimize(const Dfa& d) {
  // Moore refinement: split by acceptance, then by successor blocks.
  std::vector<int> block(d.num_states);
  for (int q = 0; q < d.num_states; ++q) block[q] = d.accepting[q] ? 1 : 0;
  int num_blocks = 2;
  for (;;) {
    std::map<std::vector<int>, int> sig_to_block;
    std::vector<int> next(d.num_states);
    for (int q = 0; q < d.num_states; ++q) {
      std::vector<int> sig;
      sig.reserve(d.num_letters() + 1);
      sig.push_back(block[q]);
      for (int l = 0; l < d.num_letters(); ++l)
        sig.push_back(block[d.step(q, l)]);
      auto [it, inserted] =
          sig_to_block.emplace(std::move(sig), static_cast<int>(sig_to_block.size()));
      next[q] = it->second;
    }
    int n = static_cast<int>(sig_to_block.size());
    bool stable = (n == num_blocks);
    block = std::move(next);
    num_blocks = n;
    if (stable) break;
  }
  Dfa out;
  out.ap = d.ap;
  out.num_states = num_blocks;
  out.initial = block[d.initial];
  out.accepting.assign(num_blocks, 0);
  out.delta.assign(num_blocks * d.num_letters(), 0);
  for (int q = 0; q < d.num_states; ++q) {
    out.accepting[block[q]] = d.accepting[q];
    for (int l = 0; l < d.num_letters(); ++l)
      out.delta[block[q] * d.num_letters() + l] = block[d.step(q, l)];
  }
  return canonical_order(out);
}

Dfa ltlf_to_dfa(const Formula& f, const std::vector<std::string>& ap,
                int max_states) {
  Dfa d;
  d.ap = ap;
  const int nl = d.num_letters();

  std::unordered_map<std::string, int> key_to_state;
  std::vector<Formula> residuals;

  auto intern = [&](const Formula& g) {
    std::string key = semantic_key(g);
    auto it = key_to_state.find(key);
    if (it != key_to_state.end()) return it->second;
    int id = static_cast<int>(residuals.size());
    if (id >= max_states)
      throw CapacityError("ltlf_to_dfa: state bound of " +
                          std::to_string(max_states) + " exceeded");
    key_to_state.emplace(std::move(key), id);
    residuals.push_back(g);
    d.accepting.push_back(eval_empty(g) ? 1 : 0);
    d.delta.resize((id + 1) * nl, -1);
    return id;
  };

  d.initial = intern(f);
  for (size_t q = 0; q < residuals.size(); ++q)
    for (int l = 0; l < nl; ++l) {
      Formula next = progress(residuals[q], static_cast<Letter>(l), ap);
      d.delta[q * nl + l] = intern(next);
    }
  d.num_states = static_cast<int>(residuals.size());
  return minimize(d);
}

bool dfa_accepts(const Dfa& d, const Word& w) {
  int q = d.initial;
  for (Letter l : w) q = d.step(q, l);
  return d.accepting[q] != 0;
}

std::string dfa_to_dot(const Dfa& d) {
  std::ostringstream os;
  os << "digraph dfa {\n  rankdir=LR;\n  init [shape=point];\n";
  for (int q = 0; q < d.num_states; ++q)
    os << "  q" << q << " [shape=" << (d.accepting[q] ? "doublecircle" : "circle")
       << " label=\"" << q << "\"];\n";
  os << "  init -> q" << d.initial << ";\n";
  for (int q = 0; q < d.num_states; ++q) {
    std::map<int, std::string> by_target;
    for (int l = 0; l < d.num_letters(); ++l) {
      int t = d.step(q, l);
      std::string& lbl = by_target[t];
      if (!lbl.empty()) lbl += " | ";
      lbl += letter_to_string(static_cast<Letter>(l), d.ap);
    }
    for (auto& [t, lbl] : by_target)
      os << "  q" << q << " -> q" << t << " [label=\"" << lbl << "\"];\n";
  }
  os << "}\n";
  return os.str();
}

nlohmann::json dfa_to_json(const Dfa& d) {
  nlohmann::json j;
  j["ap"] = d.ap;
  j["states"] = d.num_states;
  j["initial"] = d.initial;
  std::vector<int> acc;
  for (int q = 0; q < d.num_states; ++q)
    if (d.accepting[q]) acc.push_back(q);
  j["accepting"] = acc;
  nlohmann::json delta = nlohmann::json::array();
  for (int q = 0; q < d.num_states; ++q)
    for (int l = 0; l < d.num_letters(); ++l)
      delta.push_back({q, l, d.step(q, l)});
  j["delta"] = delta;
  return j;
}

}  // namespace prefgame::ltlf
