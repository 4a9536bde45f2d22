#include "prefgame/preference.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <unordered_map>

#include <nlohmann/json.hpp>

namespace prefgame::pref {

namespace {

const char* op_name(ConstraintOp op) {
  switch (op) {
    case ConstraintOp::WeakPref: return ">=";
    case ConstraintOp::StrictPref: return ">";
    case ConstraintOp::Indiff: return "~";
    case ConstraintOp::Incomp: return "<>";
  }
  return "?";
}

}  // namespace

std::string constraint_to_string(const Constraint& c) {
  std::ostringstream os;
  os << "phi" << c.lhs << " " << op_name(c.op) << " phi" << c.rhs;
  return os.str();
}

PrefSpec parse_prefspec(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  auto next_line = [&](std::string& out) {
    while (std::getline(in, line)) {
      ++lineno;
      if (auto hash = line.find('#'); hash != std::string::npos)
        line.erase(hash);
      while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back())))
        line.pop_back();
      size_t start = 0;
      while (start < line.size() && std::isspace(static_cast<unsigned char>(line[start])))
        ++start;
      if (start == line.size()) continue;
      out = line.substr(start);
      return true;
    }
    return false;
  };

  std::string cur;
  if (!next_line(cur)) throw SpecError("empty prefspec");
  std::istringstream header(cur);
  std::string magic;
  int n = -1;
  header >> magic >> n;
  if (magic != "prefltlf" || n < 0)
    throw SpecError("line " + std::to_string(lineno) +
                    ": expected header 'prefltlf <N>'");

  PrefSpec spec;
  for (int i = 0; i < n; ++i) {
    if (!next_line(cur))
      throw SpecError("expected " + std::to_string(n) + " formulas, got " +
                      std::to_string(i));
    try {
      spec.alternatives.push_back(ltlf::parse_ltlf(cur));
    } catch (const ltlf::ParseError& e) {
      throw SpecError("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  while (next_line(cur)) {
    std::istringstream cs(cur);
    std::string op;
    int i = -1, j = -1;
    cs >> op >> i >> j;
    std::string rest;
    if (cs.fail() || (cs >> rest))
      throw SpecError("line " + std::to_string(lineno) +
                      ": expected '<op> <i> <j>', got '" + cur + "'");
    Constraint c;
    if (op == ">=") c.op = ConstraintOp::WeakPref;
    else if (op == ">") c.op = ConstraintOp::StrictPref;
    else if (op == "~") c.op = ConstraintOp::Indiff;
    else if (op == "<>") c.op = ConstraintOp::Incomp;
    else
      throw SpecError("line " + std::to_string(lineno) + ": unknown operator '" +
                      op + "'");
    if (i < 0 || i >= n || j < 0 || j >= n)
      throw SpecError("line " + std::to_string(lineno) + ": index out of range (" +
                      std::to_string(i) + ", " + std::to_string(j) + ") with " +
                      std::to_string(n) + " formulas");
    if (i == j && (c.op == ConstraintOp::StrictPref || c.op == ConstraintOp::Incomp))
      throw SpecError("line " + std::to_string(lineno) + ": '" + op +
                      "' requires distinct formulas");
    c.lhs = i;
    c.rhs = j;
    spec.constraints.push_back(c);
  }
  return spec;
}

EmptyPolicy parse_empty_policy(const std::string& name) {
  if (name == "bottom") return EmptyPolicy::Bottom;
  if (name == "top") return EmptyPolicy::Top;
  if (name == "incomparable") return EmptyPolicy::Incomparable;
  throw SpecError("unknown empty policy '" + name + "'");
}

Preorder close_constraints(const PrefSpec& s, EmptyPolicy policy) {
  const int n = static_cast<int>(s.alternatives.size());
  const int bot = n;
  Preorder order(n + 1);
  order.make_reflexive();

  // (pair forbidden as membership, description of source constraint)
  std::vector<std::pair<std::pair<int, int>, std::string>> exclusions;
  for (const Constraint& c : s.constraints) {
    switch (c.op) {
      case ConstraintOp::WeakPref:
        order.add(c.lhs, c.rhs);
        break;
      case ConstraintOp::StrictPref:
        order.add(c.lhs, c.rhs);
        exclusions.push_back({{c.rhs, c.lhs}, constraint_to_string(c)});
        break;
      case ConstraintOp::Indiff:
        order.add(c.lhs, c.rhs);
        order.add(c.rhs, c.lhs);
        break;
      case ConstraintOp::Incomp:
        exclusions.push_back({{c.lhs, c.rhs}, constraint_to_string(c)});
        exclusions.push_back({{c.rhs, c.lhs}, constraint_to_string(c)});
        break;
    }
  }
  switch (policy) {
    case EmptyPolicy::Bottom:
      for (int i = 0; i < n; ++i) {
        order.add(i, bot);
        exclusions.push_back({{bot, i}, "empty-policy bottom"});
      }
      break;
    case EmptyPolicy::Top:
      for (int i = 0; i < n; ++i) {
        order.add(bot, i);
        exclusions.push_back({{i, bot}, "empty-policy top"});
      }
      break;
    case EmptyPolicy::Incomparable:
      break;
  }
  order.transitive_closure();
  for (auto& [pair, source] : exclusions)
    if (order.geq(pair.first, pair.second))
      throw InconsistencyError(
          "inconsistent preference specification: closure forces phi" +
          std::to_string(pair.first) + " >= phi" + std::to_string(pair.second) +
          ", violating " + source);
  return order;
}

SemiAutomatonPtr build_semi_automaton(const std::vector<ltlf::Formula>& alternatives,
                                      const std::vector<std::string>& ap,
                                      int max_states) {
  std::vector<ltlf::Dfa> dfas;
  dfas.reserve(alternatives.size());
  for (auto& f : alternatives) dfas.push_back(ltlf::ltlf_to_dfa(f, ap, max_states));

  auto semi = std::make_shared<SemiAutomaton>();
  semi->ap = ap;
  semi->num_alternatives = static_cast<int>(alternatives.size());
  const int nl = semi->num_letters();

  std::map<std::vector<int>, int> tuple_to_state;
  std::vector<std::vector<int>> tuples;
  auto intern = [&](std::vector<int> tuple) {
    auto it = tuple_to_state.find(tuple);
    if (it != tuple_to_state.end()) return it->second;
    int id = static_cast<int>(tuples.size());
    if (id >= max_states)
      throw ltlf::CapacityError("semi-automaton state bound of " +
                                std::to_string(max_states) + " exceeded");
    tuple_to_state.emplace(tuple, id);
    tuples.push_back(std::move(tuple));
    return id;
  };

  std::vector<int> init(alternatives.size());
  for (size_t i = 0; i < dfas.size(); ++i) init[i] = dfas[i].initial;
  semi->initial = intern(std::move(init));

  for (size_t q = 0; q < tuples.size(); ++q) {
    semi->delta.resize((q + 1) * nl);
    for (int l = 0; l < nl; ++l) {
      std::vector<int> next(tuples[q].size());
      for (size_t i = 0; i < dfas.size(); ++i)
        next[i] = dfas[i].step(tuples[q][i], static_cast<ltlf::Letter>(l));
      semi->delta[q * nl + l] = intern(std::move(next));
    }
  }
  semi->num_states = static_cast<int>(tuples.size());
  semi->sat.resize(semi->num_states);
  for (int q = 0; q < semi->num_states; ++q)
    for (size_t i = 0; i < dfas.size(); ++i)
      if (dfas[i].accepting[tuples[q][i]])
        semi->sat[q].push_back(static_cast<int>(i));
  return semi;
}

PreferenceAutomaton attach_preorder(SemiAutomatonPtr semi, const PrefSpec& s,
                                    EmptyPolicy policy) {
  Preorder closed = close_constraints(s, policy);
  const int bot = bottom_index(s);

  // Maximal satisfied alternatives per state, with {bottom} for empty sets.
  std::vector<std::vector<int>> max_sat(semi->num_states);
  for (int q = 0; q < semi->num_states; ++q) {
    if (semi->sat[q].empty())
      max_sat[q] = {bot};
    else
      max_sat[q] = maximal(semi->sat[q], closed);
  }

  PreferenceAutomaton p;
  p.semi = std::move(semi);
  p.order = Preorder(p.semi->num_states);
  for (int q = 0; q < p.semi->num_states; ++q)
    for (int r = 0; r < p.semi->num_states; ++r) {
      bool covers = true;
      for (int j : max_sat[r]) {
        bool found = false;
        for (int i : max_sat[q])
          if (closed.geq(i, j)) {
            found = true;
            break;
          }
        if (!found) {
          covers = false;
          break;
        }
      }
      if (covers) p.order.add(q, r);
    }
  if (!p.order.is_reflexive() || !p.order.is_transitive())
    throw std::logic_error(
        "derived state preorder is not a preorder; constraint closure broken");
  return p;
}

PreferenceAutomaton build_preference_automaton(const PrefSpec& s,
                                               const std::vector<std::string>& ap,
                                               EmptyPolicy policy, int max_states) {
  close_constraints(s, policy);  // surface inconsistencies before compiling
  return attach_preorder(build_semi_automaton(s.alternatives, ap, max_states), s,
                         policy);
}

std::string to_string(WordComparison c) {
  switch (c) {
    case WordComparison::StrictlyPreferred: return "strictly_preferred";
    case WordComparison::StrictlyDispreferred: return "strictly_dispreferred";
    case WordComparison::Indifferent: return "indifferent";
    case WordComparison::Incomparable: return "incomparable";
  }
  return "?";
}

WordComparison compare_words(const PreferenceAutomaton& p, const ltlf::Word& w,
                             const ltlf::Word& w2) {
  int q = p.semi->run(w);
  int r = p.semi->run(w2);
  bool fwd = p.order.geq(q, r);
  bool bwd = p.order.geq(r, q);
  if (fwd && !bwd) return WordComparison::StrictlyPreferred;
  if (!fwd && bwd) return WordComparison::StrictlyDispreferred;
  if (fwd && bwd) return WordComparison::Indifferent;
  return WordComparison::Incomparable;
}

PreferenceGraph preference_graph(const PreferenceAutomaton& p) {
  const int n = p.semi->num_states;
  PreferenceGraph g;
  g.state_class.assign(n, -1);
  for (int q = 0; q < n; ++q) {
    if (g.state_class[q] >= 0) continue;
    int cls = static_cast<int>(g.classes.size());
    g.classes.push_back({});
    for (int r = 0; r < n; ++r)
      if (p.order.indifferent(q, r)) {
        g.state_class[r] = cls;
        g.classes[cls].push_back(r);
      }
  }
  const int nc = static_cast<int>(g.classes.size());
  auto strictly_above = [&](int lo, int hi) {
    return p.order.gt(g.classes[hi][0], g.classes[lo][0]);
  };
  for (int x = 0; x < nc; ++x)
    for (int y = 0; y < nc; ++y) {
      if (x == y || !strictly_above(x, y)) continue;
      bool transitive = false;
      for (int z = 0; z < nc && !transitive; ++z)
        if (z != x && z != y && strictly_above(x, z) && strictly_above(z, y))
          transitive = true;
      if (!transitive) g.edges.push_back({x, y});
    }
  std::sort(g.edges.begin(), g.edges.end());
  return g;
}

std::string preference_automaton_to_dot(const PreferenceAutomaton& p) {
  std::ostringstream os;
  const SemiAutomaton& a = *p.semi;
  os << "digraph semi_automaton {\n  rankdir=LR;\n  init [shape=point];\n";
  for (int q = 0; q < a.num_states; ++q) {
    os << "  q" << q << " [shape=circle label=\"" << q << "\" tooltip=\"sat={";
    for (size_t i = 0; i < a.sat[q].size(); ++i)
      os << (i ? "," : "") << a.sat[q][i];
    os << "}\"];\n";
  }
  os << "  init -> q" << a.initial << ";\n";
  for (int q = 0; q < a.num_states; ++q) {
    std::map<int, std::string> by_target;
    for (int l = 0; l < a.num_letters(); ++l) {
      int t = a.step(q, static_cast<ltlf::Letter>(l));
      std::string& lbl = by_target[t];
      if (!lbl.empty()) lbl += " | ";
      lbl += ltlf::letter_to_string(static_cast<ltlf::Letter>(l), a.ap);
    }
    for (auto& [t, lbl] : by_target)
      os << "  q" << q << " -> q" << t << " [label=\"" << lbl << "\"];\n";
  }
  os << "}\n";

  PreferenceGraph g = preference_graph(p);
  os << "digraph preference_graph {\n";
  for (size_t c = 0; c < g.classes.size(); ++c) {
    os << "  c" << c << " [shape=box label=\"{";
    for (size_t i = 0; i < g.classes[c].size(); ++i)
      os << (i ? "," : "") << g.classes[c][i];
    os << "}\"];\n";
  }
  for (auto& [x, y] : g.edges) os << "  c" << x << " -> c" << y << ";\n";
  os << "}\n";
  return os.str();
}

nlohmann::json preference_automaton_to_json(const PreferenceAutomaton& p) {
  const SemiAutomaton& a = *p.semi;
  nlohmann::json j;
  j["ap"] = a.ap;
  j["states"] = a.num_states;
  j["initial"] = a.initial;
  nlohmann::json delta = nlohmann::json::array();
  for (int q = 0; q < a.num_states; ++q)
    for (int l = 0; l < a.num_letters(); ++l)
      delta.push_back({q, l, a.step(q, static_cast<ltlf::Letter>(l))});
  j["delta"] = delta;
  j["sat"] = a.sat;
  nlohmann::json pairs = nlohmann::json::array();
  for (int q = 0; q < a.num_states; ++q)
    for (int r = 0; r < a.num_states; ++r)
      if (p.order.geq(q, r)) pairs.push_back({q, r});
  j["preorder"] = pairs;
  return j;
}

}  // namespace prefgame::pref
