#include "prefgame/game.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

namespace prefgame::game {

int GameGraph::transition(int s, int a) const {
  for (auto& [act, dst] : trans[s])
    if (act == a) return dst;
  return -1;
}

GameGraph load_game(const nlohmann::json& doc) {
  std::vector<std::string> errors;
  auto err = [&](std::string m) { errors.push_back(std::move(m)); };

  GameGraph g;
  if (!doc.is_object()) throw GameError("game document must be a JSON object");
  for (const char* key : {"ap", "states", "actions", "trans", "init"})
    if (!doc.contains(key)) err(std::string("missing field '") + key + "'");
  if (!errors.empty()) throw GameError("schema error: " + errors[0]);

  g.ap = doc.at("ap").get<std::vector<std::string>>();
  std::map<std::string, int> state_index, action_index;

  for (const auto& js : doc.at("states")) {
    GameGraph::State s;
    s.id = js.at("id").get<std::string>();
    s.owner = js.at("owner").get<int>();
    if (s.owner != 1 && s.owner != 2)
      err("state '" + s.id + "': owner must be 1 or 2");
    if (state_index.count(s.id)) err("duplicate state id '" + s.id + "'");
    for (const auto& name : js.value("label", std::vector<std::string>{})) {
      auto it = std::find(g.ap.begin(), g.ap.end(), name);
      if (it == g.ap.end())
        err("state '" + s.id + "': unknown proposition '" + name + "'");
      else
        s.label |= 1u << (it - g.ap.begin());
    }
    state_index[s.id] = static_cast<int>(g.states.size());
    g.states.push_back(std::move(s));
  }

  for (const auto& ja : doc.at("actions")) {
    GameGraph::Action a;
    a.id = ja.at("id").get<std::string>();
    a.owner = ja.at("owner").get<int>();
    a.cost = ja.value("cost", 1);
    if (a.owner != 1 && a.owner != 2)
      err("action '" + a.id + "': owner must be 1 or 2");
    if (a.cost != 0 && a.cost != 1)
      err("action '" + a.id + "': cost must be 0 or 1");
    if (action_index.count(a.id)) err("duplicate action id '" + a.id + "'");
    action_index[a.id] = static_cast<int>(g.actions.size());
    g.actions.push_back(std::move(a));
  }

  g.trans.resize(g.states.size());
  for (const auto& jt : doc.at("trans")) {
    if (!jt.is_array() || jt.size() != 3) {
      err("transition entries must be [src, action, dst] triples");
      continue;
    }
    std::string src = jt[0].get<std::string>();
    std::string act = jt[1].get<std::string>();
    std::string dst = jt[2].get<std::string>();
    auto si = state_index.find(src);
    auto ai = action_index.find(act);
    auto di = state_index.find(dst);
    if (si == state_index.end()) err("dangling state reference '" + src + "'");
    if (ai == action_index.end()) err("dangling action reference '" + act + "'");
    if (di == state_index.end()) err("dangling state reference '" + dst + "'");
    if (si == state_index.end() || ai == action_index.end() ||
        di == state_index.end())
      continue;
    int s = si->second, a = ai->second;
    if (g.states[s].owner != g.actions[a].owner)
      err("owner violation: P" + std::to_string(g.states[s].owner) + " state '" +
          src + "' uses P" + std::to_string(g.actions[a].owner) + " action '" +
          act + "'");
    if (g.transition(s, a) >= 0)
      err("nondeterministic transition at ('" + src + "', '" + act + "')");
    else
      g.trans[s].push_back({a, di->second});
  }
  for (auto& row : g.trans) std::sort(row.begin(), row.end());

  if (doc.contains("init")) {
    std::string init = doc.at("init").get<std::string>();
    auto it = state_index.find(init);
    if (it == state_index.end())
      err("dangling state reference '" + init + "' in init");
    else
      g.init = it->second;
  }

  if (!errors.empty()) {
    std::ostringstream os;
    os << errors.size() << " validation error(s):";
    for (auto& e : errors) os << "\n  - " << e;
    throw GameError(os.str());
  }
  return g;
}

nlohmann::json game_to_json(const GameGraph& g) {
  nlohmann::json j;
  j["ap"] = g.ap;
  j["states"] = nlohmann::json::array();
  for (const auto& s : g.states) {
    std::vector<std::string> label;
    for (size_t i = 0; i < g.ap.size(); ++i)
      if (s.label & (1u << i)) label.push_back(g.ap[i]);
    j["states"].push_back({{"id", s.id}, {"owner", s.owner}, {"label", label}});
  }
  j["actions"] = nlohmann::json::array();
  for (const auto& a : g.actions)
    j["actions"].push_back({{"id", a.id}, {"owner", a.owner}, {"cost", a.cost}});
  j["trans"] = nlohmann::json::array();
  for (int s = 0; s < g.num_states(); ++s)
    for (auto& [a, d] : g.trans[s])
      j["trans"].push_back({g.states[s].id, g.actions[a].id, g.states[d].id});
  j["init"] = g.states[g.init].id;
  return j;
}

GameGraph unroll_horizon(const GameGraph& g, int horizon) {
  GameGraph out;
  out.ap = g.ap;
  out.actions = g.actions;

  std::map<std::pair<int, int>, int> index;  // (state, counter) -> new state
  std::vector<std::pair<int, int>> work;
  auto intern = [&](int s, int t) {
    auto it = index.find({s, t});
    if (it != index.end()) return it->second;
    int id = static_cast<int>(out.states.size());
    index[{s, t}] = id;
    GameGraph::State st = g.states[s];
    st.id += "@" + std::to_string(t);
    out.states.push_back(std::move(st));
    out.trans.emplace_back();
    work.push_back({s, t});
    return id;
  };

  out.init = intern(g.init, 0);
  for (size_t w = 0; w < work.size(); ++w) {
    auto [s, t] = work[w];
    int id = index[{s, t}];
    if (t >= horizon) continue;  // horizon states are sinks
    for (auto& [a, dst] : g.trans[s]) {
      int succ = intern(dst, t + g.actions[a].cost);  // may grow out.trans
      out.trans[id].push_back({a, succ});
    }
    std::sort(out.trans[id].begin(), out.trans[id].end());
  }
  return out;
}

}  // namespace prefgame::game
