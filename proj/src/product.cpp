#include "prefgame/product.hpp"

#include <algorithm>
#include <sstream>

#include <nlohmann/json.hpp>

namespace prefgame::prod {

int ProductGame::transition(int v, int a) const {
  for (auto& [act, dst] : trans[v])
    if (act == a) return dst;
  return -1;
}

int ProductGame::vertex_index(int s, int q) const {
  auto it = index.find({s, q});
  return it == index.end() ? -1 : it->second;
}

std::string ProductGame::vertex_id(int v) const {
  return "(" + g.states[vs[v]].id + "," + std::to_string(vq[v]) + ")";
}

void finalize_product(ProductGame& h) {
  const int n = h.num_vertices();
  h.sinks.clear();
  for (int v = 0; v < n; ++v)
    if (h.trans[v].empty()) h.sinks.push_back(v);

  // Iterative DFS: topological sort plus sink-avoiding-cycle detection.
  h.topo.clear();
  std::vector<int> color(n, 0);  // 0 white, 1 on stack, 2 done
  std::vector<int> parent(n, -1);
  std::vector<std::pair<int, size_t>> stack;
  for (int root = 0; root < n; ++root) {
    if (color[root] != 0) continue;
    stack.push_back({root, 0});
    color[root] = 1;
    while (!stack.empty()) {
      auto& [v, i] = stack.back();
      if (i < h.trans[v].size()) {
        int w = h.trans[v][i++].second;
        if (color[w] == 0) {
          color[w] = 1;
          parent[w] = v;
          stack.push_back({w, 0});
        } else if (color[w] == 1) {
          std::vector<int> cycle{w};
          for (int u = v; u != w; u = parent[u]) cycle.push_back(u);
          std::reverse(cycle.begin() + 1, cycle.end());
          std::ostringstream os;
          os << "product is not sink-terminating; witness cycle:";
          for (int u : cycle) os << " " << h.vertex_id(u);
          throw NonTerminatingError(os.str(), cycle);
        }
      } else {
        color[v] = 2;
        h.topo.push_back(v);
        stack.pop_back();
      }
    }
  }
  std::reverse(h.topo.begin(), h.topo.end());

  // Ranks of the automaton states actually present; the lifted rank map on
  // V peels the same layers, so the per-q ranks transfer directly.
  std::vector<int> present(h.vq);
  std::sort(present.begin(), present.end());
  present.erase(std::unique(present.begin(), present.end()), present.end());
  RankMap r1 = rank_map_subset(present, h.e1);
  RankMap r2 = rank_map_subset(present, h.e2);
  h.rank1.resize(n);
  h.rank2.resize(n);
  for (int v = 0; v < n; ++v) {
    h.rank1[v] = r1.rank[h.vq[v]];
    h.rank2[v] = r2.rank[h.vq[v]];
  }
  h.k1max = r1.kmax;
  h.k2max = r2.kmax;
}

namespace {

bool same_semi(const pref::SemiAutomaton& a, const pref::SemiAutomaton& b) {
  return a.ap == b.ap && a.num_states == b.num_states &&
         a.initial == b.initial && a.delta == b.delta && a.sat == b.sat;
}

}  // namespace

ProductGame build_product(const game::GameGraph& g,
                          const pref::PreferenceAutomaton& p1,
                          const pref::PreferenceAutomaton& p2) {
  if (p1.semi != p2.semi && !same_semi(*p1.semi, *p2.semi))
    throw MismatchError("players' preference automata must share one semi-automaton");
  if (g.ap != p1.semi->ap)
    throw MismatchError("game and semi-automaton disagree on the AP set");

  ProductGame h;
  h.g = g;
  h.semi = p1.semi;
  h.e1 = p1.order;
  h.e2 = p2.order;

  auto intern = [&](int s, int q) {
    auto it = h.index.find({s, q});
    if (it != h.index.end()) return it->second;
    int v = h.num_vertices();
    h.index[{s, q}] = v;
    h.vs.push_back(s);
    h.vq.push_back(q);
    h.trans.emplace_back();
    return v;
  };

  // Def. 6: the initial state's label is consumed immediately.
  h.init = intern(g.init, h.semi->step(h.semi->initial, g.states[g.init].label));
  for (int v = 0; v < h.num_vertices(); ++v) {
    int s = h.vs[v], q = h.vq[v];
    for (auto& [a, s2] : g.trans[s]) {
      int succ = intern(s2, h.semi->step(q, g.states[s2].label));  // may grow h.trans
      h.trans[v].push_back({a, succ});
    }
  }

  finalize_product(h);
  return h;
}

Preorder lifted_preorder(const ProductGame& h, int player) {
  const Preorder& e = player == 1 ? h.e1 : h.e2;
  Preorder out(h.num_vertices());
  for (int v = 0; v < h.num_vertices(); ++v)
    for (int w = 0; w < h.num_vertices(); ++w)
      if (e.geq(h.vq[v], h.vq[w])) out.add(v, w);
  return out;
}

std::vector<int> trace_lift(const ProductGame& h, const std::vector<int>& path) {
  if (path.empty()) throw ProductError("trace_lift: empty path");
  if (path[0] != h.g.init)
    throw ProductError("trace_lift: path must start at the initial game state");
  for (size_t i = 0; i + 1 < path.size(); ++i) {
    bool ok = false;
    for (auto& [a, dst] : h.g.trans[path[i]]) ok |= dst == path[i + 1];
    if (!ok)
      throw ProductError("trace_lift: no transition from '" +
                         h.g.states[path[i]].id + "' to '" +
                         h.g.states[path[i + 1]].id + "'");
  }
  std::vector<int> out;
  int q = h.semi->step(h.semi->initial, h.g.states[path[0]].label);
  out.push_back(h.vertex_index(path[0], q));
  for (size_t i = 1; i < path.size(); ++i) {
    q = h.semi->step(q, h.g.states[path[i]].label);
    out.push_back(h.vertex_index(path[i], q));
  }
  return out;
}

const std::vector<int>& reachable_sinks(const ProductGame& h) { return h.sinks; }

std::string product_to_dot(const ProductGame& h) {
  std::ostringstream os;
  os << "digraph product {\n  rankdir=LR;\n";
  for (int v = 0; v < h.num_vertices(); ++v) {
    os << "  n" << v << " [label=\"" << h.vertex_id(v) << "\" shape="
       << (h.owner(v) == 1 ? "box" : "ellipse")
       << (h.is_sink(v) ? " peripheries=2" : "") << " tooltip=\"owner=P"
       << h.owner(v) << " q=" << h.vq[v] << " rank1=" << h.rank1[v]
       << " rank2=" << h.rank2[v] << (h.is_sink(v) ? " sink" : "") << "\"];\n";
  }
  os << "  init [shape=point];\n  init -> n" << h.init << ";\n";
  for (int v = 0; v < h.num_vertices(); ++v)
    for (auto& [a, w] : h.trans[v])
      os << "  n" << v << " -> n" << w << " [label=\"" << h.g.actions[a].id
         << "\"];\n";
  os << "}\n";
  return os.str();
}

nlohmann::json product_to_json(const ProductGame& h) {
  nlohmann::json j;
  j["ap"] = h.g.ap;
  j["states"] = nlohmann::json::array();
  for (int v = 0; v < h.num_vertices(); ++v)
    j["states"].push_back({{"id", h.vertex_id(v)},
                           {"game_state", h.g.states[h.vs[v]].id},
                           {"automaton_state", h.vq[v]},
                           {"owner", h.owner(v)},
                           {"rank1", h.rank1[v]},
                           {"rank2", h.rank2[v]},
                           {"sink", h.is_sink(v)}});
  j["init"] = h.init;
  j["trans"] = nlohmann::json::array();
  for (int v = 0; v < h.num_vertices(); ++v)
    for (auto& [a, w] : h.trans[v])
      j["trans"].push_back({v, h.g.actions[a].id, w});
  j["k1max"] = h.k1max;
  j["k2max"] = h.k2max;
  j["sinks"] = h.sinks;
  return j;
}

}  // namespace prefgame::prod
