#include "prefgame/solve.hpp"

#include <algorithm>
#include <climits>
#include <sstream>

#include <nlohmann/json.hpp>

namespace prefgame::solve {

namespace {

using prod::ProductGame;

/// A sub-arena: per vertex, the allowed (action, successor) edges.
using Sub = std::vector<std::vector<std::pair<int, int>>>;

Strategy empty_strategy(const ProductGame& h, int player) {
  Strategy s;
  s.player = player;
  s.act.resize(h.num_vertices());
  return s;
}

/// Lexicographic tie-breaking over action identifiers.
int best_action(const ProductGame& h, const std::vector<int>& actions) {
  return *std::min_element(actions.begin(), actions.end(), [&](int a, int b) {
    return h.g.actions[a].id < h.g.actions[b].id;
  });
}

std::vector<char> reach_mask(const ProductGame& h, const Sub& sub) {
  std::vector<char> seen(h.num_vertices(), 0);
  std::vector<int> work{h.init};
  seen[h.init] = 1;
  while (!work.empty()) {
    int v = work.back();
    work.pop_back();
    for (auto& [a, w] : sub[v])
      if (!seen[w]) {
        seen[w] = 1;
        work.push_back(w);
      }
  }
  return seen;
}

/// Backward induction on the sub-arena; vertices with no allowed edge that
/// are not sinks of h get a poison value (they are unreachable in use).
std::vector<int> value_on(const ProductGame& h, const Sub& sub, int player) {
  std::vector<int> val(h.num_vertices(), INT_MAX / 2);
  for (auto it = h.topo.rbegin(); it != h.topo.rend(); ++it) {
    int v = *it;
    if (h.is_sink(v)) {
      val[v] = h.rank(player, v);
      continue;
    }
    if (sub[v].empty()) continue;
    int best = h.owner(v) == player ? INT_MAX / 2 : INT_MIN / 2;
    for (auto& [a, w] : sub[v])
      best = h.owner(v) == player ? std::min(best, val[w])
                                  : std::max(best, val[w]);
    val[v] = best;
  }
  return val;
}

std::pair<std::vector<int>, Strategy> attractor_on(const ProductGame& h,
                                                   const Sub& sub, int player,
                                                   const std::vector<int>& target) {
  std::vector<char> in_w(h.num_vertices(), 0);
  std::vector<char> in_t(h.num_vertices(), 0);
  for (int v : target) in_t[v] = 1;
  Strategy strat = empty_strategy(h, player);
  for (auto it = h.topo.rbegin(); it != h.topo.rend(); ++it) {
    int v = *it;
    if (h.is_sink(v)) {
      in_w[v] = in_t[v];
      continue;
    }
    if (sub[v].empty()) continue;
    if (h.owner(v) == player) {
      for (auto& [a, w] : sub[v])
        if (in_w[w]) {
          in_w[v] = 1;
          strat.act[v].push_back(a);
        }
      std::sort(strat.act[v].begin(), strat.act[v].end());
      if (!in_w[v]) strat.act[v].clear();
    } else {
      in_w[v] = 1;
      for (auto& [a, w] : sub[v]) in_w[v] &= in_w[w];
    }
  }
  std::vector<int> region;
  for (int v = 0; v < h.num_vertices(); ++v)
    if (in_w[v]) region.push_back(v);
  return {region, strat};
}

std::vector<int> ranked_sinks(const ProductGame& h, int player, int k) {
  std::vector<int> t;
  for (int v : h.sinks)
    if (h.rank(player, v) <= k) t.push_back(v);
  return t;
}

int min_sink_rank(const ProductGame& h, int player) {
  int m = INT_MAX;
  for (int v : h.sinks) m = std::min(m, h.rank(player, v));
  return m;
}

/// Maximal sure winning on a sub-arena: iterates Thm.-2 style over k, then
/// keeps exactly the value-preserving actions at the player's states
/// reachable under the restriction.
std::pair<int, Strategy> msw_on(const ProductGame& h, const Sub& sub,
                                int player) {
  int kmax = player == 1 ? h.k1max : h.k2max;
  int kstar = kmax;
  for (int k = 0; k <= kmax; ++k) {
    auto [region, s] = attractor_on(h, sub, player, ranked_sinks(h, player, k));
    if (std::binary_search(region.begin(), region.end(), h.init)) {
      kstar = k;
      break;
    }
  }
  std::vector<int> val = value_on(h, sub, player);
  Strategy strat = empty_strategy(h, player);
  std::vector<char> seen(h.num_vertices(), 0);
  std::vector<int> work{h.init};
  seen[h.init] = 1;
  while (!work.empty()) {
    int v = work.back();
    work.pop_back();
    for (auto& [a, w] : sub[v]) {
      if (h.owner(v) == player && !h.is_sink(v)) {
        if (val[w] > kstar) continue;
        strat.act[v].push_back(a);
      }
      if (!seen[w]) {
        seen[w] = 1;
        work.push_back(w);
      }
    }
    std::sort(strat.act[v].begin(), strat.act[v].end());
  }
  return {kstar, strat};
}

/// Restricts an arena by a (possibly permissive) strategy of one player.
Sub restrict_by(const ProductGame& h, const Sub& sub, const Strategy& s) {
  Sub out(h.num_vertices());
  for (int v = 0; v < h.num_vertices(); ++v) {
    if (h.owner(v) != s.player || h.is_sink(v) || !s.covers(v)) {
      out[v] = sub[v];
      continue;
    }
    for (auto& [a, w] : sub[v])
      if (std::binary_search(s.act[v].begin(), s.act[v].end(), a))
        out[v].push_back({a, w});
  }
  return out;
}

/// Value-preserving edges for `player`: the sub-arena form of the
/// restricted sub-game (same vertex indexing as h).
Sub value_preserving_sub(const ProductGame& h, int player) {
  std::vector<int> val = value_on(h, h.trans, player);
  int kstar = val[h.init];
  Sub out(h.num_vertices());
  for (int v = 0; v < h.num_vertices(); ++v) {
    if (h.owner(v) != player || h.is_sink(v)) {
      out[v] = h.trans[v];
      continue;
    }
    for (auto& [a, w] : h.trans[v])
      if (val[w] <= kstar) out[v].push_back({a, w});
    if (out[v].empty()) out[v] = h.trans[v];  // unreachable under restriction
  }
  return out;
}

std::vector<int> sinks_reachable(const ProductGame& h, const Sub& sub) {
  auto seen = reach_mask(h, sub);
  std::vector<int> out;
  for (int v : h.sinks)
    if (seen[v]) out.push_back(v);
  return out;
}

/// Deterministic profile steering both players to `target` inside the
/// sub-arena; off the steering region each player plays its
/// lexicographically smallest allowed action.
std::pair<Strategy, Strategy> steer_to(const ProductGame& h, const Sub& sub,
                                       int target) {
  std::vector<char> in_r(h.num_vertices(), 0);
  in_r[target] = 1;
  for (auto it = h.topo.rbegin(); it != h.topo.rend(); ++it)
    for (auto& [a, w] : sub[*it])
      if (in_r[w]) in_r[*it] = 1;
  Strategy p1 = empty_strategy(h, 1), p2 = empty_strategy(h, 2);
  for (int v = 0; v < h.num_vertices(); ++v) {
    if (h.is_sink(v)) continue;
    const auto& edges = sub[v].empty() ? h.trans[v] : sub[v];
    std::vector<int> pool;
    for (auto& [a, w] : edges)
      if (!in_r[v] || in_r[w]) pool.push_back(a);
    if (pool.empty())
      for (auto& [a, w] : edges) pool.push_back(a);
    int pick = best_action(h, pool);
    (h.owner(v) == 1 ? p1 : p2).act[v] = {pick};
  }
  return {p1, p2};
}

/// Deterministic selection from a permissive strategy; uncovered states get
/// the smallest action allowed by the sub-arena.
Strategy select_from(const ProductGame& h, const Sub& sub, const Strategy& perm) {
  Strategy out = empty_strategy(h, perm.player);
  for (int v = 0; v < h.num_vertices(); ++v) {
    if (h.owner(v) != perm.player || h.is_sink(v)) continue;
    std::vector<int> pool = perm.act[v];
    if (pool.empty())
      for (auto& [a, w] : sub[v]) pool.push_back(a);
    if (pool.empty())
      for (auto& [a, w] : h.trans[v]) pool.push_back(a);
    out.act[v] = {best_action(h, pool)};
  }
  return out;
}

int min_id_vertex(const ProductGame& h, const std::vector<int>& vs) {
  return *std::min_element(vs.begin(), vs.end(), [&](int a, int b) {
    return h.vertex_id(a) < h.vertex_id(b);
  });
}

std::vector<int> maximal_sinks(const ProductGame& h, int player) {
  std::vector<int> out;
  for (int v : h.sinks) {
    bool dominated = false;
    for (int u : h.sinks)
      if (h.geq(player, u, v) && !h.geq(player, v, u)) dominated = true;
    if (!dominated) out.push_back(v);
  }
  return out;
}

void fill_common(const ProductGame& h, NashReport& r) {
  for (int p : {1, 2}) {
    r.k_star[p - 1] = msw_on(h, h.trans, p).first;
    r.m[p - 1] = min_sink_rank(h, p);
    r.needs[p - 1] = r.k_star[p - 1] > r.m[p - 1];
  }
}

NashReport nash_aligned_impl(const ProductGame& h) {
  NashReport r;
  r.alignment = Alignment::FullyAligned;
  r.case_tag = "Thm-1";
  fill_common(h, r);
  r.outcomes = maximal_sinks(h, 1);
  auto [w1, w2] = steer_to(h, h.trans, min_id_vertex(h, r.outcomes));
  r.w1 = w1;
  r.w2 = w2;
  r.perm1 = empty_strategy(h, 1);
  r.perm2 = empty_strategy(h, 2);
  return r;
}

NashReport nash_opposite_impl(const ProductGame& h) {
  NashReport r;
  r.alignment = Alignment::CompletelyOpposite;
  r.case_tag = "Thm-3";
  fill_common(h, r);
  auto [k1, perm1] = msw_on(h, h.trans, 1);
  auto [k2, perm2] = msw_on(h, h.trans, 2);
  Sub joint = restrict_by(h, restrict_by(h, h.trans, perm1), perm2);
  r.outcomes = sinks_reachable(h, joint);
  r.perm1 = perm1;
  r.perm2 = perm2;
  r.w1 = select_from(h, h.trans, perm1);
  r.w2 = select_from(h, h.trans, perm2);
  return r;
}

/// One player (the needer) relies on the other (the helper); dispatch on
/// the helper's attitude.  Thm. 5 when cooperative, Thm. 6 when agnostic.
NashReport assisted(const ProductGame& h, int needer, int helper,
                    Attitude helper_attitude) {
  NashReport r;
  r.alignment = Alignment::PartiallyAligned;
  fill_common(h, r);
  if (helper_attitude == Attitude::Cooperative) {
    r.case_tag = "Thm-5";
    auto [kh, perm_h] = msw_on(h, h.trans, helper);
    Sub sub = restrict_by(h, h.trans, perm_h);
    std::vector<int> reach = sinks_reachable(h, sub);
    int best = INT_MAX;
    for (int v : reach) best = std::min(best, h.rank(needer, v));
    for (int v : reach)
      if (h.rank(needer, v) == best) r.outcomes.push_back(v);
    auto [w1, w2] = steer_to(h, sub, min_id_vertex(h, r.outcomes));
    r.w1 = w1;
    r.w2 = w2;
    (helper == 1 ? r.perm1 : r.perm2) = perm_h;
    (helper == 1 ? r.perm2 : r.perm1) = empty_strategy(h, needer);
  } else {
    r.case_tag = "Thm-6";
    Sub sub = value_preserving_sub(h, helper);
    auto [kn, perm_n] = msw_on(h, sub, needer);
    Sub joint = restrict_by(h, sub, perm_n);
    r.outcomes = sinks_reachable(h, joint);
    (needer == 1 ? r.perm1 : r.perm2) = perm_n;
    Strategy helper_any = empty_strategy(h, helper);
    for (int v = 0; v < h.num_vertices(); ++v)
      if (h.owner(v) == helper && !h.is_sink(v))
        for (auto& [a, w] : sub[v]) helper_any.act[v].push_back(a);
    (helper == 1 ? r.perm1 : r.perm2) = helper_any;
    Strategy wn = select_from(h, sub, perm_n);
    Strategy wh = select_from(h, sub, helper_any);
    r.w1 = needer == 1 ? wn : wh;
    r.w2 = needer == 1 ? wh : wn;
  }
  return r;
}

NashReport nash_partial_impl(const ProductGame& h, Attitude a1, Attitude a2) {
  NashReport r;
  fill_common(h, r);
  bool n1 = r.needs[0], n2 = r.needs[1];
  if (!n1 && !n2) {
    NashReport out;
    out.alignment = Alignment::PartiallyAligned;
    out.case_tag = "Thm-4";
    fill_common(h, out);
    for (int v : h.sinks)
      if (h.rank1[v] == out.m[0] && h.rank2[v] == out.m[1])
        out.outcomes.push_back(v);
    if (out.outcomes.empty()) {
      std::ostringstream os;
      os << "neither player needs cooperation, but no reachable sink attains "
            "both minimum ranks (m1=" << out.m[0] << ", m2=" << out.m[1]
         << "); sink rank pairs:";
      for (int v : h.sinks)
        os << " " << h.vertex_id(v) << "=(" << h.rank1[v] << "," << h.rank2[v]
           << ")";
      throw EmptyOutcomeError(os.str());
    }
    auto [w1, w2] = steer_to(h, h.trans, min_id_vertex(h, out.outcomes));
    out.w1 = w1;
    out.w2 = w2;
    out.perm1 = empty_strategy(h, 1);
    out.perm2 = empty_strategy(h, 2);
    return out;
  }
  if (n1 != n2) {
    int needer = n1 ? 1 : 2;
    int helper = 3 - needer;
    return assisted(h, needer, helper, helper == 1 ? a1 : a2);
  }
  // Both need cooperation.
  std::vector<int> pareto = pareto_states(h);
  if (!pareto.empty()) {
    auto inc = incentive_to_cooperate(h);
    if (inc[0] && inc[1]) {
      NashReport out;
      out.alignment = Alignment::PartiallyAligned;
      out.case_tag = "Thm-7";
      fill_common(h, out);
      out.incentives = inc;
      out.pareto = pareto;
      out.outcomes = pareto;
      auto [w1, w2] = steer_to(h, h.trans, min_id_vertex(h, pareto));
      out.w1 = w1;
      out.w2 = w2;
      out.perm1 = empty_strategy(h, 1);
      out.perm2 = empty_strategy(h, 2);
      return out;
    }
    // The player without incentive acts as the helper.
    int helper = !inc[0] ? 1 : 2;
    NashReport out =
        assisted(h, 3 - helper, helper, helper == 1 ? a1 : a2);
    out.case_tag += "-fallback";
    out.incentives = inc;
    out.pareto = pareto;
    return out;
  }
  // Empty Pareto set: no common target exists; keep the theorems'
  // orientation and let P1 act as the helper for P2.
  NashReport out = assisted(h, 2, 1, a1);
  out.case_tag += "-fallback";
  return out;
}

/// Worst-case terminal rank for `player` when it follows the deterministic
/// strategy and the opponent ranges over the sub-arena.  Fails when the
/// strategy leaves a reachable own state uncovered or plays outside sub.
std::optional<int> strategy_guarantee(const ProductGame& h, const Sub& sub,
                                      const Strategy& s, int player,
                                      std::string* err) {
  std::vector<char> seen(h.num_vertices(), 0);
  std::vector<int> work{h.init};
  seen[h.init] = 1;
  Sub arena(h.num_vertices());
  while (!work.empty()) {
    int v = work.back();
    work.pop_back();
    if (h.is_sink(v)) continue;
    if (h.owner(v) == player) {
      if (!s.covers(v)) {
        if (err) *err = "strategy undefined at reachable state " + h.vertex_id(v);
        return std::nullopt;
      }
      int a = s.act[v][0];
      int w = -1;
      for (auto& [ae, we] : sub[v])
        if (ae == a) w = we;
      if (w < 0) {
        if (err)
          *err = "strategy plays disallowed action '" + h.g.actions[a].id +
                 "' at " + h.vertex_id(v);
        return std::nullopt;
      }
      arena[v] = {{a, w}};
    } else {
      arena[v] = sub[v];
    }
    for (auto& [a, w] : arena[v])
      if (!seen[w]) {
        seen[w] = 1;
        work.push_back(w);
      }
  }
  std::vector<int> val(h.num_vertices(), INT_MIN / 2);
  for (auto it = h.topo.rbegin(); it != h.topo.rend(); ++it) {
    int v = *it;
    if (!seen[v]) continue;
    if (h.is_sink(v)) {
      val[v] = h.rank(player, v);
      continue;
    }
    int worst = INT_MIN / 2;
    for (auto& [a, w] : arena[v]) worst = std::max(worst, val[w]);
    val[v] = worst;
  }
  return val[h.init];
}

}  // namespace

std::string to_string(Alignment a) {
  switch (a) {
    case Alignment::FullyAligned: return "fully_aligned";
    case Alignment::CompletelyOpposite: return "completely_opposite";
    default: return "partially_aligned";
  }
}

Attitude parse_attitude(const std::string& name) {
  if (name == "cooperative") return Attitude::Cooperative;
  if (name == "agnostic") return Attitude::Agnostic;
  throw SolveError("unknown attitude '" + name + "'");
}

std::pair<std::vector<int>, Strategy> attractor(const ProductGame& h,
                                                int player,
                                                const std::vector<int>& target) {
  for (int v : target)
    if (!h.is_sink(v)) throw SolveError("attractor target must be sinks");
  return attractor_on(h, h.trans, player, target);
}

std::vector<int> swin(const ProductGame& h, int player, int k) {
  return attractor_on(h, h.trans, player, ranked_sinks(h, player, k)).first;
}

std::pair<int, Strategy> max_sure_winning(const ProductGame& h, int player) {
  return msw_on(h, h.trans, player);
}

std::vector<int> value_map(const ProductGame& h, int player) {
  return value_on(h, h.trans, player);
}

Alignment classify_alignment(const ProductGame& h, bool strict_opposite) {
  std::vector<int> qs(h.vq);
  std::sort(qs.begin(), qs.end());
  qs.erase(std::unique(qs.begin(), qs.end()), qs.end());
  bool aligned = true, opposite = true;
  for (int q : qs)
    for (int p : qs) {
      aligned &= h.e1.geq(q, p) == h.e2.geq(q, p);
      if (strict_opposite)
        opposite &= h.e1.geq(q, p) == h.e2.geq(p, q);
      else
        opposite &= !h.e1.geq(q, p) || h.e2.geq(p, q);
    }
  if (aligned) return Alignment::FullyAligned;
  if (opposite) return Alignment::CompletelyOpposite;
  return Alignment::PartiallyAligned;
}

NashReport nash_aligned(const ProductGame& h) {
  if (classify_alignment(h) != Alignment::FullyAligned)
    throw WrongClassError("nash_aligned requires fully aligned preferences");
  return nash_aligned_impl(h);
}

NashReport nash_opposite(const ProductGame& h) {
  if (classify_alignment(h) == Alignment::FullyAligned ||
      classify_alignment(h) == Alignment::PartiallyAligned)
    throw WrongClassError("nash_opposite requires completely opposite preferences");
  return nash_opposite_impl(h);
}

bool needs_cooperation(const ProductGame& h, int player) {
  return msw_on(h, h.trans, player).first > min_sink_rank(h, player);
}

prod::ProductGame restricted_game(const ProductGame& h, int restricted_player) {
  Sub sub = value_preserving_sub(h, restricted_player);
  auto seen = reach_mask(h, sub);
  prod::ProductGame out;
  out.g = h.g;
  out.semi = h.semi;
  out.e1 = h.e1;
  out.e2 = h.e2;
  std::vector<int> remap(h.num_vertices(), -1);
  // Deterministic vertex order: BFS from the initial vertex.
  std::vector<int> order{h.init};
  remap[h.init] = 0;
  for (size_t i = 0; i < order.size(); ++i)
    for (auto& [a, w] : sub[order[i]])
      if (seen[w] && remap[w] < 0) {
        remap[w] = static_cast<int>(order.size());
        order.push_back(w);
      }
  for (int v : order) {
    out.vs.push_back(h.vs[v]);
    out.vq.push_back(h.vq[v]);
    out.index[{h.vs[v], h.vq[v]}] = remap[v];
    out.trans.emplace_back();
    for (auto& [a, w] : sub[v]) out.trans.back().push_back({a, remap[w]});
  }
  out.init = 0;
  prod::finalize_product(out);
  // Ranks are inherited from h, not re-peeled over the surviving states.
  for (size_t i = 0; i < order.size(); ++i) {
    out.rank1[i] = h.rank1[order[i]];
    out.rank2[i] = h.rank2[order[i]];
  }
  out.k1max = h.k1max;
  out.k2max = h.k2max;
  return out;
}

std::vector<int> pareto_states(const ProductGame& h) {
  std::vector<int> out;
  for (int v : h.sinks) {
    bool beaten = false;
    for (int u : h.sinks)
      if (h.rank1[u] < h.rank1[v] || h.rank2[u] < h.rank2[v]) beaten = true;
    if (!beaten) out.push_back(v);
  }
  return out;
}

std::array<bool, 2> incentive_to_cooperate(const ProductGame& h) {
  std::vector<int> pareto = pareto_states(h);
  if (pareto.empty())
    throw SolveError("incentive_to_cooperate requires a nonempty Pareto set");
  int p = pareto[0];  // ranks are constant across the Pareto set
  std::array<bool, 2> out{};
  for (int i : {1, 2})
    out[i - 1] = !(msw_on(h, h.trans, i).first < h.rank(i, p));
  return out;
}

NashReport nash_partial(const ProductGame& h, Attitude attitude1,
                        Attitude attitude2) {
  if (classify_alignment(h) != Alignment::PartiallyAligned)
    throw WrongClassError("nash_partial requires partially aligned preferences");
  return nash_partial_impl(h, attitude1, attitude2);
}

NashReport solve(const ProductGame& h, Attitude attitude1, Attitude attitude2,
                 bool strict_opposite) {
  switch (classify_alignment(h, strict_opposite)) {
    case Alignment::FullyAligned:
      return nash_aligned_impl(h);
    case Alignment::CompletelyOpposite:
      return nash_opposite_impl(h);
    default:
      return nash_partial_impl(h, attitude1, attitude2);
  }
}

std::vector<int> play_profile(const ProductGame& h, const Strategy& p1,
                              const Strategy& p2) {
  std::vector<int> path{h.init};
  while (!h.is_sink(path.back())) {
    int v = path.back();
    const Strategy& s = h.owner(v) == 1 ? p1 : p2;
    if (!s.covers(v) || s.act[v].size() != 1)
      throw SolveError("profile is not deterministic and total at " +
                       h.vertex_id(v));
    int w = h.transition(v, s.act[v][0]);
    if (w < 0)
      throw SolveError("profile plays a disabled action at " + h.vertex_id(v));
    path.push_back(w);
    if (path.size() > h.vs.size() + 1)
      throw SolveError("play does not terminate");
  }
  return path;
}

CheckResult check_nash(const ProductGame& h, const Strategy& p1,
                       const Strategy& p2, Attitude attitude1,
                       Attitude attitude2, bool strict_opposite) {
  NashReport r = solve(h, attitude1, attitude2, strict_opposite);
  std::vector<int> path = play_profile(h, p1, p2);
  int outcome = path.back();
  bool in_set =
      std::find(r.outcomes.begin(), r.outcomes.end(), outcome) != r.outcomes.end();
  std::string id = h.vertex_id(outcome);

  auto guarantee_check = [&](const Sub& sub, const Strategy& s, int player,
                             int expect, const std::string& what,
                             CheckResult& res) {
    std::string err;
    auto g = strategy_guarantee(h, sub, s, player, &err);
    if (!g) {
      res = {false, "P" + std::to_string(player) + ": " + err};
      return false;
    }
    if (*g != expect) {
      res = {false, "P" + std::to_string(player) + "'s strategy is not " + what +
                        " (guarantees rank " + std::to_string(*g) +
                        ", required " + std::to_string(expect) + ")"};
      return false;
    }
    return true;
  };

  if (r.case_tag == "Thm-1") {
    if (in_set) return {true, "outcome " + id + " is a maximal reachable sink"};
    return {false, "outcome " + id + " is not a maximal reachable sink"};
  }
  if (r.case_tag == "Thm-3") {
    CheckResult res;
    if (!guarantee_check(h.trans, p1, 1, r.k_star[0], "maximal sure winning", res))
      return res;
    if (!guarantee_check(h.trans, p2, 2, r.k_star[1], "maximal sure winning", res))
      return res;
    return {true, "both strategies are maximal sure winning"};
  }
  if (r.case_tag == "Thm-4") {
    if (in_set)
      return {true, "outcome " + id + " attains both players' minimum ranks"};
    return {false,
            "outcome " + id + " does not attain both players' minimum ranks"};
  }
  if (r.case_tag == "Thm-7") {
    if (in_set) return {true, "outcome " + id + " is a Pareto state"};
    return {false, "outcome " + id + " is not a Pareto state"};
  }
  // Thm-5 / Thm-6 (possibly as both-need fallbacks).  Recover who relied
  // on whom from the dispatch inputs.
  bool n1 = r.needs[0], n2 = r.needs[1];
  int needer;
  if (n1 != n2)
    needer = n1 ? 1 : 2;
  else if (r.incentives)
    needer = !(*r.incentives)[0] ? 2 : 1;
  else
    needer = 1;
  int helper = 3 - needer;
  const Strategy& ps_needer = needer == 1 ? p1 : p2;
  const Strategy& ps_helper = helper == 1 ? p1 : p2;
  CheckResult res;
  if (r.case_tag.rfind("Thm-5", 0) == 0) {
    int kh = msw_on(h, h.trans, helper).first;
    if (!guarantee_check(h.trans, ps_helper, helper, kh, "maximal sure winning",
                         res))
      return res;
    if (!in_set)
      return {false, "outcome " + id +
                         " is not rank-minimal for the assisted player among "
                         "the helper's maximal sure winning plays"};
    return {true, "helper plays maximal sure winning and outcome " + id +
                      " is best for the assisted player"};
  }
  // Thm-6: helper confined to its value-preserving actions, needer maximal
  // sure winning inside the restricted arena.
  Sub sub = value_preserving_sub(h, helper);
  for (int v : path)
    if (h.owner(v) == helper && !h.is_sink(v)) {
      int a = ps_helper.act[v][0];
      bool ok = false;
      for (auto& [ae, we] : sub[v]) ok |= ae == a;
      if (!ok)
        return {false, "P" + std::to_string(helper) +
                           " plays a value-degrading action at " + h.vertex_id(v)};
    }
  int kn = msw_on(h, sub, needer).first;
  if (!guarantee_check(sub, ps_needer, needer, kn,
                       "maximal sure winning in the restricted game", res))
    return res;
  return {true, "profile is consistent with the restricted-game construction"};
}

nlohmann::json strategy_to_json(const ProductGame& h, const Strategy& s) {
  nlohmann::json moves = nlohmann::json::object();
  for (int v = 0; v < h.num_vertices(); ++v) {
    if (s.act[v].empty()) continue;
    if (s.act[v].size() == 1)
      moves[h.vertex_id(v)] = h.g.actions[s.act[v][0]].id;
    else {
      nlohmann::json arr = nlohmann::json::array();
      for (int a : s.act[v]) arr.push_back(h.g.actions[a].id);
      moves[h.vertex_id(v)] = arr;
    }
  }
  return {{"player", s.player}, {"moves", moves}};
}

Strategy strategy_from_json(const ProductGame& h, const nlohmann::json& j) {
  Strategy s = empty_strategy(h, j.at("player").get<int>());
  std::map<std::string, int> by_id;
  for (int v = 0; v < h.num_vertices(); ++v) by_id[h.vertex_id(v)] = v;
  std::map<std::string, int> act_by_id;
  for (size_t a = 0; a < h.g.actions.size(); ++a)
    act_by_id[h.g.actions[a].id] = static_cast<int>(a);
  for (auto& [key, val] : j.at("moves").items()) {
    auto vi = by_id.find(key);
    if (vi == by_id.end()) throw SolveError("unknown product state '" + key + "'");
    auto add = [&](const std::string& name) {
      auto ai = act_by_id.find(name);
      if (ai == act_by_id.end())
        throw SolveError("unknown action '" + name + "'");
      s.act[vi->second].push_back(ai->second);
    };
    if (val.is_string())
      add(val.get<std::string>());
    else
      for (auto& e : val) add(e.get<std::string>());
    std::sort(s.act[vi->second].begin(), s.act[vi->second].end());
  }
  return s;
}

nlohmann::json nash_report_to_json(const ProductGame& h, const NashReport& r) {
  nlohmann::json j;
  j["alignment"] = to_string(r.alignment);
  j["case"] = r.case_tag;
  j["k_star"] = {r.k_star[0], r.k_star[1]};
  j["m"] = {r.m[0], r.m[1]};
  j["needs"] = {r.needs[0], r.needs[1]};
  if (r.incentives)
    j["incentives"] = {(*r.incentives)[0], (*r.incentives)[1]};
  else
    j["incentives"] = nullptr;
  j["outcomes"] = nlohmann::json::array();
  for (int v : r.outcomes)
    j["outcomes"].push_back({{"state", h.vertex_id(v)},
                             {"rank1", h.rank1[v]},
                             {"rank2", h.rank2[v]}});
  j["witnesses"] = {strategy_to_json(h, r.w1), strategy_to_json(h, r.w2)};
  j["pareto"] = nlohmann::json::array();
  for (int v : r.pareto) j["pareto"].push_back(h.vertex_id(v));
  return j;
}

std::string nash_report_to_dot(const ProductGame& h, const NashReport& r) {
  std::vector<char> is_outcome(h.num_vertices(), 0);
  for (int v : r.outcomes) is_outcome[v] = 1;
  auto marked = [&](int v, int a) {
    const Strategy& perm = h.owner(v) == 1 ? r.perm1 : r.perm2;
    const Strategy& wit = h.owner(v) == 1 ? r.w1 : r.w2;
    if (!perm.act.empty() && perm.covers(v))
      return std::binary_search(perm.act[v].begin(), perm.act[v].end(), a);
    return wit.covers(v) && wit.act[v][0] == a;
  };
  std::ostringstream os;
  os << "digraph equilibria {\n  rankdir=LR;\n  label=\"" << r.case_tag
     << "\";\n";
  for (int v = 0; v < h.num_vertices(); ++v) {
    os << "  n" << v << " [label=\"" << h.vertex_id(v) << "\" shape="
       << (h.owner(v) == 1 ? "box" : "ellipse")
       << (h.is_sink(v) ? " peripheries=2" : "");
    if (is_outcome[v]) os << " style=filled fillcolor=palegreen";
    os << "];\n";
  }
  os << "  init [shape=point];\n  init -> n" << h.init << ";\n";
  for (int v = 0; v < h.num_vertices(); ++v)
    for (auto& [a, w] : h.trans[v]) {
      os << "  n" << v << " -> n" << w << " [label=\"" << h.g.actions[a].id
         << "\"";
      if (marked(v, a)) os << " color=blue penwidth=2";
      os << "];\n";
    }
  os << "}\n";
  return os.str();
}

}  // namespace prefgame::solve
