#include "prefgame/oracle.hpp"

#include <algorithm>

#include <nlohmann/json.hpp>

namespace prefgame::oracle {

namespace {

using prod::ProductGame;

/// Decision points: owned non-sink vertices with more than one edge.
/// Single-edge vertices have a forced move and are not enumerated.
std::vector<int> decision_states(const ProductGame& h, int player) {
  std::vector<int> out;
  for (int v = 0; v < h.num_vertices(); ++v)
    if (h.owner(v) == player && h.trans[v].size() > 1) out.push_back(v);
  return out;
}

Choice decode(const ProductGame& h, const std::vector<int>& decisions,
              unsigned long long idx) {
  Choice c(h.num_vertices(), -1);
  for (int v = 0; v < h.num_vertices(); ++v)
    if (h.trans[v].size() == 1) c[v] = 0;
  for (int v : decisions) {
    auto b = h.trans[v].size();
    c[v] = static_cast<int8_t>(idx % b);
    idx /= b;
  }
  return c;
}

/// Sinks the free player can steer the play into while the fixed player
/// follows `fixed` (bitmask over positions in h.sinks).
uint32_t reachable_outcomes(const ProductGame& h, int fixed_player,
                            const Choice& fixed,
                            const std::vector<int>& sink_pos) {
  std::vector<char> seen(h.num_vertices(), 0);
  std::vector<int> work{h.init};
  seen[h.init] = 1;
  uint32_t mask = 0;
  while (!work.empty()) {
    int v = work.back();
    work.pop_back();
    if (h.is_sink(v)) {
      mask |= 1u << sink_pos[v];
      continue;
    }
    if (h.owner(v) == fixed_player) {
      int w = h.trans[v][fixed[v]].second;
      if (!seen[w]) seen[w] = 1, work.push_back(w);
    } else {
      for (auto& [a, w] : h.trans[v])
        if (!seen[w]) seen[w] = 1, work.push_back(w);
    }
  }
  return mask;
}

}  // namespace

solve::Strategy choice_to_strategy(const ProductGame& h, int player,
                                   const Choice& c) {
  solve::Strategy s;
  s.player = player;
  s.act.resize(h.num_vertices());
  for (int v = 0; v < h.num_vertices(); ++v)
    if (h.owner(v) == player && !h.is_sink(v) && c[v] >= 0)
      s.act[v] = {h.trans[v][c[v]].first};
  return s;
}

std::vector<int> play(const ProductGame& h, const Choice& c1, const Choice& c2) {
  std::vector<int> path{h.init};
  while (!h.is_sink(path.back())) {
    int v = path.back();
    const Choice& c = h.owner(v) == 1 ? c1 : c2;
    if (c[v] < 0 || c[v] >= static_cast<int>(h.trans[v].size()))
      throw OracleError("profile undefined at " + h.vertex_id(v));
    path.push_back(h.trans[v][c[v]].second);
    if (path.size() > h.vs.size() + 1)
      throw OracleError("play does not terminate");
  }
  return path;
}

BruteForceResult brute_force_nash(const ProductGame& h, const Guard& guard,
                                  bool strict) {
  if (h.num_vertices() > guard.max_states)
    throw OracleError("instance exceeds the state guard");
  for (int v = 0; v < h.num_vertices(); ++v)
    if (static_cast<int>(h.trans[v].size()) > guard.max_branching)
      throw OracleError("instance exceeds the branching guard");
  if (h.sinks.size() > 32) throw OracleError("too many sinks to enumerate");

  std::vector<int> dec1 = decision_states(h, 1);
  std::vector<int> dec2 = decision_states(h, 2);
  unsigned long long n1 = 1, n2 = 1;
  for (int v : dec1) n1 *= h.trans[v].size();
  for (int v : dec2) n2 *= h.trans[v].size();
  if (n1 > guard.max_profiles || n2 > guard.max_profiles ||
      n1 * n2 > guard.max_profiles)
    throw OracleError("instance exceeds the profile guard");

  std::vector<int> sink_pos(h.num_vertices(), -1);
  for (size_t i = 0; i < h.sinks.size(); ++i) sink_pos[h.sinks[i]] = int(i);

  // For each opponent strategy: the set of outcomes the deviating player
  // can reach, and the outcomes thereby defeated.
  auto defeated_for = [&](int deviator, uint32_t reach) {
    uint32_t defeated = 0;
    for (size_t i = 0; i < h.sinks.size(); ++i) {
      int o = h.sinks[i];
      for (size_t j = 0; j < h.sinks.size(); ++j) {
        if (!(reach & (1u << j))) continue;
        int o2 = h.sinks[j];
        bool better = strict ? (h.geq(deviator, o2, o) && !h.geq(deviator, o, o2))
                             : (h.geq(deviator, o2, o) && o2 != o);
        if (better) {
          defeated |= 1u << i;
          break;
        }
      }
    }
    return defeated;
  };

  std::vector<uint32_t> defeated1(n2), defeated2(n1);
  for (unsigned long long i2 = 0; i2 < n2; ++i2)
    defeated1[i2] =
        defeated_for(1, reachable_outcomes(h, 2, decode(h, dec2, i2), sink_pos));
  for (unsigned long long i1 = 0; i1 < n1; ++i1)
    defeated2[i1] =
        defeated_for(2, reachable_outcomes(h, 1, decode(h, dec1, i1), sink_pos));

  BruteForceResult res;
  uint32_t outcome_mask = 0;
  for (unsigned long long i1 = 0; i1 < n1; ++i1) {
    Choice c1 = decode(h, dec1, i1);
    for (unsigned long long i2 = 0; i2 < n2; ++i2) {
      Choice c2 = decode(h, dec2, i2);
      ++res.profiles_checked;
      std::vector<int> path = play(h, c1, c2);
      int pos = sink_pos[path.back()];
      bool defeated = (defeated1[i2] & (1u << pos)) || (defeated2[i1] & (1u << pos));
      if (!defeated && !strict) {
        // Weak reading: a deviation differing only off the play path keeps
        // the outcome, and the outcome weakly prefers itself.
        std::vector<char> on_path(h.num_vertices(), 0);
        for (int v : path) on_path[v] = 1;
        for (int v : dec1) defeated |= !on_path[v];
        for (int v : dec2) defeated |= !on_path[v];
      }
      if (defeated) continue;
      ++res.nash_count;
      outcome_mask |= 1u << pos;
      if (res.nash.size() < guard.max_stored)
        res.nash.push_back({c1, c2});
      else
        res.truncated = true;
    }
  }
  for (size_t i = 0; i < h.sinks.size(); ++i)
    if (outcome_mask & (1u << i)) res.outcomes.push_back(h.sinks[i]);
  return res;
}

nlohmann::json diff_report(const ProductGame& h, const BruteForceResult& oracle,
                           const solve::NashReport& solved) {
  auto ids = [&](const std::vector<int>& vs) {
    std::vector<std::string> out;
    for (int v : vs) out.push_back(h.vertex_id(v));
    return out;
  };
  std::vector<int> only_oracle, only_solve;
  for (int v : oracle.outcomes)
    if (std::find(solved.outcomes.begin(), solved.outcomes.end(), v) ==
        solved.outcomes.end())
      only_oracle.push_back(v);
  for (int v : solved.outcomes)
    if (std::find(oracle.outcomes.begin(), oracle.outcomes.end(), v) ==
        oracle.outcomes.end())
      only_solve.push_back(v);
  nlohmann::json j;
  j["case"] = solved.case_tag;
  j["oracle_outcomes"] = ids(oracle.outcomes);
  j["solve_outcomes"] = ids(solved.outcomes);
  j["only_oracle"] = ids(only_oracle);
  j["only_solve"] = ids(only_solve);
  j["agree"] = only_oracle.empty() && only_solve.empty();
  j["nash_profiles"] = oracle.nash_count;
  return j;
}

nlohmann::json brute_force_to_json(const ProductGame& h,
                                   const BruteForceResult& r) {
  nlohmann::json j;
  j["profiles_checked"] = r.profiles_checked;
  j["nash_count"] = r.nash_count;
  j["truncated"] = r.truncated;
  j["outcomes"] = nlohmann::json::array();
  for (int v : r.outcomes)
    j["outcomes"].push_back({{"state", h.vertex_id(v)},
                             {"rank1", h.rank1[v]},
                             {"rank2", h.rank2[v]}});
  j["profiles"] = nlohmann::json::array();
  for (auto& [c1, c2] : r.nash)
    j["profiles"].push_back(
        {solve::strategy_to_json(h, choice_to_strategy(h, 1, c1)),
         solve::strategy_to_json(h, choice_to_strategy(h, 2, c2))});
  return j;
}

}  // namespace prefgame::oracle
