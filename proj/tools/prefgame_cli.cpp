#include <climits>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "prefgame/game.hpp"
#include "prefgame/ltlf.hpp"
#include "prefgame/oracle.hpp"
#include "prefgame/preference.hpp"
#include "prefgame/product.hpp"
#include "prefgame/scenario.hpp"
#include "prefgame/solve.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace prefgame;

namespace {

// Exit codes: 0 success / Nash; 1 profile is not a Nash equilibrium;
// 2 parse or consistency error; 3 non-terminating product;
// 4 semi-automaton mismatch.
constexpr int kExitNotNash = 1;
constexpr int kExitParse = 2;
constexpr int kExitNonTerminating = 3;
constexpr int kExitMismatch = 4;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

json read_json(const std::string& path) {
  return json::parse(read_file(path));
}

void write_file(const fs::path& path, const std::string& content) {
  fs::create_directories(path.parent_path().empty() ? "." : path.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << content;
}

struct Options {
  std::string prefspec, spec1, spec2, game, config, profile, out = "out";
  std::vector<std::string> ap;
  std::string policy = "bottom", policy1, policy2;
  std::string attitude1 = "agnostic", attitude2 = "agnostic";
  std::string sweep = "maxrank";
  bool strict_opposite = false;
  bool both_readings = false;
  int tmax = -1;
  int horizon = -1;
  int max_states = 100000;
  unsigned long long max_profiles = 4'000'000;
  unsigned long long seed = 0;  // reserved for randomized tooling
};

pref::EmptyPolicy policy_for(const Options& o, int player) {
  const std::string& p = player == 1 ? o.policy1 : o.policy2;
  return pref::parse_empty_policy(p.empty() ? o.policy : p);
}

/// Both specs must list the same alternatives; they may rank them
/// differently.  Returns one shared semi-automaton plus both preorders.
std::pair<pref::PreferenceAutomaton, pref::PreferenceAutomaton> build_pair(
    const Options& o, const std::vector<std::string>& ap) {
  pref::PrefSpec s1 = pref::parse_prefspec(read_file(o.spec1));
  pref::PrefSpec s2 =
      o.spec2.empty() ? s1 : pref::parse_prefspec(read_file(o.spec2));
  if (s1.alternatives.size() != s2.alternatives.size())
    throw prod::MismatchError("preference specs disagree on the alternatives");
  for (size_t i = 0; i < s1.alternatives.size(); ++i)
    if (!ltlf::equal(s1.alternatives[i], s2.alternatives[i]))
      throw prod::MismatchError("preference specs disagree on alternative " +
                                std::to_string(i));
  auto semi = pref::build_semi_automaton(s1.alternatives, ap, o.max_states);
  return {pref::attach_preorder(semi, s1, policy_for(o, 1)),
          pref::attach_preorder(semi, s2, policy_for(o, 2))};
}

prod::ProductGame build_from_files(const Options& o) {
  game::GameGraph g = game::load_game(read_json(o.game));
  if (o.horizon >= 0) g = game::unroll_horizon(g, o.horizon);
  auto [p1, p2] = build_pair(o, g.ap);
  return prod::build_product(g, p1, p2);
}

std::string summary_text(const prod::ProductGame& h, const solve::NashReport& r) {
  std::ostringstream os;
  os << "alignment: " << solve::to_string(r.alignment) << "\n";
  os << "characterization: " << r.case_tag << "\n";
  os << "k* = (" << r.k_star[0] << ", " << r.k_star[1] << "), m = (" << r.m[0]
     << ", " << r.m[1] << "), needs cooperation = (" << (r.needs[0] ? "T" : "F")
     << ", " << (r.needs[1] ? "T" : "F") << ")\n";
  if (r.incentives)
    os << "incentive to cooperate = (" << ((*r.incentives)[0] ? "T" : "F")
       << ", " << ((*r.incentives)[1] ? "T" : "F") << ")\n";
  os << "equilibrium outcomes:";
  for (int v : r.outcomes)
    os << " " << h.vertex_id(v) << "[" << h.rank1[v] << "," << h.rank2[v] << "]";
  os << "\n";
  return os.str();
}

int cmd_compile(const Options& o) {
  pref::PrefSpec spec = pref::parse_prefspec(read_file(o.prefspec));
  std::vector<std::string> ap = o.ap;
  if (ap.empty()) {
    for (const auto& f : spec.alternatives)
      for (const auto& a : ltlf::atoms_of(f))
        if (std::find(ap.begin(), ap.end(), a) == ap.end()) ap.push_back(a);
  }
  pref::PreferenceAutomaton aut =
      pref::build_preference_automaton(spec, ap, policy_for(o, 1), o.max_states);
  fs::path out(o.out);
  write_file(out / "automaton.json",
             pref::preference_automaton_to_json(aut).dump(2) + "\n");
  write_file(out / "automaton.dot", pref::preference_automaton_to_dot(aut));
  std::cout << "semi-automaton states: " << aut.semi->num_states << "\n";
  return 0;
}

int cmd_solve(const Options& o) {
  prod::ProductGame h = build_from_files(o);
  solve::NashReport r =
      solve::solve(h, solve::parse_attitude(o.attitude1),
                   solve::parse_attitude(o.attitude2), o.strict_opposite);
  fs::path out(o.out);
  write_file(out / "report.json", solve::nash_report_to_json(h, r).dump(2) + "\n");
  write_file(out / "report.dot", solve::nash_report_to_dot(h, r));
  write_file(out / "product.json", prod::product_to_json(h).dump(2) + "\n");
  write_file(out / "product.dot", prod::product_to_dot(h));
  std::string summary = summary_text(h, r);
  write_file(out / "summary.txt", summary);
  std::cout << summary;
  return 0;
}

int cmd_scenario(const Options& o) {
  game::DroneScenarioConfig cfg = game::scenario_from_json(read_json(o.config));
  if (o.tmax >= 0) cfg.tmax = o.tmax;

  pref::PrefSpec s1 = pref::parse_prefspec(read_file(o.spec1));
  pref::PrefSpec s2 =
      o.spec2.empty() ? s1 : pref::parse_prefspec(read_file(o.spec2));
  std::vector<std::string> ap = {"d1", "d2", "d3"};
  auto semi = pref::build_semi_automaton(s1.alternatives, ap, o.max_states);
  pref::PreferenceAutomaton a1 =
      pref::attach_preorder(semi, s1, policy_for(o, 1));
  pref::PreferenceAutomaton a2 =
      pref::attach_preorder(semi, s2, policy_for(o, 2));

  // The per-cell figures rate outcomes against the full automaton order,
  // not the ranks re-peeled over the states a particular cell can reach.
  RankMap full1 = rank_map(a1.order);
  RankMap full2 = rank_map(a2.order);

  auto eligible = [&](const game::Cell& c) {
    for (const auto& ob : cfg.obstacles)
      if (ob == c) return false;
    return true;
  };
  // Worst terminal rank the player cannot be pushed beyond (backward
  // induction with full-order sink ranks).
  auto guaranteed = [&](const prod::ProductGame& h, int player,
                        const RankMap& full) {
    std::vector<int> val(h.num_vertices());
    for (auto it = h.topo.rbegin(); it != h.topo.rend(); ++it) {
      int v = *it;
      if (h.is_sink(v)) {
        val[v] = full.rank[h.vq[v]];
        continue;
      }
      int best = h.owner(v) == player ? INT_MAX : INT_MIN;
      for (auto& [a, w] : h.trans[v])
        best = h.owner(v) == player ? std::min(best, val[w])
                                    : std::max(best, val[w]);
      val[v] = best;
    }
    return val[h.init];
  };
  auto best_rank = [&](const prod::ProductGame& h, int player,
                       const RankMap& full) {
    int best = INT_MAX;
    for (int v : h.sinks) best = std::min(best, full.rank[h.vq[v]]);
    return best;
  };
  auto metric = [&](const game::Cell& b) -> std::string {
    if (!eligible(b)) return "-1";
    game::DroneScenarioConfig c = cfg;
    c.drone_b = b;
    prod::ProductGame h =
        prod::build_product(game::build_drone_scenario(c), a1, a2);
    if (o.sweep == "maxrank") return std::to_string(best_rank(h, 1, full1));
    if (o.sweep == "guarantee")
      return std::to_string(guaranteed(h, 1, full1));
    if (o.sweep == "needs") {
      bool n1 = guaranteed(h, 1, full1) > best_rank(h, 1, full1);
      bool n2 = guaranteed(h, 2, full2) > best_rank(h, 2, full2);
      return std::string("(") + (n1 ? "T" : "F") + "|" + (n2 ? "T" : "F") + ")";
    }
    throw std::runtime_error("unknown sweep '" + o.sweep + "'");
  };

  std::ostringstream csv;
  for (int y = cfg.height - 1; y >= 0; --y) {  // row order mirrors the grid
    for (int x = 0; x < cfg.width; ++x) {
      if (x) csv << ",";
      csv << metric({x, y});
    }
    csv << "\n";
  }
  fs::path out(o.out);
  write_file(out / ("sweep_" + o.sweep + ".csv"), csv.str());
  std::cout << csv.str();
  return 0;
}

int cmd_check(const Options& o) {
  prod::ProductGame h = build_from_files(o);
  json pj = read_json(o.profile);
  if (!pj.is_array() || pj.size() != 2)
    throw std::runtime_error("profile file must hold [strategy1, strategy2]");
  solve::Strategy p1 = solve::strategy_from_json(h, pj[0]);
  solve::Strategy p2 = solve::strategy_from_json(h, pj[1]);
  if (p1.player != 1 || p2.player != 2)
    throw std::runtime_error("profile entries must be for players 1 and 2");
  solve::CheckResult res =
      solve::check_nash(h, p1, p2, solve::parse_attitude(o.attitude1),
                        solve::parse_attitude(o.attitude2), o.strict_opposite);
  std::cout << (res.nash ? "NASH" : "NOT-NASH") << ": " << res.explanation
            << "\n";
  return res.nash ? 0 : kExitNotNash;
}

int cmd_oracle(const Options& o) {
  prod::ProductGame h = build_from_files(o);
  oracle::Guard guard;
  guard.max_states = h.num_vertices();  // the profile cap is the real guard
  guard.max_branching = 64;
  guard.max_profiles = o.max_profiles;
  oracle::BruteForceResult strict = oracle::brute_force_nash(h, guard, true);
  solve::NashReport r =
      solve::solve(h, solve::parse_attitude(o.attitude1),
                   solve::parse_attitude(o.attitude2), o.strict_opposite);
  json out;
  out["strict"] = oracle::brute_force_to_json(h, strict);
  out["diff"] = oracle::diff_report(h, strict, r);
  if (o.both_readings) {
    oracle::BruteForceResult weak = oracle::brute_force_nash(h, guard, false);
    out["weak"] = oracle::brute_force_to_json(h, weak);
    out["reading_delta"] = {{"strict_nash", strict.nash_count},
                            {"weak_nash", weak.nash_count}};
  }
  fs::path outp(o.out);
  write_file(outp / "oracle.json", out.dump(2) + "\n");
  std::cout << out["diff"].dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Preference-based Nash equilibria for two-player turn games"};
  app.require_subcommand(1);
  Options o;

  auto add_specs = [&](CLI::App* c) {
    c->add_option("--spec1", o.spec1, "player 1 preference spec")->required();
    c->add_option("--spec2", o.spec2, "player 2 preference spec");
    c->add_option("--empty-policy", o.policy, "bottom|top|incomparable");
    c->add_option("--empty-policy1", o.policy1, "player-1 override");
    c->add_option("--empty-policy2", o.policy2, "player-2 override");
    c->add_option("--max-states", o.max_states, "DFA construction cap");
  };
  auto add_solving = [&](CLI::App* c) {
    c->add_option("--attitude1", o.attitude1, "cooperative|agnostic");
    c->add_option("--attitude2", o.attitude2, "cooperative|agnostic");
    c->add_flag("--strict-opposite", o.strict_opposite,
                "require E2 to be exactly the inverse of E1");
    c->add_option("--horizon", o.horizon, "unroll the game to this horizon");
  };
  app.add_option("--seed", o.seed, "seed for randomized tooling (reserved)");

  CLI::App* compile = app.add_subcommand("compile", "compile a preference spec");
  compile->add_option("prefspec", o.prefspec)->required();
  compile->add_option("--ap", o.ap, "atomic propositions")->delimiter(',');
  compile->add_option("--empty-policy", o.policy, "bottom|top|incomparable");
  compile->add_option("--max-states", o.max_states, "DFA construction cap");
  compile->add_option("--out", o.out, "output directory");

  CLI::App* solve_cmd = app.add_subcommand("solve", "solve a game");
  solve_cmd->add_option("game", o.game)->required();
  add_specs(solve_cmd);
  add_solving(solve_cmd);
  solve_cmd->add_option("--out", o.out, "output directory");

  CLI::App* scenario = app.add_subcommand("scenario", "drone-scenario sweeps");
  scenario->add_option("config", o.config)->required();
  add_specs(scenario);
  scenario->add_option("--sweep", o.sweep, "maxrank|guarantee|needs");
  scenario->add_option("--tmax", o.tmax, "clock budget override");
  scenario->add_option("--out", o.out, "output directory");

  CLI::App* check = app.add_subcommand("check", "check a strategy profile");
  check->add_option("game", o.game)->required();
  check->add_option("profile", o.profile)->required();
  add_specs(check);
  add_solving(check);

  CLI::App* oracle_cmd =
      app.add_subcommand("oracle", "brute-force Nash enumeration");
  oracle_cmd->add_option("game", o.game)->required();
  add_specs(oracle_cmd);
  add_solving(oracle_cmd);
  oracle_cmd->add_flag("--both-readings", o.both_readings,
                       "also run the weak deviation reading");
  oracle_cmd->add_option("--max-profiles", o.max_profiles, "enumeration cap");
  oracle_cmd->add_option("--out", o.out, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*compile) return cmd_compile(o);
    if (*solve_cmd) return cmd_solve(o);
    if (*scenario) return cmd_scenario(o);
    if (*check) return cmd_check(o);
    if (*oracle_cmd) return cmd_oracle(o);
  } catch (const prod::NonTerminatingError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNonTerminating;
  } catch (const prod::MismatchError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitMismatch;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  }
  return 0;
}
