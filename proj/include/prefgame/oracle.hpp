#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "prefgame/product.hpp"
#include "prefgame/solve.hpp"

namespace prefgame::oracle {

struct OracleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Instance-size guard for exhaustive enumeration.
struct Guard {
  int max_states = 12;
  int max_branching = 3;
  unsigned long long max_profiles = 4'000'000;
  size_t max_stored = 20000;  // cap on retained witness profiles
};

/// A deterministic memoryless strategy as the index of the chosen edge in
/// trans[v] at each owned non-sink vertex; -1 elsewhere.
using Choice = std::vector<int8_t>;

solve::Strategy choice_to_strategy(const prod::ProductGame& h, int player,
                                   const Choice& c);

/// Play of a choice profile from the initial vertex (independent of the
/// solve module's machinery).
std::vector<int> play(const prod::ProductGame& h, const Choice& c1,
                      const Choice& c2);

struct BruteForceResult {
  std::vector<std::pair<Choice, Choice>> nash;  // truncated at max_stored
  bool truncated = false;
  std::vector<int> outcomes;  // sorted unique outcome sinks of Nash profiles
  unsigned long long profiles_checked = 0;
  unsigned long long nash_count = 0;
};

/// Exhaustive Def.-5 Nash test over all deterministic memoryless profiles.
/// With strict=true a profile is defeated only by a unilateral deviation
/// whose outcome is strictly preferred (incomparable deviations do not
/// defeat); strict=false applies the weak ⪰ reading of the deviation
/// clause, under which indifferent deviations also defeat.
BruteForceResult brute_force_nash(const prod::ProductGame& h,
                                  const Guard& guard = {}, bool strict = true);

/// Side-by-side comparison of the oracle's Nash outcome set and a solved
/// characterization; lists both sets and their symmetric difference.
nlohmann::json diff_report(const prod::ProductGame& h,
                           const BruteForceResult& oracle,
                           const solve::NashReport& solved);

nlohmann::json brute_force_to_json(const prod::ProductGame& h,
                                   const BruteForceResult& r);

}  // namespace prefgame::oracle
