#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "relugame/game.hpp"

namespace relugame {

/// Value of every game state for one terminal reward, indexed by StateLayout.
/// `continuation` holds Q = gamma * sum_j P V^{l+1} + r, the payoff of the
/// continue action, at interior states (0 at terminal states and the cemetery).
struct ValueTable {
  StateLayout layout;
  std::vector<double> values;
  std::vector<double> continuation;

  double at(const StateKey& key) const { return values[layout.index(key)]; }
  double at(std::size_t l, std::size_t i, Sign s) const { return at(StateKey{l, i, s}); }
  double q(const StateKey& key) const { return continuation[layout.index(key)]; }
};

/// Shapley-Bellman backward recursion: max(0, Q) at Max states, min(0, Q) at
/// Min states, boundary from `terminal`. No antisymmetry is assumed.
ValueTable shapley_value(const GameGraph& graph, const TerminalReward& terminal);

struct EquivalenceReport {
  double max_value_gap = 0.0;         // max |V^l_{i+} - y^l_i|
  double max_antisymmetry_gap = 0.0;  // max |V^l_{i+} + V^l_{i-}|
  double tolerance = 1e-9;
  bool pass() const { return max_value_gap <= tolerance && max_antisymmetry_gap <= tolerance; }
};

/// Compares the game value with the ReLU forward pass at every neuron. Zero
/// weight rows are accepted (lenient game construction).
EquivalenceReport check_game_equivalence(const NetworkSpec& spec, std::span<const double> x,
                              double tolerance = 1e-9);

/// Deterministic stop(0)/continue(1) choices of one player, one bit per
/// interior neuron in canonical order: layer 1 first, then by neuron.
struct PlayerPolicy {
  std::vector<std::uint8_t> bits;

  static PlayerPolicy all(std::size_t n, bool cont) { return {std::vector<std::uint8_t>(n, cont)}; }
  static PlayerPolicy parse(std::string_view text);
  std::string to_string() const;
  bool continues(std::size_t ordinal) const { return bits.at(ordinal) != 0; }

  friend bool operator==(const PlayerPolicy&, const PlayerPolicy&) = default;
};

/// Max's policy on the + states and Min's on the - states. Text form "pi/sigma",
/// e.g. "111/000".
struct PolicyPair {
  PlayerPolicy max;
  PlayerPolicy min;

  static PolicyPair parse(std::string_view text);
  std::string to_string() const;

  friend bool operator==(const PolicyPair&, const PolicyPair&) = default;
};

/// Policies attaining the value: a player continues exactly when continuing
/// beats stopping for it. Ties (Q = 0) go to continue for Max and stop for Min.
/// Under the standard terminal reward Max continues iff the neuron's
/// pre-activation is >= 0 and Min continues iff it is > 0.
PolicyPair optimal_policies(const GameGraph& graph, const TerminalReward& terminal);
PolicyPair optimal_policies(const GameGraph& graph, const ValueTable& values);

/// Kolmogorov recursion for a fixed pair: V = Q where the owner continues, 0 where it stops.
ValueTable fixed_pair_value(const GameGraph& graph, const TerminalReward& terminal,
                            const PolicyPair& pair);

/// f^pi: Max follows pi, Min best-responds (one backward sweep). Concave in x.
ValueTable fixed_policy_value_max(const GameGraph& graph, const TerminalReward& terminal,
                                  const PlayerPolicy& pi);

/// ^sigma f: Min follows sigma, Max best-responds. Convex in x.
ValueTable fixed_policy_value_min(const GameGraph& graph, const TerminalReward& terminal,
                                  const PlayerPolicy& sigma);

/// Product over weight layers of the largest row 1-norm; bounds the sup-norm
/// Lipschitz constant of the network.
double lipschitz_bound(const NetworkSpec& spec);

/// Max's optimal bits as a string; constant on each linearity region away from ties.
std::string policy_fingerprint(const GameGraph& graph, const TerminalReward& terminal);

}  // namespace relugame
