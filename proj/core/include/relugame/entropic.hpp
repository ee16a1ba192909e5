#pragma once

#include <span>
#include <vector>

#include "relugame/value.hpp"

namespace relugame {

/// Values of the entropy-regularized (Softplus) game at temperature tau.
/// `continuation` is Q = gamma * sum_j P V^{l+1}_tau + r at interior states.
struct EntropicValueTable {
  StateLayout layout;
  double tau = 0.0;
  std::vector<double> values;
  std::vector<double> continuation;

  double at(const StateKey& key) const { return values[layout.index(key)]; }
  double at(std::size_t l, std::size_t i, Sign s) const { return at(StateKey{l, i, s}); }
  double q(const StateKey& key) const { return continuation[layout.index(key)]; }
};

/// V_+ = tau log(1 + e^{Q/tau}) at Max states, V_- = -tau log(1 + e^{-Q/tau})
/// at Min states, evaluated without overflow down to tau ~ 1e-12.
EntropicValueTable entropic_value(const GameGraph& graph, const TerminalReward& terminal,
                                  double tau);

struct ActionProbabilities {
  double go = 0.5;    // continue
  double stop = 0.5;
};

/// Randomized stop/continue policy for both players, indexed by StateLayout.
/// Entries at terminal states and the cemetery are unused.
struct StochasticPolicy {
  StateLayout layout;
  std::vector<ActionProbabilities> actions;

  ActionProbabilities& at(const StateKey& key) { return actions[layout.index(key)]; }
  const ActionProbabilities& at(const StateKey& key) const { return actions[layout.index(key)]; }

  static StochasticPolicy uniform(const StateLayout& layout);
};

/// Continue probability e^{z}/(1+e^{z}) and its complement, each computed
/// directly so neither loses precision when the other saturates.
ActionProbabilities gibbs_probabilities(double q, double tau, Sign owner);

/// The optimal (Gibbs) policies: continue with probability sigmoid(Q/tau) at
/// Max states and sigmoid(-Q/tau) at Min states.
StochasticPolicy gibbs_policies(const GameGraph& graph, const TerminalReward& terminal, double tau);
StochasticPolicy gibbs_policies(const GameGraph& graph, const EntropicValueTable& values);

/// Regularized Kolmogorov recursion under a fixed randomized policy pair: the
/// action rewards are offset by -tau log p at Max states and +tau log p at Min
/// states, with 0 log 0 = 0. Throws InputError on probabilities outside [0, 1],
/// non-finite entries or rows that do not sum to 1.
EntropicValueTable entropic_value_given_policy(const GameGraph& graph,
                                               const TerminalReward& terminal, double tau,
                                               const StochasticPolicy& policy);

/// Shannon entropy of a two-action distribution.
double entropy(const ActionProbabilities& p);

/// Per interior state at the Gibbs policy: value = expected reward +/- tau * entropy.
struct FreeEnergyRow {
  StateKey key;
  double value = 0.0;
  double expected_reward = 0.0;  // p_continue * Q
  double entropy = 0.0;
};
std::vector<FreeEnergyRow> free_energy_report(const GameGraph& graph,
                                              const TerminalReward& terminal, double tau);

struct TauLimitRow {
  double tau = 0.0;
  // max over (l, i) of |V^l_{i+,tau} - V^l_{i+}|, computed by a recursion on the
  // difference so that it stays accurate far below the rounding unit of V.
  double max_deviation = 0.0;
  double envelope = 0.0;       // sum_l (prod_{m<l} max gamma^m) * tau log 2, diagnostic only
  bool finite = true;          // every entropic value was finite
};

struct TauLimitReport {
  std::vector<TauLimitRow> rows;
  bool strictly_decreasing() const;
  bool all_finite() const;
};

TauLimitReport tau_limit_report(const NetworkSpec& spec, std::span<const double> x,
                                std::span<const double> taus);

}  // namespace relugame
