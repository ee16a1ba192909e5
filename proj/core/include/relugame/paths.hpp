#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "relugame/value.hpp"

namespace relugame {

/// How a trajectory ends.
enum class PathEnd {
  stopped,   // the last state's owner stops (reward 0, no terminal payoff)
  terminal,  // the last state lies in layer L and pays the terminal reward
  absorbed,  // the last state continues but has no successors (gamma = 0 row)
};

/// A policy-compatible walk through the game: states[0] is the start, each
/// consecutive pair is a positive-probability edge, every state except the
/// last continues. len() is the number of moves.
struct Trajectory {
  std::vector<std::size_t> states;  // StateLayout indices
  PathEnd end = PathEnd::stopped;

  std::size_t len() const { return states.size() - 1; }
};

inline constexpr std::size_t kDefaultPathCap = 1'000'000;

/// All trajectories of the Markov chain induced by `pair` from `start`, in
/// depth-first order following transitions in canonical order. Throws
/// InputError when more than `cap` trajectories exist.
std::vector<Trajectory> enumerate_paths(const GameGraph& graph, const PolicyPair& pair,
                                        const StateKey& start,
                                        std::size_t cap = kDefaultPathCap);

/// Product of transition probabilities along the trajectory (1 for length 0).
double path_probability(const GameGraph& graph, const Trajectory& path);

/// Discounted rewards of the continuing states plus, on reaching layer L, the
/// fully discounted terminal reward.
double path_reward(const GameGraph& graph, const Trajectory& path,
                   const TerminalReward& terminal);

/// Sum over enumerated trajectories of probability * reward.
double value_by_enumeration(const GameGraph& graph, const PolicyPair& pair, const StateKey& start,
                            const TerminalReward& terminal, std::size_t cap = kDefaultPathCap);

struct BruteForceResult {
  double maxmin = 0.0;
  double minmax = 0.0;
  PolicyPair argmax_argmin;  // Max's maximin policy and Min's best response to it
  std::size_t pairs_evaluated = 0;
};

inline constexpr std::size_t kDefaultPolicyBitLimit = 20;

/// Exhaustive max over pi of min over sigma (and min-max) of the
/// enumerated value, over all deterministic pairs. Throws InputError when the
/// game has more than `bit_limit` interior states in total.
BruteForceResult maxmin_bruteforce(const GameGraph& graph, const StateKey& start,
                                   const TerminalReward& terminal,
                                   std::size_t bit_limit = kDefaultPolicyBitLimit,
                                   std::size_t cap = kDefaultPathCap);

struct MonteCarloResult {
  double estimate = 0.0;
  double standard_error = 0.0;
  std::size_t samples = 0;
};

/// Plain Monte-Carlo over sampled trajectories. Samples are split into fixed
/// shards of kMonteCarloShardSize, shard s drawing from Rng(seed, s), and shard
/// sums are merged in shard order, so the result depends only on the seed and
/// the sample count, not on `workers`.
MonteCarloResult monte_carlo_value(const GameGraph& graph, const PolicyPair& pair,
                                   const StateKey& start, const TerminalReward& terminal,
                                   std::size_t samples, std::uint64_t seed,
                                   unsigned workers = 1);

inline constexpr std::size_t kMonteCarloShardSize = 1 << 16;

}  // namespace relugame
