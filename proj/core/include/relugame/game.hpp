#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "relugame/network.hpp"

namespace relugame {

enum class Sign { plus, minus };

inline Sign flip(Sign s) { return s == Sign::plus ? Sign::minus : Sign::plus; }
inline double sign_factor(Sign s) { return s == Sign::plus ? 1.0 : -1.0; }

/// A signed game state (l, i, +/-); layer and neuron are 1-based. The
/// + states belong to Max, the - states to Min.
struct StateKey {
  std::size_t layer = 0;
  std::size_t neuron = 0;
  Sign sign = Sign::plus;

  friend bool operator==(const StateKey&, const StateKey&) = default;
};

/// "2,1+" style label.
std::string to_string(const StateKey& key);

/// Canonical index of game states shared by graphs and value tables:
/// layer-major, then neuron, + before -, cemetery last.
class StateLayout {
 public:
  StateLayout() = default;
  /// widths = k_1..k_L (output first).
  explicit StateLayout(std::vector<std::size_t> widths);

  std::size_t depth() const { return widths_.size(); }
  std::size_t width(std::size_t l) const { return widths_.at(l - 1); }
  const std::vector<std::size_t>& widths() const { return widths_; }

  std::size_t signed_count() const { return offsets_.empty() ? 0 : offsets_.back(); }
  /// Signed states plus the cemetery.
  std::size_t size() const { return signed_count() + 1; }
  std::size_t cemetery() const { return signed_count(); }

  std::size_t index(const StateKey& key) const;
  std::size_t index(std::size_t layer, std::size_t neuron, Sign sign) const {
    return index(StateKey{layer, neuron, sign});
  }
  StateKey key(std::size_t index) const;

  /// Interior (non-terminal) neurons, i.e. those of layers 1..L-1, in canonical order.
  std::size_t interior_neurons() const;
  /// Position of an interior neuron in canonical order, used for policy bits.
  std::size_t interior_ordinal(std::size_t layer, std::size_t neuron) const;

  friend bool operator==(const StateLayout&, const StateLayout&) = default;

 private:
  std::vector<std::size_t> widths_;
  std::vector<std::size_t> offsets_;  // offsets_[l-1] = first index of layer l; back() = total
};

struct Transition {
  std::size_t target = 0;  // state index in the layout
  double probability = 0.0;
  double weight = 0.0;  // the W^l_ij that induced the edge
};

struct GameNode {
  StateKey key;
  double reward = 0.0;    // +b at Max states, -b at Min states, 0 at the input layer
  double discount = 0.0;  // gamma^l_i = sum_j |W^l_ij|
  std::vector<Transition> transitions;  // sorted by target neuron; zero weights omitted
  bool terminal = false;                // layer-L state
};

enum class ZeroRowMode {
  strict,   // a row with gamma = 0 is an error
  lenient,  // the state is kept with gamma = 0 and no transitions
};

struct BuildOptions {
  ZeroRowMode zero_rows = ZeroRowMode::strict;
};

/// The two-player turn-based stopping game of a ReLU network. Immutable after
/// construction.
class GameGraph {
 public:
  const StateLayout& layout() const { return layout_; }
  std::size_t depth() const { return layout_.depth(); }
  std::size_t width(std::size_t l) const { return layout_.width(l); }

  const GameNode& node(std::size_t index) const { return nodes_.at(index); }
  const GameNode& node(const StateKey& key) const { return nodes_.at(layout_.index(key)); }
  std::span<const GameNode> nodes() const { return nodes_; }

  /// Bias b^l_i recovered from the + state's reward.
  double bias(std::size_t l, std::size_t i) const { return node({l, i, Sign::plus}).reward; }

  /// Probability of the edge (l, i, from) -> (l+1, j, to); 0 when absent.
  double probability(const StateKey& from, const StateKey& to) const;

 private:
  friend GameGraph build_game(const NetworkSpec&, const BuildOptions&);
  StateLayout layout_;
  std::vector<GameNode> nodes_;  // includes the cemetery as the last node
};

GameGraph build_game(const NetworkSpec& spec, const BuildOptions& options = {});

/// Reward collected on reaching a layer-L state. The standard assignment is
/// antisymmetric, (L,i,+) -> x_i and (L,i,-) -> -x_i; general boundaries may not be.
struct TerminalReward {
  Vector plus;
  Vector minus;

  double at(std::size_t neuron, Sign s) const {
    return s == Sign::plus ? plus.at(neuron - 1) : minus.at(neuron - 1);
  }
};

TerminalReward terminal_reward_from_input(const GameGraph& graph, std::span<const double> x);

/// Graphviz rendering: circles for states, dashed stop edges to the cemetery
/// labeled with their reward, continue-reward shown under each node, transition
/// edges labeled with their probability (as a reduced fraction when the
/// weights are integers), terminal states labeled x_i / -x_i.
std::string export_dot(const GameGraph& graph);

}  // namespace relugame
