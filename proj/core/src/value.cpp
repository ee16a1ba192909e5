#include "relugame/value.hpp"

#include <algorithm>
#include <cmath>

namespace relugame {

namespace detail {

enum class Move { stop, go, best };

// One backward sweep from layer L to layer 1. `choose(index, key)` says what
// the owner of an interior state does: a fixed move, or optimize its own payoff.
template <class Choose>
ValueTable sweep(const GameGraph& graph, const TerminalReward& terminal, Choose choose) {
  const StateLayout& layout = graph.layout();
  const std::size_t L = graph.depth();
  const std::size_t kL = layout.width(L);
  if (terminal.plus.size() != kL || terminal.minus.size() != kL) {
    throw InputError("terminal reward must cover all " + std::to_string(2 * kL) +
                     " layer-" + std::to_string(L) + " states");
  }
  ValueTable t{layout, std::vector<double>(layout.size(), 0.0),
               std::vector<double>(layout.size(), 0.0)};
  for (std::size_t i = 1; i <= kL; ++i) {
    t.values[layout.index(L, i, Sign::plus)] = terminal.plus[i - 1];
    t.values[layout.index(L, i, Sign::minus)] = terminal.minus[i - 1];
  }
  for (std::size_t l = L - 1; l >= 1; --l) {
    for (std::size_t i = 1; i <= layout.width(l); ++i) {
      for (Sign s : {Sign::plus, Sign::minus}) {
        const std::size_t idx = layout.index(l, i, s);
        const GameNode& n = graph.node(idx);
        double expected = 0.0;
        for (const Transition& tr : n.transitions) expected += tr.probability * t.values[tr.target];
        const double q = n.discount * expected + n.reward;
        t.continuation[idx] = q;
        switch (choose(idx, n.key)) {
          case Move::stop: t.values[idx] = 0.0; break;
          case Move::go: t.values[idx] = q; break;
          case Move::best: t.values[idx] = s == Sign::plus ? std::max(0.0, q) : std::min(0.0, q); break;
        }
      }
    }
  }
  return t;
}

}  // namespace detail

using detail::Move;

namespace {

Move fixed(const PlayerPolicy& p, const StateLayout& layout, const StateKey& k) {
  return p.continues(layout.interior_ordinal(k.layer, k.neuron)) ? Move::go : Move::stop;
}

void check_policy_size(const PlayerPolicy& p, const GameGraph& graph, const char* who) {
  if (p.bits.size() != graph.layout().interior_neurons()) {
    throw InputError(std::string(who) + " policy has " + std::to_string(p.bits.size()) +
                     " bits, game has " + std::to_string(graph.layout().interior_neurons()) +
                     " interior neurons");
  }
}

PlayerPolicy parse_bits(std::string_view text) {
  PlayerPolicy p;
  p.bits.reserve(text.size());
  for (char c : text) {
    if (c != '0' && c != '1') throw InputError("policy bits must be 0 or 1");
    p.bits.push_back(c == '1');
  }
  return p;
}

}  // namespace

ValueTable shapley_value(const GameGraph& graph, const TerminalReward& terminal) {
  return detail::sweep(graph, terminal, [](std::size_t, const StateKey&) { return Move::best; });
}

EquivalenceReport check_game_equivalence(const NetworkSpec& spec, std::span<const double> x,
                              double tolerance) {
  const Activations act = forward_relu(spec, x);
  const GameGraph graph = build_game(spec, {ZeroRowMode::lenient});
  const ValueTable v = shapley_value(graph, terminal_reward_from_input(graph, x));
  EquivalenceReport r;
  r.tolerance = tolerance;
  for (std::size_t l = 1; l <= spec.depth(); ++l) {
    for (std::size_t i = 1; i <= spec.width(l); ++i) {
      const double plus = v.at(l, i, Sign::plus);
      const double minus = v.at(l, i, Sign::minus);
      r.max_value_gap = std::max(r.max_value_gap, std::abs(plus - act.at(l)[i - 1]));
      r.max_antisymmetry_gap = std::max(r.max_antisymmetry_gap, std::abs(plus + minus));
    }
  }
  return r;
}

PlayerPolicy PlayerPolicy::parse(std::string_view text) { return parse_bits(text); }

std::string PlayerPolicy::to_string() const {
  std::string s;
  s.reserve(bits.size());
  for (auto b : bits) s.push_back(b ? '1' : '0');
  return s;
}

PolicyPair PolicyPair::parse(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) throw InputError("policy pair must look like \"pi/sigma\"");
  return {parse_bits(text.substr(0, slash)), parse_bits(text.substr(slash + 1))};
}

std::string PolicyPair::to_string() const { return max.to_string() + "/" + min.to_string(); }

PolicyPair optimal_policies(const GameGraph& graph, const ValueTable& values) {
  const StateLayout& layout = graph.layout();
  const std::size_t n = layout.interior_neurons();
  PolicyPair pair{PlayerPolicy::all(n, false), PlayerPolicy::all(n, false)};
  for (std::size_t l = 1; l < graph.depth(); ++l) {
    for (std::size_t i = 1; i <= layout.width(l); ++i) {
      const std::size_t ord = layout.interior_ordinal(l, i);
      pair.max.bits[ord] = values.q({l, i, Sign::plus}) >= 0.0;
      pair.min.bits[ord] = values.q({l, i, Sign::minus}) < 0.0;
    }
  }
  return pair;
}

PolicyPair optimal_policies(const GameGraph& graph, const TerminalReward& terminal) {
  return optimal_policies(graph, shapley_value(graph, terminal));
}

ValueTable fixed_pair_value(const GameGraph& graph, const TerminalReward& terminal,
                            const PolicyPair& pair) {
  check_policy_size(pair.max, graph, "Max");
  check_policy_size(pair.min, graph, "Min");
  const StateLayout& layout = graph.layout();
  return detail::sweep(graph, terminal, [&](std::size_t, const StateKey& k) {
    return fixed(k.sign == Sign::plus ? pair.max : pair.min, layout, k);
  });
}

ValueTable fixed_policy_value_max(const GameGraph& graph, const TerminalReward& terminal,
                                  const PlayerPolicy& pi) {
  check_policy_size(pi, graph, "Max");
  const StateLayout& layout = graph.layout();
  return detail::sweep(graph, terminal, [&](std::size_t, const StateKey& k) {
    return k.sign == Sign::plus ? fixed(pi, layout, k) : Move::best;
  });
}

ValueTable fixed_policy_value_min(const GameGraph& graph, const TerminalReward& terminal,
                                  const PlayerPolicy& sigma) {
  check_policy_size(sigma, graph, "Min");
  const StateLayout& layout = graph.layout();
  return detail::sweep(graph, terminal, [&](std::size_t, const StateKey& k) {
    return k.sign == Sign::minus ? fixed(sigma, layout, k) : Move::best;
  });
}

double lipschitz_bound(const NetworkSpec& spec) {
  require_valid(spec);
  double bound = 1.0;
  for (const Layer& layer : spec.layers) {
    double widest = 0.0;
    for (std::size_t i = 0; i < layer.weights.rows(); ++i) {
      double norm = 0.0;
      for (double w : layer.weights.row(i)) norm += std::abs(w);
      widest = std::max(widest, norm);
    }
    bound *= widest;
  }
  return bound;
}

std::string policy_fingerprint(const GameGraph& graph, const TerminalReward& terminal) {
  return optimal_policies(graph, terminal).max.to_string();
}

}  // namespace relugame
