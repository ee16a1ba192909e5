#pragma once

#include <span>
#include <vector>

#include "relugame/value.hpp"

namespace relugame {

/// Terminal reward with independent + and - parts: (L,i,+) -> x_i, (L,i,-) -> x'_i.
using BoundaryAssignment = TerminalReward;

BoundaryAssignment make_boundary(std::span<const double> plus, std::span<const double> minus);

/// Game value under a general boundary. The map (x, x') -> values is
/// order preserving; (x, -x) recovers the network.
ValueTable value_with_boundary(const GameGraph& graph, const BoundaryAssignment& boundary);

struct IntervalVector {
  Vector lower;
  Vector upper;

  std::size_t size() const { return lower.size(); }
  /// Throws InputError unless lower <= upper coordinate-wise and sizes agree.
  void check() const;
};

/// Interval per neuron and layer; layer(l) has k_l entries, layer(L) is the input box.
struct LayerIntervals {
  std::vector<IntervalVector> layers;  // layers[l - 1]

  const IntervalVector& layer(std::size_t l) const { return layers.at(l - 1); }
  const IntervalVector& output() const { return layers.front(); }
};

/// y^l_i lies in [V(lower, -upper), V(upper, -lower)] at (l, i, +) for every
/// input in the box. A box abstraction: sound, not tight.
LayerIntervals interval_propagate(const GameGraph& graph, const IntervalVector& box);

}  // namespace relugame
