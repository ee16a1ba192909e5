#include "relugame/bounds.hpp"

#include <cmath>

namespace relugame {

BoundaryAssignment make_boundary(std::span<const double> plus, std::span<const double> minus) {
  if (plus.size() != minus.size()) throw InputError("boundary halves differ in length");
  for (double v : plus) {
    if (!std::isfinite(v)) throw InputError("boundary contains a non-finite value");
  }
  for (double v : minus) {
    if (!std::isfinite(v)) throw InputError("boundary contains a non-finite value");
  }
  return {Vector(plus.begin(), plus.end()), Vector(minus.begin(), minus.end())};
}

ValueTable value_with_boundary(const GameGraph& graph, const BoundaryAssignment& boundary) {
  return shapley_value(graph, boundary);
}

void IntervalVector::check() const {
  if (lower.size() != upper.size()) throw InputError("interval bounds differ in length");
  for (std::size_t i = 0; i < lower.size(); ++i) {
    if (!std::isfinite(lower[i]) || !std::isfinite(upper[i])) {
      throw InputError("interval bound is not finite");
    }
    if (lower[i] > upper[i]) {
      throw InputError("interval " + std::to_string(i + 1) + " has lower > upper");
    }
  }
}

LayerIntervals interval_propagate(const GameGraph& graph, const IntervalVector& box) {
  box.check();
  const std::size_t L = graph.depth();
  if (box.size() != graph.width(L)) {
    throw InputError("box has dimension " + std::to_string(box.size()) + ", network expects " +
                     std::to_string(graph.width(L)));
  }
  Vector neg_lower(box.size()), neg_upper(box.size());
  for (std::size_t i = 0; i < box.size(); ++i) {
    neg_lower[i] = -box.lower[i];
    neg_upper[i] = -box.upper[i];
  }
  const ValueTable lo = value_with_boundary(graph, make_boundary(box.lower, neg_upper));
  const ValueTable hi = value_with_boundary(graph, make_boundary(box.upper, neg_lower));

  LayerIntervals out;
  out.layers.resize(L);
  for (std::size_t l = 1; l <= L; ++l) {
    IntervalVector& iv = out.layers[l - 1];
    for (std::size_t i = 1; i <= graph.width(l); ++i) {
      iv.lower.push_back(lo.at(l, i, Sign::plus));
      iv.upper.push_back(hi.at(l, i, Sign::plus));
    }
  }
  return out;
}

}  // namespace relugame
