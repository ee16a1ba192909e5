#include "relugame/game.hpp"

#include <charconv>
#include <cmath>
#include <numeric>
#include <sstream>

namespace relugame {

std::string to_string(const StateKey& key) {
  return std::to_string(key.layer) + "," + std::to_string(key.neuron) +
         (key.sign == Sign::plus ? "+" : "-");
}

StateLayout::StateLayout(std::vector<std::size_t> widths) : widths_(std::move(widths)) {
  offsets_.reserve(widths_.size() + 1);
  std::size_t total = 0;
  for (std::size_t k : widths_) {
    offsets_.push_back(total);
    total += 2 * k;
  }
  offsets_.push_back(total);
}

std::size_t StateLayout::index(const StateKey& key) const {
  if (key.layer == 0 || key.layer > depth() || key.neuron == 0 || key.neuron > width(key.layer)) {
    throw InputError("state " + to_string(key) + " does not exist");
  }
  return offsets_[key.layer - 1] + 2 * (key.neuron - 1) + (key.sign == Sign::minus ? 1 : 0);
}

StateKey StateLayout::key(std::size_t index) const {
  if (index >= signed_count()) throw InputError("state index is the cemetery or out of range");
  std::size_t l = 1;
  while (offsets_[l] <= index) ++l;
  const std::size_t rel = index - offsets_[l - 1];
  return {l, rel / 2 + 1, (rel % 2) ? Sign::minus : Sign::plus};
}

std::size_t StateLayout::interior_neurons() const {
  return depth() == 0 ? 0 : offsets_[depth() - 1] / 2;
}

std::size_t StateLayout::interior_ordinal(std::size_t layer, std::size_t neuron) const {
  if (layer == 0 || layer >= depth() || neuron == 0 || neuron > width(layer)) {
    throw InputError("(" + std::to_string(layer) + "," + std::to_string(neuron) +
                     ") is not an interior neuron");
  }
  return offsets_[layer - 1] / 2 + (neuron - 1);
}

double GameGraph::probability(const StateKey& from, const StateKey& to) const {
  const std::size_t target = layout_.index(to);
  for (const auto& t : node(from).transitions) {
    if (t.target == target) return t.probability;
  }
  return 0.0;
}

GameGraph build_game(const NetworkSpec& spec, const BuildOptions& options) {
  require_valid(spec);
  GameGraph g;
  g.layout_ = StateLayout(spec.widths());
  const StateLayout& layout = g.layout_;
  const std::size_t L = spec.depth();
  g.nodes_.resize(layout.size());

  for (std::size_t l = 1; l <= L; ++l) {
    for (std::size_t i = 1; i <= layout.width(l); ++i) {
      for (Sign s : {Sign::plus, Sign::minus}) {
        GameNode& n = g.nodes_[layout.index(l, i, s)];
        n.key = {l, i, s};
        if (l == L) {
          n.terminal = true;
          continue;
        }
        const Layer& layer = spec.layer(l);
        const auto row = layer.weights.row(i - 1);
        double gamma = 0.0;
        for (double w : row) gamma += std::abs(w);
        if (gamma == 0.0 && options.zero_rows == ZeroRowMode::strict) {
          throw InputError("zero weight row at (" + std::to_string(l) + "," + std::to_string(i) +
                           ")");
        }
        n.discount = gamma;
        n.reward = sign_factor(s) * layer.bias[i - 1];
        for (std::size_t j = 0; j < row.size(); ++j) {
          const double w = row[j];
          if (w == 0.0) continue;
          // A positive weight keeps the mover, a negative one hands the turn over.
          const Sign to = w > 0.0 ? s : flip(s);
          n.transitions.push_back({layout.index(l + 1, j + 1, to), std::abs(w) / gamma, w});
        }
      }
    }
  }
  g.nodes_.back().key = {0, 0, Sign::plus};
  return g;
}

TerminalReward terminal_reward_from_input(const GameGraph& graph, std::span<const double> x) {
  const std::size_t k = graph.width(graph.depth());
  if (x.size() != k) {
    throw InputError("input has length " + std::to_string(x.size()) + ", game expects " +
                     std::to_string(k));
  }
  TerminalReward t;
  t.plus.assign(x.begin(), x.end());
  t.minus.resize(k);
  for (std::size_t i = 0; i < k; ++i) t.minus[i] = -x[i];
  return t;
}

namespace {

std::string shortest(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

bool small_integer(double v) { return std::abs(v) < 0x1p53 && std::floor(v) == v; }

std::string probability_label(double weight_abs, double gamma, double probability) {
  if (small_integer(weight_abs) && small_integer(gamma)) {
    auto num = static_cast<long long>(weight_abs);
    auto den = static_cast<long long>(gamma);
    const long long d = std::gcd(num, den);
    num /= d;
    den /= d;
    if (den == 1) return std::to_string(num);
    return std::to_string(num) + "/" + std::to_string(den);
  }
  return shortest(probability);
}

}  // namespace

std::string export_dot(const GameGraph& graph) {
  std::ostringstream out;
  const StateLayout& layout = graph.layout();
  out << "digraph relu_game {\n";
  out << "  rankdir=LR;\n";
  out << "  node [shape=circle];\n";
  out << "  \"cemetery\" [shape=doublecircle, label=\"⊥\"];\n";
  for (const GameNode& n : graph.nodes()) {
    if (n.key.layer == 0) continue;
    const std::string name = to_string(n.key);
    if (n.terminal) {
      const std::string x = (n.key.sign == Sign::plus ? "x" : "-x") + std::to_string(n.key.neuron);
      out << "  \"" << name << "\" [shape=box, label=\"" << x << "\"];\n";
    } else {
      out << "  \"" << name << "\" [label=\"" << name << "\", xlabel=\"" << shortest(n.reward)
          << "\"];\n";
    }
  }
  for (const GameNode& n : graph.nodes()) {
    if (n.key.layer == 0 || n.terminal) continue;
    const std::string name = to_string(n.key);
    out << "  \"" << name << "\" -> \"cemetery\" [style=dashed, label=\"0\"];\n";
    for (const Transition& t : n.transitions) {
      const StateKey to = layout.key(t.target);
      out << "  \"" << name << "\" -> \"" << to_string(to) << "\" [label=\""
          << probability_label(std::abs(t.weight), n.discount, t.probability) << "\"];\n";
    }
  }
  out << "}\n";
  return out.str();
}

}  // namespace relugame
