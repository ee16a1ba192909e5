#include "relugame/network.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "relugame/rng.hpp"

namespace relugame {

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows * cols) {
    throw InputError("matrix data has " + std::to_string(data_.size()) + " entries, expected " +
                     std::to_string(rows * cols));
  }
}

std::vector<std::size_t> NetworkSpec::widths() const {
  std::vector<std::size_t> k;
  k.reserve(depth());
  for (const auto& layer : layers) k.push_back(layer.bias.size());
  if (!layers.empty()) k.push_back(input_width);
  return k;
}

std::size_t NetworkSpec::width(std::size_t l) const {
  if (l == 0 || l > depth()) throw InputError("layer index " + std::to_string(l) + " out of range");
  return l == depth() ? input_width : layers[l - 1].bias.size();
}

std::vector<Violation> validate(const NetworkSpec& spec) {
  std::vector<Violation> out;
  if (spec.layers.empty()) {
    out.push_back({0, "L >= 2 required (no weight layers)"});
    return out;
  }
  if (spec.input_width == 0) out.push_back({spec.depth(), "input width must be positive"});
  if (spec.activation.kind == Activation::softplus &&
      !(spec.activation.tau > 0.0 && std::isfinite(spec.activation.tau))) {
    out.push_back({0, "softplus activation requires tau > 0"});
  }
  const std::size_t L = spec.depth();
  for (std::size_t l = 1; l < L; ++l) {
    const Layer& layer = spec.layers[l - 1];
    const std::size_t k_next = (l + 1 == L) ? spec.input_width : spec.layers[l].bias.size();
    const std::string where = "layer " + std::to_string(l) + ": ";
    if (layer.bias.empty()) out.push_back({l, where + "width must be positive"});
    if (layer.weights.rows() != layer.bias.size()) {
      out.push_back({l, where + "W has " + std::to_string(layer.weights.rows()) +
                            " rows but b has length " + std::to_string(layer.bias.size())});
    }
    if (layer.weights.cols() != k_next) {
      out.push_back({l, where + "W has " + std::to_string(layer.weights.cols()) +
                            " columns but layer " + std::to_string(l + 1) + " has width " +
                            std::to_string(k_next)});
    }
    const auto finite = [](double v) { return std::isfinite(v); };
    if (!std::all_of(layer.weights.data().begin(), layer.weights.data().end(), finite) ||
        !std::all_of(layer.bias.begin(), layer.bias.end(), finite)) {
      out.push_back({l, where + "non-finite weight or bias"});
    }
  }
  return out;
}

void require_valid(const NetworkSpec& spec) {
  auto violations = validate(spec);
  if (!violations.empty()) throw InputError("invalid network: " + violations.front().message);
}

NetworkSpec from_input_first(std::vector<Layer> input_first_layers, ActivationKind activation) {
  NetworkSpec spec;
  spec.activation = activation;
  if (!input_first_layers.empty()) spec.input_width = input_first_layers.front().weights.cols();
  spec.layers.assign(std::make_move_iterator(input_first_layers.rbegin()),
                     std::make_move_iterator(input_first_layers.rend()));
  return spec;
}

namespace {

void check_input(const NetworkSpec& spec, std::span<const double> x) {
  require_valid(spec);
  if (x.size() != spec.input_width) {
    throw InputError("input has length " + std::to_string(x.size()) + ", network expects " +
                     std::to_string(spec.input_width));
  }
  for (double v : x) {
    if (!std::isfinite(v)) throw InputError("input contains a non-finite entry");
  }
}

template <class Act>
Activations forward(const NetworkSpec& spec, std::span<const double> x, Act act) {
  const std::size_t L = spec.depth();
  Activations out;
  out.layers.resize(L);
  out.layers[L - 1].assign(x.begin(), x.end());
  for (std::size_t l = L - 1; l >= 1; --l) {
    const Layer& layer = spec.layers[l - 1];
    const Vector& prev = out.layers[l];
    Vector& y = out.layers[l - 1];
    y.resize(layer.bias.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
      double z = 0.0;
      const auto row = layer.weights.row(i);
      for (std::size_t j = 0; j < row.size(); ++j) z += row[j] * prev[j];
      y[i] = act(z + layer.bias[i]);
    }
  }
  return out;
}

}  // namespace

Activations forward_relu(const NetworkSpec& spec, std::span<const double> x) {
  check_input(spec, x);
  return forward(spec, x, [](double z) { return std::max(z, 0.0); });
}

std::vector<Vector> relu_preactivations(const NetworkSpec& spec, std::span<const double> x) {
  const Activations act = forward_relu(spec, x);
  std::vector<Vector> z(spec.depth() - 1);
  for (std::size_t l = 1; l < spec.depth(); ++l) {
    const Layer& layer = spec.layer(l);
    const Vector& prev = act.at(l + 1);
    z[l - 1].resize(layer.bias.size());
    for (std::size_t i = 0; i < layer.bias.size(); ++i) {
      double s = 0.0;
      const auto row = layer.weights.row(i);
      for (std::size_t j = 0; j < row.size(); ++j) s += row[j] * prev[j];
      z[l - 1][i] = s + layer.bias[i];
    }
  }
  return z;
}

double softplus(double z, double tau) {
  // max(z, 0) + tau * log1p(exp(-|z| / tau)); exp never sees a positive argument.
  return std::max(z, 0.0) + tau * std::log1p(std::exp(-std::abs(z) / tau));
}

Activations forward_softplus(const NetworkSpec& spec, std::span<const double> x, double tau) {
  if (!(tau > 0.0) || !std::isfinite(tau)) throw InputError("softplus temperature must be > 0");
  check_input(spec, x);
  return forward(spec, x, [tau](double z) { return softplus(z, tau); });
}

NetworkSpec random_network(std::uint64_t seed, std::size_t depth,
                           std::span<const std::size_t> widths, double weight_scale) {
  if (depth < 2) throw InputError("random_network: depth must be at least 2");
  if (widths.size() != depth) throw InputError("random_network: need one width per layer");
  if (std::any_of(widths.begin(), widths.end(), [](std::size_t k) { return k == 0; })) {
    throw InputError("random_network: widths must be positive");
  }
  Rng rng(seed);
  std::vector<Layer> input_first;
  for (std::size_t m = 0; m + 1 < depth; ++m) {
    const std::size_t in = widths[m];
    const std::size_t out = widths[m + 1];
    Layer layer{Matrix(out, in), Vector(out)};
    for (std::size_t i = 0; i < out; ++i) {
      for (std::size_t j = 0; j < in; ++j) layer.weights(i, j) = rng.uniform(-weight_scale, weight_scale);
    }
    for (auto& b : layer.bias) b = rng.uniform(-weight_scale, weight_scale);
    input_first.push_back(std::move(layer));
  }
  return from_input_first(std::move(input_first));
}

}  // namespace relugame
