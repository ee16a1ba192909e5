#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace relugame {

using Vector = std::vector<double>;

/// Thrown when an input does not satisfy an operation's preconditions
/// (dimension mismatch, non-finite entries, bad temperature, ...).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Dense row-major matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<const double> row(std::size_t i) const {
    return {data_.data() + i * cols_, cols_};
  }
  const std::vector<double>& data() const { return data_; }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

enum class Activation { relu, softplus };

struct ActivationKind {
  Activation kind = Activation::relu;
  double tau = 0.0;  // meaningful only for softplus

  friend bool operator==(const ActivationKind&, const ActivationKind&) = default;
};

/// One affine layer y^l = act(W^l y^{l+1} + b^l). W has k_l rows and k_{l+1} columns.
struct Layer {
  Matrix weights;
  Vector bias;

  friend bool operator==(const Layer&, const Layer&) = default;
};

/// A feed-forward network indexed from the output backwards: layers[0] holds
/// (W^1, b^1) producing the output y^1, and layers.back() consumes the input
/// y^L. The depth L counts neuron layers, so layers.size() == L - 1 and
/// widths() == (k_1, ..., k_L) with k_L the input dimension.
struct NetworkSpec {
  std::vector<Layer> layers;
  std::size_t input_width = 0;
  ActivationKind activation;

  std::size_t depth() const { return layers.empty() ? 0 : layers.size() + 1; }
  /// k_1..k_L, output first.
  std::vector<std::size_t> widths() const;
  /// k_l for 1 <= l <= L.
  std::size_t width(std::size_t l) const;
  std::size_t input_dim() const { return input_width; }
  std::size_t output_dim() const { return layers.empty() ? 0 : layers.front().bias.size(); }
  /// (W^l, b^l) for 1 <= l < L.
  const Layer& layer(std::size_t l) const { return layers.at(l - 1); }

  friend bool operator==(const NetworkSpec&, const NetworkSpec&) = default;
};

struct Violation {
  std::size_t layer = 0;  // layer index (1 = output), 0 when not layer specific
  std::string message;
};

/// Checks every structural invariant. An empty result means the spec is usable.
std::vector<Violation> validate(const NetworkSpec& spec);

/// Throws InputError carrying the first violation, if any.
void require_valid(const NetworkSpec& spec);

/// Builds a spec from layers given input-first, the way most exports store them.
NetworkSpec from_input_first(std::vector<Layer> input_first_layers,
                             ActivationKind activation = {});

/// Per-layer activations of a forward pass; at(l) is y^l, at(L) is the input.
struct Activations {
  std::vector<Vector> layers;  // layers[l - 1] == y^l

  const Vector& at(std::size_t l) const { return layers.at(l - 1); }
  const Vector& output() const { return layers.front(); }
};

/// y^l = max(W^l y^{l+1} + b^l, 0) with y^L = x.
Activations forward_relu(const NetworkSpec& spec, std::span<const double> x);

/// Pre-activations z^l = W^l y^{l+1} + b^l of the ReLU pass; at(l) for l < L.
std::vector<Vector> relu_preactivations(const NetworkSpec& spec, std::span<const double> x);

/// tau * log(1 + exp(z / tau)), evaluated without overflow for any finite z.
double softplus(double z, double tau);

/// Softplus forward pass at temperature tau > 0.
Activations forward_softplus(const NetworkSpec& spec, std::span<const double> x, double tau);

/// Deterministic random network. `widths` is input-first (k_L, ..., k_1) and
/// its size is the depth. Entries are uniform in [-weight_scale, weight_scale],
/// drawn from std::mt19937_64 in the order: layers input-first, weights
/// row-major, then biases.
NetworkSpec random_network(std::uint64_t seed, std::size_t depth,
                           std::span<const std::size_t> widths, double weight_scale);

}  // namespace relugame
