#include <cmath>
#include <cstring>
#include <filesystem>

#include "doctest.h"
#include "testing.hpp"

using namespace relugame;
using relugame::testing::example_network;
using relugame::testing::single_neuron;

TEST_CASE("validate accepts the worked example") {
  CHECK(validate(example_network()).empty());
}

TEST_CASE("validate reports a bias/width mismatch") {
  NetworkSpec spec = example_network();
  spec.layers[0].bias = {7, 1};  // k_1 = 1 but b^1 has length 2
  const auto v = validate(spec);
  REQUIRE(v.size() == 1);
  CHECK(v[0].layer == 1);
}

TEST_CASE("validate rejects an empty layer list") {
  const auto v = validate(NetworkSpec{});
  REQUIRE(v.size() == 1);
  CHECK(v[0].message.find("L >= 2") != std::string::npos);
}

TEST_CASE("validate reports chained column mismatch and non-finite entries") {
  NetworkSpec spec = example_network();
  spec.layers[0].weights = Matrix(1, 3, {1, 2, 3});
  spec.layers[1].bias[0] = std::nan("");
  const auto v = validate(spec);
  CHECK(v.size() == 2);
}

TEST_CASE("validate requires tau > 0 for softplus") {
  NetworkSpec spec = example_network();
  spec.activation = {Activation::softplus, 0.0};
  CHECK(validate(spec).size() == 1);
  spec.activation.tau = 0.5;
  CHECK(validate(spec).empty());
}

TEST_CASE("forward_relu on the worked example") {
  const NetworkSpec net = example_network();
  SUBCASE("x = (10, 10)") {
    // y2 = (max(70-80+42, 0), max(-10-20+33, 0)) = (32, 3); y1 = max(7+64-15, 0) = 56
    const Activations a = forward_relu(net, std::vector<double>{10, 10});
    CHECK(a.at(2) == Vector{32, 3});
    CHECK(a.output() == Vector{56});
    CHECK(a.at(3) == Vector{10, 10});
  }
  SUBCASE("x = (0, 0)") {
    const Activations a = forward_relu(net, std::vector<double>{0, 0});
    CHECK(a.at(2) == Vector{42, 33});
    CHECK(a.output() == Vector{0});  // max(7 + 84 - 165, 0)
  }
}

TEST_CASE("forward_relu of the zero network is zero") {
  std::vector<Layer> layers;
  layers.push_back({Matrix(3, 2), Vector(3)});
  layers.push_back({Matrix(2, 3), Vector(2)});
  const NetworkSpec zero = from_input_first(std::move(layers));
  const Activations a = forward_relu(zero, std::vector<double>{5, -4});
  CHECK(a.output() == Vector{0, 0});
}

TEST_CASE("forward passes reject bad inputs") {
  const NetworkSpec net = example_network();
  CHECK_THROWS_AS(forward_relu(net, std::vector<double>{1}), InputError);
  CHECK_THROWS_AS(forward_relu(net, std::vector<double>{1, INFINITY}), InputError);
  CHECK_THROWS_AS(forward_softplus(net, std::vector<double>{1, 1}, 0.0), InputError);
  CHECK_THROWS_AS(forward_softplus(net, std::vector<double>{1, 1}, -1.0), InputError);
}

TEST_CASE("forward_softplus") {
  CHECK(forward_softplus(single_neuron(1, 0), std::vector<double>{0}, 1.0).output()[0] ==
        doctest::Approx(std::log(2.0)).epsilon(1e-15));
  CHECK(std::abs(forward_softplus(single_neuron(1, 0), std::vector<double>{100}, 0.01).output()[0] -
                 100.0) < 1e-9);
  CHECK(std::abs(forward_softplus(example_network(), std::vector<double>{10, 10}, 1e-4).output()[0] -
                 56.0) < 1e-2);
}

TEST_CASE("softplus is finite for extreme arguments") {
  for (double tau : {1.0, 1e-6, 1e-12}) {
    for (double z : {-1e300, -1e3, -1.0, 0.0, 1.0, 1e3, 1e300}) {
      const double s = softplus(z, tau);
      CHECK(std::isfinite(s));
      CHECK(s >= std::max(z, 0.0));
    }
  }
  CHECK(softplus(0.0, 1e-12) == doctest::Approx(1e-12 * std::log(2.0)));
}

TEST_CASE("random_network is deterministic and valid") {
  const std::size_t w11[] = {1, 1};
  const NetworkSpec a = random_network(0, 2, w11, 1.0);
  CHECK(validate(a).empty());
  CHECK(a == random_network(0, 2, w11, 1.0));
  CHECK_FALSE(a == random_network(1, 2, w11, 1.0));

  const std::size_t widths[] = {3, 4, 2};
  const NetworkSpec b = random_network(7, 3, widths, 2.0);
  CHECK(b.widths() == std::vector<std::size_t>{2, 4, 3});
  for (const Layer& l : b.layers) {
    for (double w : l.weights.data()) CHECK(std::abs(w) <= 2.0);
  }
  CHECK_THROWS_AS(random_network(0, 3, w11, 1.0), InputError);
}

TEST_CASE("network file round trip is bit exact") {
  Rng rng(42);
  for (int trial = 0; trial < 20; ++trial) {
    NetworkSpec spec = relugame::testing::random_shape_network(rng, 2, 5, 6, 3.0);
    if (trial % 3 == 0) spec.activation = {Activation::softplus, rng.uniform(0.01, 2.0)};
    const std::string text = serialize_network(spec);
    const NetworkSpec back = parse_network(text);
    REQUIRE(back.layers.size() == spec.layers.size());
    for (std::size_t l = 0; l < spec.layers.size(); ++l) {
      const auto& x = spec.layers[l].weights.data();
      const auto& y = back.layers[l].weights.data();
      CHECK(std::memcmp(x.data(), y.data(), x.size() * sizeof(double)) == 0);
      CHECK(std::memcmp(spec.layers[l].bias.data(), back.layers[l].bias.data(),
                        spec.layers[l].bias.size() * sizeof(double)) == 0);
    }
    CHECK(back == spec);
    CHECK(serialize_network(back) == text);
  }
}

TEST_CASE("network file is stored input-first") {
  const NetworkSpec net = load_network(std::filesystem::path(RELUGAME_TEST_DATA_DIR) / "example.net");
  CHECK(net == example_network());
  CHECK(net.depth() == 3);
  CHECK(net.layer(2).bias == Vector{42, 33});
  CHECK(net.layer(1).weights == Matrix(1, 2, {2, -5}));
}

TEST_CASE("network file errors") {
  CHECK_THROWS_AS(parse_network("{"), InputError);
  CHECK_THROWS_AS(parse_network(R"({"layers": []})"), InputError);
  CHECK_THROWS_AS(parse_network(R"({"layers": [{"W": [[1, 2], [3]], "b": [0, 0]}]})"), InputError);
  CHECK_THROWS_AS(parse_network(R"({"activation": "tanh", "layers": [{"W": [[1]], "b": [0]}]})"),
                  InputError);
  CHECK_THROWS_AS(
      parse_network(R"({"widths": [2, 1], "layers": [{"W": [[1]], "b": [0]}]})"), InputError);
  // Structurally broken but syntactically fine: the unchecked parser hands it to validate().
  const NetworkSpec bad =
      parse_network_unchecked(R"({"layers": [{"W": [[1, 2]], "b": [0, 0]}]})");
  CHECK_FALSE(validate(bad).empty());
}

TEST_CASE("output is non-negative and softplus strictly positive") {
  Rng rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const NetworkSpec spec = relugame::testing::random_shape_network(rng, 2, 5, 6, 2.0);
    const Vector x = relugame::testing::random_vector(rng, spec.input_dim(), -3, 3);
    const Activations relu = forward_relu(spec, x);
    const Activations soft = forward_softplus(spec, x, 0.5);
    for (double y : relu.output()) CHECK(y >= 0.0);
    for (double y : soft.output()) CHECK(y > 0.0);
  }
}

TEST_CASE("softplus approaches relu monotonically as tau shrinks") {
  Rng rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const NetworkSpec spec = relugame::testing::random_shape_network(rng, 2, 4, 4, 1.0);
    const Vector x = relugame::testing::random_vector(rng, spec.input_dim(), -1, 1);
    const Vector relu = forward_relu(spec, x).output();
    double previous = INFINITY;
    for (double tau : {1.0, 0.1, 0.01, 0.001}) {
      const Vector soft = forward_softplus(spec, x, tau).output();
      const double gap = relugame::testing::max_abs_diff(soft, relu);
      CHECK(gap <= previous);
      previous = gap;
    }
  }
}

TEST_CASE("relu network is piecewise linear along random lines") {
  Rng rng(5);
  int checked = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const NetworkSpec spec = relugame::testing::random_shape_network(rng, 2, 5, 5, 1.0);
    const Vector x = relugame::testing::random_vector(rng, spec.input_dim(), -1, 1);
    const Vector d = relugame::testing::random_vector(rng, spec.input_dim(), -1, 1);
    // Stay clear of activation boundaries so the three samples share a linear piece.
    const double eps = 1e-6;
    bool near_boundary = false;
    for (const Vector& z : relu_preactivations(spec, x)) {
      for (double v : z) near_boundary |= std::abs(v) < 1e-3;
    }
    if (near_boundary) continue;
    auto at = [&](double t) {
      Vector p = x;
      for (std::size_t i = 0; i < p.size(); ++i) p[i] += t * d[i];
      return forward_relu(spec, p).output();
    };
    const Vector a = at(-eps), b = at(0.0), c = at(eps);
    for (std::size_t i = 0; i < b.size(); ++i) {
      CHECK(std::abs((a[i] + c[i]) / 2 - b[i]) <= 1e-9);
    }
    ++checked;
  }
  CHECK(checked > 100);
}
