#include "doctest.h"
#include "testing.hpp"

using namespace relugame;
using relugame::testing::example_network;
using relugame::testing::random_shape_network;
using relugame::testing::random_vector;

namespace {

struct Instance {
  NetworkSpec spec;
  GameGraph graph;
  Vector x;
  TerminalReward terminal;
};

Instance random_instance(Rng& rng, std::size_t max_depth = 5, std::size_t max_width = 6) {
  Instance inst;
  inst.spec = random_shape_network(rng, 2, max_depth, max_width, 2.0);
  inst.graph = build_game(inst.spec);
  inst.x = random_vector(rng, inst.spec.input_dim(), -2, 2);
  inst.terminal = terminal_reward_from_input(inst.graph, inst.x);
  return inst;
}

}  // namespace

TEST_CASE("entropic value equals the softplus network") {
  Rng rng(50);
  for (int trial = 0; trial < 100; ++trial) {
    const Instance inst = random_instance(rng);
    for (double tau : {1.0, 0.1, 0.01}) {
      const EntropicValueTable v = entropic_value(inst.graph, inst.terminal, tau);
      const Activations a = forward_softplus(inst.spec, inst.x, tau);
      for (std::size_t l = 1; l < inst.spec.depth(); ++l) {
        for (std::size_t i = 1; i <= a.at(l).size(); ++i) {
          CHECK(std::abs(v.at(l, i, Sign::plus) - a.at(l)[i - 1]) <= 1e-9);
          CHECK(std::abs(v.at(l, i, Sign::minus) + a.at(l)[i - 1]) <= 1e-9);
        }
      }
    }
  }
}

TEST_CASE("entropic value of the worked example") {
  const GameGraph g = build_game(example_network());
  const auto t = terminal_reward_from_input(g, std::vector<double>{10, 10});
  const EntropicValueTable v = entropic_value(g, t, 1.0);
  CHECK(v.at(2, 2, Sign::plus) == doctest::Approx(std::log1p(std::exp(3.0))));
  CHECK_THROWS_AS(entropic_value(g, t, 0.0), InputError);
  // Tiny temperatures stay finite and reduce to the ReLU game.
  const EntropicValueTable cold = entropic_value(g, t, 1e-12);
  CHECK(std::abs(cold.at(1, 1, Sign::plus) - 56) <= 1e-9);
}

TEST_CASE("Gibbs probabilities") {
  const ActionProbabilities p = gibbs_probabilities(0.0, 1.0, Sign::plus);
  CHECK(p.go == 0.5);
  CHECK(p.stop == 0.5);
  const ActionProbabilities hot = gibbs_probabilities(2.0, 1.0, Sign::plus);
  CHECK(hot.go == doctest::Approx(1 / (1 + std::exp(-2.0))));
  const ActionProbabilities min = gibbs_probabilities(2.0, 1.0, Sign::minus);
  CHECK(min.go == doctest::Approx(hot.stop));
  // Saturation keeps the small side exact instead of rounding it to 0 via 1 - p.
  const ActionProbabilities sat = gibbs_probabilities(50.0, 1.0, Sign::plus);
  CHECK(sat.stop == doctest::Approx(std::exp(-50.0)));
  CHECK(sat.stop > 0.0);
  for (double q : {-1e300, -700.0, 0.0, 700.0, 1e300}) {
    const ActionProbabilities e = gibbs_probabilities(q, 1e-9, Sign::minus);
    CHECK(std::isfinite(e.go));
    CHECK(std::isfinite(e.stop));
    CHECK(std::abs(e.go + e.stop - 1) <= 1e-15);
  }
}

TEST_CASE("value at the Gibbs policy matches the entropic value") {
  Rng rng(51);
  for (int trial = 0; trial < 100; ++trial) {
    const Instance inst = random_instance(rng);
    const double tau = rng.uniform(0.01, 2.0);
    const EntropicValueTable v = entropic_value(inst.graph, inst.terminal, tau);
    const StochasticPolicy gibbs = gibbs_policies(inst.graph, v);
    const EntropicValueTable at_gibbs =
        entropic_value_given_policy(inst.graph, inst.terminal, tau, gibbs);
    CHECK(relugame::testing::max_abs_diff(at_gibbs.values, v.values) <= 1e-9);
  }
}

TEST_CASE("Gibbs policies are optimal for each player") {
  Rng rng(52);
  for (int trial = 0; trial < 100; ++trial) {
    const Instance inst = random_instance(rng, 4, 4);
    const double tau = rng.uniform(0.05, 1.0);
    const StochasticPolicy gibbs = gibbs_policies(inst.graph, inst.terminal, tau);
    const EntropicValueTable base =
        entropic_value_given_policy(inst.graph, inst.terminal, tau, gibbs);
    const StateLayout& layout = inst.graph.layout();
    for (int k = 0; k < 20; ++k) {
      const std::size_t l = 1 + rng.below(layout.depth() - 1);
      const std::size_t i = 1 + rng.below(layout.width(l));
      const Sign s = rng.coin() ? Sign::plus : Sign::minus;
      StochasticPolicy perturbed = gibbs;
      const double go = rng.uniform01();
      perturbed.at({l, i, s}) = {go, 1 - go};
      const EntropicValueTable v =
          entropic_value_given_policy(inst.graph, inst.terminal, tau, perturbed);
      const double delta = v.at({l, i, s}) - base.at({l, i, s});
      // Max cannot gain at its own state, Min cannot lose.
      if (s == Sign::plus) {
        CHECK(delta <= 1e-12);
      } else {
        CHECK(delta >= -1e-12);
      }
    }
  }
}

TEST_CASE("free energy decomposition") {
  Rng rng(53);
  for (int trial = 0; trial < 50; ++trial) {
    const Instance inst = random_instance(rng);
    const double tau = rng.uniform(0.01, 2.0);
    for (const FreeEnergyRow& row : free_energy_report(inst.graph, inst.terminal, tau)) {
      const double sign = sign_factor(row.key.sign);
      CHECK(std::abs(row.value - (row.expected_reward + sign * tau * row.entropy)) <= 1e-9);
      CHECK(row.entropy >= 0.0);
      CHECK(row.entropy <= std::log(2.0) + 1e-15);
    }
  }
}

TEST_CASE("entropy") {
  CHECK(entropy({0.5, 0.5}) == doctest::Approx(std::log(2.0)));
  CHECK(entropy({1.0, 0.0}) == 0.0);
  CHECK(entropy({0.0, 1.0}) == 0.0);
}

TEST_CASE("policies with invalid probabilities are rejected") {
  const GameGraph g = build_game(example_network());
  const auto t = terminal_reward_from_input(g, std::vector<double>{1, 1});
  StochasticPolicy p = StochasticPolicy::uniform(g.layout());
  CHECK_NOTHROW(entropic_value_given_policy(g, t, 1.0, p));
  p.at({1, 1, Sign::plus}) = {1.2, -0.2};
  CHECK_THROWS_AS(entropic_value_given_policy(g, t, 1.0, p), InputError);
  p.at({1, 1, Sign::plus}) = {0.5, 0.6};
  CHECK_THROWS_AS(entropic_value_given_policy(g, t, 1.0, p), InputError);
  p.at({1, 1, Sign::plus}) = {std::nan(""), 0.5};
  CHECK_THROWS_AS(entropic_value_given_policy(g, t, 1.0, p), InputError);
  // Deterministic rows are allowed: 0 log 0 = 0.
  p.at({1, 1, Sign::plus}) = {1.0, 0.0};
  CHECK_NOTHROW(entropic_value_given_policy(g, t, 1.0, p));
}

TEST_CASE("tau limit report") {
  const NetworkSpec spec = example_network();
  const double taus[] = {1.0, 0.1, 0.01};
  const TauLimitReport r = tau_limit_report(spec, std::vector<double>{1, 2}, taus);
  REQUIRE(r.rows.size() == 3);
  CHECK(r.all_finite());
  for (const TauLimitRow& row : r.rows) CHECK(row.max_deviation <= row.envelope);

  Rng rng(54);
  for (int trial = 0; trial < 100; ++trial) {
    const Instance inst = random_instance(rng);
    const double cold[] = {1.0, 1e-3, 1e-9};
    const TauLimitReport rep = tau_limit_report(inst.spec, inst.x, cold);
    CHECK(rep.all_finite());
    for (const TauLimitRow& row : rep.rows) CHECK(row.max_deviation <= row.envelope + 1e-12);
    if (lipschitz_bound(inst.spec) <= 1e3) CHECK(rep.rows.back().max_deviation < 1e-6);
  }
}

TEST_CASE("tau limit deviation agrees with subtracting the value tables") {
  Rng rng(55);
  for (int trial = 0; trial < 100; ++trial) {
    const Instance inst = random_instance(rng);
    const double taus[] = {1.0, 0.5};
    const TauLimitReport rep = tau_limit_report(inst.spec, inst.x, taus);
    const ValueTable relu = shapley_value(inst.graph, inst.terminal);
    for (const TauLimitRow& row : rep.rows) {
      const EntropicValueTable v = entropic_value(inst.graph, inst.terminal, row.tau);
      double direct = 0.0;
      for (std::size_t l = 1; l < inst.spec.depth(); ++l) {
        for (std::size_t i = 1; i <= inst.graph.width(l); ++i) {
          direct = std::max(direct, std::abs(v.at(l, i, Sign::plus) - relu.at(l, i, Sign::plus)));
        }
      }
      CHECK(std::abs(row.max_deviation - direct) <= 1e-12);
    }
  }
}

TEST_CASE("tau limit deviation survives below the rounding unit") {
  // y = softplus(z) with z = 5.75: the deviation tau log1p(e^{-z/tau}) is
  // about 1e-26 at tau = 0.1, far below ulp(5.75).
  const NetworkSpec spec = relugame::testing::single_neuron(1.0, 0.75);
  const double taus[] = {0.1, 0.01};
  const TauLimitReport r = tau_limit_report(spec, std::vector<double>{5}, taus);
  CHECK(r.rows[0].max_deviation == doctest::Approx(0.1 * std::exp(-57.5)).epsilon(1e-12));
  CHECK(r.rows[1].max_deviation == doctest::Approx(0.01 * std::exp(-575.0)).epsilon(1e-12));
  CHECK(r.strictly_decreasing());
}

TEST_CASE("softplus values need not dominate relu past the first layer") {
  // y2 = relu(x) at x = 0, y1 = relu(1 - y2) = 1. At temperature tau the hidden
  // neuron gives tau log 2 > 0, which the negative weight turns into a deficit:
  // V_tau(1,1,+) = softplus(1 - tau log 2) < 1.
  std::vector<Layer> layers;
  layers.push_back({Matrix(1, 1, {1.0}), {0.0}});
  layers.push_back({Matrix(1, 1, {-1.0}), {1.0}});
  const NetworkSpec spec = from_input_first(std::move(layers));
  const GameGraph g = build_game(spec);
  const auto t = terminal_reward_from_input(g, std::vector<double>{0});
  const EntropicValueTable v = entropic_value(g, t, 0.1);
  CHECK(v.at(2, 1, Sign::plus) > 0.0);
  CHECK(v.at(1, 1, Sign::plus) < forward_relu(spec, std::vector<double>{0}).output()[0]);
}
