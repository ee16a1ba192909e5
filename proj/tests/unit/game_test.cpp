#include <map>
#include <regex>
#include <set>
#include <sstream>

#include "doctest.h"
#include "testing.hpp"

using namespace relugame;
using relugame::testing::example_network;

namespace {

StateKey key(std::size_t l, std::size_t i, Sign s) { return {l, i, s}; }

}  // namespace

TEST_CASE("state layout indexing") {
  const StateLayout layout({1, 2, 2});
  CHECK(layout.depth() == 3);
  CHECK(layout.signed_count() == 10);
  CHECK(layout.size() == 11);
  CHECK(layout.cemetery() == 10);
  CHECK(layout.index(1, 1, Sign::plus) == 0);
  CHECK(layout.index(1, 1, Sign::minus) == 1);
  CHECK(layout.index(2, 2, Sign::minus) == 5);
  CHECK(layout.index(3, 1, Sign::plus) == 6);
  CHECK(layout.interior_neurons() == 3);
  CHECK(layout.interior_ordinal(1, 1) == 0);
  CHECK(layout.interior_ordinal(2, 2) == 2);
  for (std::size_t idx = 0; idx < layout.signed_count(); ++idx) {
    CHECK(layout.index(layout.key(idx)) == idx);
  }
  CHECK(to_string(key(2, 1, Sign::plus)) == "2,1+");
  CHECK(to_string(key(3, 2, Sign::minus)) == "3,2-");
}

TEST_CASE("worked example game") {
  const GameGraph g = build_game(example_network());
  CHECK(g.node(key(2, 1, Sign::plus)).discount == 15.0);
  CHECK(g.node(key(2, 2, Sign::plus)).discount == 3.0);
  CHECK(g.node(key(1, 1, Sign::plus)).discount == 7.0);

  // Positive weights keep the sign, negative weights flip it.
  CHECK(g.probability(key(2, 1, Sign::plus), key(3, 1, Sign::plus)) == 7.0 / 15.0);
  CHECK(g.probability(key(2, 1, Sign::plus), key(3, 2, Sign::minus)) == 8.0 / 15.0);
  CHECK(g.probability(key(2, 1, Sign::plus), key(3, 2, Sign::plus)) == 0.0);
  CHECK(g.probability(key(2, 2, Sign::plus), key(3, 1, Sign::minus)) == 1.0 / 3.0);
  CHECK(g.probability(key(2, 2, Sign::plus), key(3, 2, Sign::minus)) == 2.0 / 3.0);
  CHECK(g.probability(key(1, 1, Sign::plus), key(2, 1, Sign::plus)) == 2.0 / 7.0);
  CHECK(g.probability(key(1, 1, Sign::plus), key(2, 2, Sign::minus)) == 5.0 / 7.0);
  CHECK(g.probability(key(1, 1, Sign::minus), key(2, 1, Sign::minus)) == 2.0 / 7.0);
  CHECK(g.probability(key(1, 1, Sign::minus), key(2, 2, Sign::plus)) == 5.0 / 7.0);

  CHECK(g.node(key(2, 1, Sign::plus)).reward == 42.0);
  CHECK(g.node(key(2, 1, Sign::minus)).reward == -42.0);
  CHECK(g.node(key(1, 1, Sign::minus)).reward == -7.0);
  CHECK(g.bias(2, 2) == 33.0);
  CHECK(g.node(key(3, 1, Sign::plus)).terminal);
  CHECK(g.node(key(3, 1, Sign::plus)).transitions.empty());

  const auto t = terminal_reward_from_input(g, std::vector<double>{10, -4});
  CHECK(t.at(2, Sign::plus) == -4.0);
  CHECK(t.at(2, Sign::minus) == 4.0);
  CHECK_THROWS_AS(terminal_reward_from_input(g, std::vector<double>{1}), InputError);
}

TEST_CASE("zero weight rows") {
  std::vector<Layer> layers;
  layers.push_back({Matrix(2, 1, {0.0, 1.0}), {3, 1}});
  layers.push_back({Matrix(1, 2, {1, 1}), {0}});
  const NetworkSpec spec = from_input_first(std::move(layers));
  try {
    build_game(spec);
    FAIL("strict mode accepted a zero row");
  } catch (const InputError& e) {
    CHECK(std::string(e.what()).find("(2,1)") != std::string::npos);
  }
  const GameGraph g = build_game(spec, {ZeroRowMode::lenient});
  CHECK(g.node(key(2, 1, Sign::plus)).discount == 0.0);
  CHECK(g.node(key(2, 1, Sign::plus)).transitions.empty());
}

TEST_CASE("transition rows are probability distributions") {
  Rng rng(1);
  for (int trial = 0; trial < 200; ++trial) {
    const NetworkSpec spec = relugame::testing::random_shape_network(rng, 2, 5, 6, 2.0);
    const GameGraph g = build_game(spec);
    for (const GameNode& n : g.nodes()) {
      if (n.terminal || n.transitions.empty()) continue;
      double total = 0.0;
      for (const Transition& t : n.transitions) {
        CHECK(t.probability > 0.0);
        total += t.probability;
      }
      CHECK(std::abs(total - 1.0) <= 1e-12);
    }
  }
}

TEST_CASE("weights are recovered as gamma * (P+ - P-)") {
  Rng rng(2);
  for (int trial = 0; trial < 100; ++trial) {
    const NetworkSpec spec = relugame::testing::random_shape_network(rng, 2, 5, 6, 2.0);
    const GameGraph g = build_game(spec);
    for (std::size_t l = 1; l < spec.depth(); ++l) {
      const Matrix& w = spec.layer(l).weights;
      for (std::size_t i = 1; i <= w.rows(); ++i) {
        CHECK(g.bias(l, i) == spec.layer(l).bias[i - 1]);
        const double gamma = g.node(key(l, i, Sign::plus)).discount;
        for (std::size_t j = 1; j <= w.cols(); ++j) {
          const double p_keep = g.probability(key(l, i, Sign::plus), key(l + 1, j, Sign::plus));
          const double p_flip = g.probability(key(l, i, Sign::plus), key(l + 1, j, Sign::minus));
          CHECK(std::abs(gamma * (p_keep - p_flip) - w(i - 1, j - 1)) <= 1e-12);
        }
      }
    }
  }
}

TEST_CASE("sign symmetry of the game graph") {
  Rng rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const GameGraph g = build_game(relugame::testing::random_shape_network(rng, 2, 5, 6, 2.0));
    const StateLayout& layout = g.layout();
    for (std::size_t idx = 0; idx < layout.signed_count(); ++idx) {
      const StateKey k = layout.key(idx);
      const StateKey mirror{k.layer, k.neuron, flip(k.sign)};
      CHECK(g.node(mirror).reward == -g.node(k).reward);
      CHECK(g.node(mirror).discount == g.node(k).discount);
      for (const Transition& t : g.node(k).transitions) {
        const StateKey to = layout.key(t.target);
        CHECK(g.probability(mirror, {to.layer, to.neuron, flip(to.sign)}) == t.probability);
      }
    }
  }
}

namespace {

// Minimal reader for the subset of DOT that export_dot writes: it collects node
// labels and labeled edges so the graph can be compared with the source.
struct ParsedDot {
  std::map<std::string, std::string> labels;
  std::map<std::string, std::string> xlabels;
  std::map<std::pair<std::string, std::string>, std::string> edges;
};

ParsedDot parse_dot(const std::string& text) {
  ParsedDot out;
  const std::regex edge(R"re(\s*"([^"]+)"\s*->\s*"([^"]+)"\s*\[(.*)\];)re");
  const std::regex node(R"re(\s*"([^"]+)"\s*\[(.*)\];)re");
  const std::regex attr(R"re((\w+)="([^"]*)")re");
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    std::smatch m;
    auto attrs = [&](const std::string& s) {
      std::map<std::string, std::string> a;
      for (auto it = std::sregex_iterator(s.begin(), s.end(), attr); it != std::sregex_iterator();
           ++it) {
        a[(*it)[1]] = (*it)[2];
      }
      return a;
    };
    if (std::regex_match(line, m, edge)) {
      out.edges[{m[1], m[2]}] = attrs(m[3])["label"];
    } else if (std::regex_match(line, m, node)) {
      auto a = attrs(m[2]);
      out.labels[m[1]] = a["label"];
      if (a.count("xlabel")) out.xlabels[m[1]] = a["xlabel"];
    }
  }
  return out;
}

double parse_fraction(const std::string& s) {
  const auto slash = s.find('/');
  if (slash == std::string::npos) return std::stod(s);
  return std::stod(s.substr(0, slash)) / std::stod(s.substr(slash + 1));
}

}  // namespace

TEST_CASE("DOT export of the worked example") {
  const std::string dot = export_dot(build_game(example_network()));
  CHECK(dot.rfind("digraph relu_game {", 0) == 0);
  const ParsedDot p = parse_dot(dot);
  CHECK(p.edges.at({"2,1+", "3,2-"}) == "8/15");
  CHECK(p.edges.at({"2,2-", "3,2+"}) == "2/3");
  CHECK(p.edges.at({"1,1+", "2,2-"}) == "5/7");
  CHECK(p.edges.at({"1,1+", "cemetery"}) == "0");
  CHECK(p.labels.at("3,1+") == "x1");
  CHECK(p.labels.at("3,2-") == "-x2");
  CHECK(p.xlabels.at("2,1-") == "-42");
}

TEST_CASE("DOT export round trips the transition structure") {
  Rng rng(4);
  for (int trial = 0; trial < 30; ++trial) {
    const NetworkSpec spec = relugame::testing::random_shape_network(rng, 2, 4, 4, 2.0);
    const GameGraph g = build_game(spec);
    const ParsedDot p = parse_dot(export_dot(g));
    const StateLayout& layout = g.layout();
    std::size_t transition_edges = 0;
    for (std::size_t idx = 0; idx < layout.signed_count(); ++idx) {
      const GameNode& n = g.node(idx);
      const std::string name = to_string(n.key);
      REQUIRE(p.labels.count(name) == 1);
      if (n.terminal) continue;
      CHECK(p.edges.count({name, "cemetery"}) == 1);
      CHECK(std::stod(p.xlabels.at(name)) == n.reward);
      for (const Transition& t : n.transitions) {
        const std::string to = to_string(layout.key(t.target));
        REQUIRE(p.edges.count({name, to}) == 1);
        CHECK(std::abs(parse_fraction(p.edges.at({name, to})) - t.probability) <= 1e-12);
        ++transition_edges;
      }
    }
    std::size_t non_stop = 0;
    for (const auto& [ends, label] : p.edges) non_stop += ends.second != "cemetery";
    CHECK(non_stop == transition_edges);
  }
}
