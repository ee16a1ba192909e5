#include "relugame/paths.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include "relugame/rng.hpp"

namespace relugame {

namespace {

bool owner_continues(const PolicyPair& pair, const StateLayout& layout, const StateKey& k) {
  const PlayerPolicy& p = k.sign == Sign::plus ? pair.max : pair.min;
  return p.continues(layout.interior_ordinal(k.layer, k.neuron));
}

void check_pair(const GameGraph& graph, const PolicyPair& pair) {
  const std::size_t n = graph.layout().interior_neurons();
  if (pair.max.bits.size() != n || pair.min.bits.size() != n) {
    throw InputError("policy pair needs " + std::to_string(n) + " bits per player");
  }
}

}  // namespace

std::vector<Trajectory> enumerate_paths(const GameGraph& graph, const PolicyPair& pair,
                                        const StateKey& start, std::size_t cap) {
  check_pair(graph, pair);
  const StateLayout& layout = graph.layout();
  std::vector<Trajectory> out;
  Trajectory current;
  current.states.push_back(layout.index(start));

  // Depth-first over `current`, which always holds the walk from the start.
  auto expand = [&](auto&& self) -> void {
    const GameNode& n = graph.node(current.states.back());
    PathEnd end;
    if (n.terminal) {
      end = PathEnd::terminal;
    } else if (!owner_continues(pair, layout, n.key)) {
      end = PathEnd::stopped;
    } else if (n.transitions.empty()) {
      end = PathEnd::absorbed;
    } else {
      for (const Transition& t : n.transitions) {
        current.states.push_back(t.target);
        self(self);
        current.states.pop_back();
      }
      return;
    }
    if (out.size() >= cap) {
      throw InputError("path enumeration exceeded the cap of " + std::to_string(cap) +
                       " trajectories");
    }
    out.push_back({current.states, end});
  };
  expand(expand);
  return out;
}

double path_probability(const GameGraph& graph, const Trajectory& path) {
  double p = 1.0;
  for (std::size_t v = 0; v + 1 < path.states.size(); ++v) {
    const GameNode& n = graph.node(path.states[v]);
    const auto it = std::find_if(n.transitions.begin(), n.transitions.end(),
                                 [&](const Transition& t) { return t.target == path.states[v + 1]; });
    if (it == n.transitions.end()) {
      throw InputError("trajectory uses a missing edge out of " + to_string(n.key));
    }
    p *= it->probability;
  }
  return p;
}

double path_reward(const GameGraph& graph, const Trajectory& path,
                   const TerminalReward& terminal) {
  const std::size_t continuing =
      path.end == PathEnd::absorbed ? path.states.size() : path.states.size() - 1;
  double reward = 0.0;
  double discount = 1.0;
  for (std::size_t v = 0; v < continuing; ++v) {
    const GameNode& n = graph.node(path.states[v]);
    reward += discount * n.reward;
    discount *= n.discount;
  }
  if (path.end == PathEnd::terminal) {
    const StateKey last = graph.node(path.states.back()).key;
    reward += discount * terminal.at(last.neuron, last.sign);
  }
  return reward;
}

double value_by_enumeration(const GameGraph& graph, const PolicyPair& pair, const StateKey& start,
                            const TerminalReward& terminal, std::size_t cap) {
  double total = 0.0;
  for (const Trajectory& path : enumerate_paths(graph, pair, start, cap)) {
    total += path_probability(graph, path) * path_reward(graph, path, terminal);
  }
  return total;
}

BruteForceResult maxmin_bruteforce(const GameGraph& graph, const StateKey& start,
                                   const TerminalReward& terminal, std::size_t bit_limit,
                                   std::size_t cap) {
  const std::size_t n = graph.layout().interior_neurons();
  if (2 * n > bit_limit) {
    throw InputError("brute force needs " + std::to_string(2 * n) +
                     " policy bits, above the limit of " + std::to_string(bit_limit));
  }
  const std::size_t count = std::size_t{1} << n;
  auto decode = [n](std::size_t code) {
    PlayerPolicy p = PlayerPolicy::all(n, false);
    for (std::size_t b = 0; b < n; ++b) p.bits[b] = (code >> (n - 1 - b)) & 1U;
    return p;
  };
  std::vector<PlayerPolicy> policies;
  policies.reserve(count);
  for (std::size_t c = 0; c < count; ++c) policies.push_back(decode(c));

  // payoff[pi * count + sigma]
  std::vector<double> payoff(count * count);
  for (std::size_t a = 0; a < count; ++a) {
    for (std::size_t b = 0; b < count; ++b) {
      payoff[a * count + b] =
          value_by_enumeration(graph, {policies[a], policies[b]}, start, terminal, cap);
    }
  }

  BruteForceResult r;
  r.pairs_evaluated = count * count;
  r.maxmin = -std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < count; ++a) {
    std::size_t worst = 0;
    for (std::size_t b = 1; b < count; ++b) {
      if (payoff[a * count + b] < payoff[a * count + worst]) worst = b;
    }
    if (payoff[a * count + worst] > r.maxmin) {
      r.maxmin = payoff[a * count + worst];
      r.argmax_argmin = {policies[a], policies[worst]};
    }
  }
  r.minmax = std::numeric_limits<double>::infinity();
  for (std::size_t b = 0; b < count; ++b) {
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < count; ++a) best = std::max(best, payoff[a * count + b]);
    r.minmax = std::min(r.minmax, best);
  }
  return r;
}

namespace {

struct Moments {
  std::size_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double v) {
    ++n;
    const double delta = v - mean;
    mean += delta / static_cast<double>(n);
    m2 += delta * (v - mean);
  }
  void merge(const Moments& o) {
    if (o.n == 0) return;
    const double total = static_cast<double>(n + o.n);
    const double delta = o.mean - mean;
    mean += delta * static_cast<double>(o.n) / total;
    m2 += o.m2 + delta * delta * static_cast<double>(n) * static_cast<double>(o.n) / total;
    n += o.n;
  }
};

double sample_once(const GameGraph& graph, const PolicyPair& pair, std::size_t start,
                   const TerminalReward& terminal, Rng& rng) {
  const StateLayout& layout = graph.layout();
  double reward = 0.0;
  double discount = 1.0;
  std::size_t s = start;
  for (;;) {
    const GameNode& n = graph.node(s);
    if (n.terminal) {
      reward += discount * terminal.at(n.key.neuron, n.key.sign);
      break;
    }
    if (!owner_continues(pair, layout, n.key)) break;
    reward += discount * n.reward;
    discount *= n.discount;
    if (n.transitions.empty()) break;
    const double u = rng.uniform01();
    double acc = 0.0;
    std::size_t next = n.transitions.back().target;
    for (const Transition& t : n.transitions) {
      acc += t.probability;
      if (u < acc) {
        next = t.target;
        break;
      }
    }
    s = next;
  }
  return reward;
}

}  // namespace

MonteCarloResult monte_carlo_value(const GameGraph& graph, const PolicyPair& pair,
                                   const StateKey& start, const TerminalReward& terminal,
                                   std::size_t samples, std::uint64_t seed, unsigned workers) {
  if (samples == 0) throw InputError("monte_carlo_value needs at least one sample");
  check_pair(graph, pair);
  const std::size_t start_index = graph.layout().index(start);
  const std::size_t shards = (samples + kMonteCarloShardSize - 1) / kMonteCarloShardSize;
  std::vector<Moments> moments(shards);

  auto run_shard = [&](std::size_t s) {
    Rng rng(seed, s);
    const std::size_t begin = s * kMonteCarloShardSize;
    const std::size_t end = std::min(samples, begin + kMonteCarloShardSize);
    Moments local;
    for (std::size_t k = begin; k < end; ++k) {
      local.add(sample_once(graph, pair, start_index, terminal, rng));
    }
    moments[s] = local;
  };

  workers = std::max(1U, std::min<unsigned>(workers, static_cast<unsigned>(shards)));
  if (workers == 1) {
    for (std::size_t s = 0; s < shards; ++s) run_shard(s);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t s = w; s < shards; s += workers) run_shard(s);
      });
    }
    for (auto& t : pool) t.join();
  }

  Moments total;
  for (const Moments& m : moments) total.merge(m);
  MonteCarloResult r;
  r.samples = total.n;
  r.estimate = total.mean;
  r.standard_error =
      total.n > 1 ? std::sqrt(total.m2 / static_cast<double>(total.n - 1) / static_cast<double>(total.n))
                  : 0.0;
  return r;
}

}  // namespace relugame
