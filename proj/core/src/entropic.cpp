#include "relugame/entropic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace relugame {

namespace {

void check_tau(double tau) {
  if (!(tau > 0.0) || !std::isfinite(tau)) throw InputError("temperature tau must be > 0");
}

double xlogx(double p) { return p > 0.0 ? p * std::log(p) : 0.0; }

// Shared backward sweep; `settle(idx, key, q)` turns the continuation payoff
// into the state's value.
template <class Settle>
EntropicValueTable sweep(const GameGraph& graph, const TerminalReward& terminal, double tau,
                         Settle settle) {
  const StateLayout& layout = graph.layout();
  const std::size_t L = graph.depth();
  const std::size_t kL = layout.width(L);
  if (terminal.plus.size() != kL || terminal.minus.size() != kL) {
    throw InputError("terminal reward must cover every layer-L state");
  }
  EntropicValueTable t{layout, tau, std::vector<double>(layout.size(), 0.0),
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
        t.values[idx] = settle(idx, n.key, q);
      }
    }
  }
  return t;
}

}  // namespace

EntropicValueTable entropic_value(const GameGraph& graph, const TerminalReward& terminal,
                                  double tau) {
  check_tau(tau);
  return sweep(graph, terminal, tau, [tau](std::size_t, const StateKey& k, double q) {
    return k.sign == Sign::plus ? softplus(q, tau) : -softplus(-q, tau);
  });
}

StochasticPolicy StochasticPolicy::uniform(const StateLayout& layout) {
  return {layout, std::vector<ActionProbabilities>(layout.size())};
}

ActionProbabilities gibbs_probabilities(double q, double tau, Sign owner) {
  check_tau(tau);
  // Max favours continuing when Q > 0, Min when Q < 0.
  const double z = owner == Sign::plus ? q / tau : -q / tau;
  const double e = std::exp(-std::abs(z));
  const double big = 1.0 / (1.0 + e);
  const double small = e / (1.0 + e);
  return z >= 0.0 ? ActionProbabilities{big, small} : ActionProbabilities{small, big};
}

StochasticPolicy gibbs_policies(const GameGraph& graph, const EntropicValueTable& values) {
  StochasticPolicy p = StochasticPolicy::uniform(graph.layout());
  for (const GameNode& n : graph.nodes()) {
    if (n.key.layer == 0 || n.terminal) continue;
    p.at(n.key) = gibbs_probabilities(values.q(n.key), values.tau, n.key.sign);
  }
  return p;
}

StochasticPolicy gibbs_policies(const GameGraph& graph, const TerminalReward& terminal,
                                double tau) {
  return gibbs_policies(graph, entropic_value(graph, terminal, tau));
}

EntropicValueTable entropic_value_given_policy(const GameGraph& graph,
                                               const TerminalReward& terminal, double tau,
                                               const StochasticPolicy& policy) {
  check_tau(tau);
  if (policy.layout != graph.layout()) throw InputError("policy does not match the game");
  for (const GameNode& n : graph.nodes()) {
    if (n.key.layer == 0 || n.terminal) continue;
    const ActionProbabilities& a = policy.at(n.key);
    const bool in_range = std::isfinite(a.go) && std::isfinite(a.stop) && a.go >= 0.0 &&
                          a.go <= 1.0 && a.stop >= 0.0 && a.stop <= 1.0;
    if (!in_range || std::abs(a.go + a.stop - 1.0) > 1e-12) {
      throw InputError("policy at " + to_string(n.key) + " is not a probability distribution");
    }
  }
  return sweep(graph, terminal, tau, [&](std::size_t idx, const StateKey& k, double q) {
    const ActionProbabilities& a = policy.actions[idx];
    // Max maximizes <p, (Q, 0)> + tau H(p); Min minimizes <p, (Q, 0)> - tau H(p).
    const double regularizer = -tau * (xlogx(a.go) + xlogx(a.stop));
    return a.go * q + (k.sign == Sign::plus ? regularizer : -regularizer);
  });
}

double entropy(const ActionProbabilities& p) { return -(xlogx(p.go) + xlogx(p.stop)); }

std::vector<FreeEnergyRow> free_energy_report(const GameGraph& graph,
                                              const TerminalReward& terminal, double tau) {
  const EntropicValueTable v = entropic_value(graph, terminal, tau);
  const StochasticPolicy gibbs = gibbs_policies(graph, v);
  std::vector<FreeEnergyRow> rows;
  for (const GameNode& n : graph.nodes()) {
    if (n.key.layer == 0 || n.terminal) continue;
    const ActionProbabilities& a = gibbs.at(n.key);
    rows.push_back({n.key, v.at(n.key), a.go * v.q(n.key), entropy(a)});
  }
  return rows;
}

bool TauLimitReport::strictly_decreasing() const {
  for (std::size_t k = 1; k < rows.size(); ++k) {
    if (!(rows[k].max_deviation < rows[k - 1].max_deviation)) return false;
  }
  return true;
}

bool TauLimitReport::all_finite() const {
  return std::all_of(rows.begin(), rows.end(), [](const TauLimitRow& r) { return r.finite; });
}

namespace {

// relu(u0 + du) - relu(u0) without cancellation when both sides share a sign.
double relu_shift(double u0, double du) {
  const double u1 = u0 + du;
  if (u0 > 0.0 && u1 > 0.0) return du;
  if (u0 <= 0.0 && u1 <= 0.0) return 0.0;
  return std::max(u1, 0.0) - std::max(u0, 0.0);
}

// D = V_tau - V at every state, propagated as its own recursion. With
// u = s * Q for owner sign s, V_tau = s * softplus_tau(u_tau) and V = s * relu(u),
// so D = s * (relu(u_tau) - relu(u) + tau log1p(exp(-|u_tau| / tau))) and
// Q_tau - Q = gamma * sum_j P D_j. Subtracting the two value tables instead
// would round deviations below ulp(V) to zero.
std::vector<double> entropic_deviation(const GameGraph& graph, const ValueTable& relu,
                                       double tau) {
  const StateLayout& layout = graph.layout();
  std::vector<double> d(layout.size(), 0.0);
  for (std::size_t l = graph.depth() - 1; l >= 1; --l) {
    for (std::size_t i = 1; i <= layout.width(l); ++i) {
      for (Sign s : {Sign::plus, Sign::minus}) {
        const std::size_t idx = layout.index(l, i, s);
        const GameNode& n = graph.node(idx);
        double dq = 0.0;
        for (const Transition& tr : n.transitions) dq += tr.probability * d[tr.target];
        dq *= n.discount;
        const double sf = sign_factor(s);
        const double u0 = sf * relu.continuation[idx];
        const double du = sf * dq;
        const double smoothing = tau * std::log1p(std::exp(-std::abs(u0 + du) / tau));
        d[idx] = sf * (relu_shift(u0, du) + smoothing);
      }
    }
  }
  return d;
}

}  // namespace

TauLimitReport tau_limit_report(const NetworkSpec& spec, std::span<const double> x,
                                std::span<const double> taus) {
  const GameGraph graph = build_game(spec, {ZeroRowMode::lenient});
  const TerminalReward t = terminal_reward_from_input(graph, x);
  const ValueTable relu = shapley_value(graph, t);

  std::vector<double> widest;  // max row 1-norm of layer l, l = 1..L-1
  for (std::size_t l = 1; l < graph.depth(); ++l) {
    double w = 0.0;
    for (std::size_t i = 1; i <= graph.width(l); ++i) {
      w = std::max(w, graph.node({l, i, Sign::plus}).discount);
    }
    widest.push_back(w);
  }

  TauLimitReport report;
  for (double tau : taus) {
    const EntropicValueTable v = entropic_value(graph, t, tau);
    const std::vector<double> d = entropic_deviation(graph, relu, tau);
    TauLimitRow row;
    row.tau = tau;
    row.finite = std::all_of(v.values.begin(), v.values.end(), [](double e) { return std::isfinite(e); }) &&
                 std::all_of(d.begin(), d.end(), [](double e) { return std::isfinite(e); });
    for (std::size_t l = 1; l < graph.depth(); ++l) {
      for (std::size_t i = 1; i <= graph.width(l); ++i) {
        row.max_deviation = std::max(row.max_deviation, std::abs(d[graph.layout().index(l, i, Sign::plus)]));
      }
    }
    double gain = 1.0;
    for (std::size_t l = 1; l < graph.depth(); ++l) {
      row.envelope += gain * tau * std::numbers::ln2;
      gain *= widest[l - 1];
    }
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace relugame
