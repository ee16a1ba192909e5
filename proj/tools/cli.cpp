#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "relugame/relugame.hpp"

namespace relugame::cli {

namespace {

constexpr OperationRoute kRoutes[] = {
    {"validate", "validate"},
    {"random_network", "random"},
    {"forward_relu", "eval"},
    {"shapley_value", "eval"},
    {"terminal_reward_from_input", "eval"},
    {"check_game_equivalence", "eval"},
    {"build_game", "game export"},
    {"export_dot", "game export"},
    {"optimal_policies", "policy"},
    {"policy_fingerprint", "policy"},
    {"fixed_policy_value_max", "fixed"},
    {"fixed_policy_value_min", "fixed"},
    {"lipschitz_bound", "lipschitz"},
    {"enumerate_paths", "paths enumerate"},
    {"path_probability", "paths enumerate"},
    {"path_reward", "paths enumerate"},
    {"value_by_enumeration", "paths value"},
    {"maxmin_bruteforce", "paths bruteforce"},
    {"monte_carlo_value", "mc"},
    {"value_with_boundary", "boundary"},
    {"interval_propagate", "bounds"},
    {"certify_accept", "certify emit"},
    {"certify_reject", "certify emit"},
    {"check_certificate", "certify check"},
    {"cell_membership", "certify cell"},
    {"forward_softplus", "softplus eval"},
    {"entropic_value", "softplus eval"},
    {"gibbs_policies", "softplus policy"},
    {"entropic_value_given_policy", "softplus policy"},
    {"tau_limit_report", "softplus limit"},
};

enum class Format { human, record };

/// Prints results either as readable lines or as line-oriented records,
/// `name key=value key=value`, with doubles in shortest round-trip form.
class Emitter {
 public:
  Emitter(std::ostream& out, Format format) : out_(out), format_(format) {}

  struct Field {
    std::string key;
    std::string value;
  };

  std::string num(double v) const {
    char buf[64];
    if (format_ == Format::record) {
      auto res = std::to_chars(buf, buf + sizeof buf, v);
      return std::string(buf, res.ptr);
    }
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
  }

  std::string vec(std::span<const double> v) const {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) s += ',';
      s += num(v[i]);
    }
    return s;
  }

  void emit(std::string_view name, std::initializer_list<Field> fields) {
    out_ << name;
    if (format_ == Format::human) {
      out_ << ':';
      bool first = true;
      for (const auto& f : fields) {
        out_ << (first ? " " : ", ") << f.key << " = " << f.value;
        first = false;
      }
    } else {
      for (const auto& f : fields) out_ << ' ' << f.key << '=' << f.value;
    }
    out_ << '\n';
  }

 private:
  std::ostream& out_;
  Format format_;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

/// Comma-separated numbers, inline or from a file holding them.
Vector parse_csv(const std::string& text) {
  std::string body = text;
  if (std::filesystem::is_regular_file(text)) body = read_file(text);
  Vector v;
  std::string token;
  std::stringstream ss(body);
  while (std::getline(ss, token, ',')) {
    token.erase(std::remove_if(token.begin(), token.end(),
                               [](unsigned char c) { return std::isspace(c) != 0; }),
                token.end());
    if (token.empty()) continue;
    double d = 0.0;
    const char* first = token.data();
    if (*first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, token.data() + token.size(), d);
    if (ec != std::errc() || ptr != token.data() + token.size()) {
      throw InputError("not a number: \"" + token + "\"");
    }
    v.push_back(d);
  }
  return v;
}

StateKey parse_state(const std::string& text) {
  // "l,i,+" or "l,i,-"
  const auto a = text.find(',');
  const auto b = text.find(',', a == std::string::npos ? a : a + 1);
  if (a == std::string::npos || b == std::string::npos || b + 2 != text.size() ||
      (text.back() != '+' && text.back() != '-')) {
    throw InputError("state must look like \"l,i,+\" or \"l,i,-\"");
  }
  try {
    return {std::stoul(text.substr(0, a)), std::stoul(text.substr(a + 1, b - a - 1)),
            text.back() == '+' ? Sign::plus : Sign::minus};
  } catch (const std::exception&) {
    throw InputError("state must look like \"l,i,+\" or \"l,i,-\"");
  }
}

struct Options {
  std::string net;
  std::string input;
  std::string format = "human";
  std::string mode = "strict";
  std::string policy;
  std::string pi;
  std::string sigma;
  std::string start = "1,1,+";
  std::string dot;
  std::string lower, upper, plus, minus;
  std::string cert, out;
  std::string widths;
  std::string taus = "1,0.1,0.01";
  std::optional<double> alpha, beta;
  double cell_alpha = 0.0, tau = 1.0, scale = 1.0;
  std::uint64_t seed = 0;
  std::size_t samples = 100000;
  std::size_t bit_limit = kDefaultPolicyBitLimit;
  std::size_t cap = kDefaultPathCap;
  unsigned workers = 1;
  bool layers = false;
};

struct Context {
  const Options& opt;
  std::ostream& out;
  Emitter emit;

  NetworkSpec network() const { return load_network(opt.net); }
  GameGraph game(const NetworkSpec& spec) const {
    return build_game(spec, {opt.mode == "lenient" ? ZeroRowMode::lenient : ZeroRowMode::strict});
  }
  Vector input() const {
    if (opt.input.empty()) throw InputError("--input is required");
    return parse_csv(opt.input);
  }
};

int cmd_validate(Context& c) {
  const NetworkSpec spec = parse_network_unchecked(read_file(c.opt.net));
  const auto violations = validate(spec);
  for (const auto& v : violations) {
    c.emit.emit("violation", {{"layer", std::to_string(v.layer)}, {"message", "\"" + v.message + "\""}});
  }
  c.emit.emit("validate", {{"violations", std::to_string(violations.size())}});
  return violations.empty() ? kSuccess : kVerificationFailed;
}

int cmd_random(Context& c) {
  std::vector<std::size_t> widths;
  for (double w : parse_csv(c.opt.widths)) {
    if (w < 1 || w != static_cast<double>(static_cast<std::size_t>(w))) {
      throw InputError("--widths must be positive integers");
    }
    widths.push_back(static_cast<std::size_t>(w));
  }
  const NetworkSpec spec = random_network(c.opt.seed, widths.size(), widths, c.opt.scale);
  if (c.opt.out.empty()) {
    c.out << serialize_network(spec);
  } else {
    save_network(spec, c.opt.out);
    c.emit.emit("random", {{"file", c.opt.out}, {"hash", network_hash(spec)}});
  }
  return kSuccess;
}

int cmd_eval(Context& c) {
  const NetworkSpec spec = c.network();
  const Vector x = c.input();
  const Activations act = forward_relu(spec, x);
  const GameGraph g = c.game(spec);
  const ValueTable v = shapley_value(g, terminal_reward_from_input(g, x));
  c.emit.emit("output", {{"values", c.emit.vec(act.output())}});
  for (std::size_t l = 1; l < spec.depth(); ++l) {
    for (std::size_t i = 1; i <= spec.width(l); ++i) {
      c.emit.emit("neuron", {{"layer", std::to_string(l)},
                             {"index", std::to_string(i)},
                             {"y", c.emit.num(act.at(l)[i - 1])},
                             {"v_plus", c.emit.num(v.at(l, i, Sign::plus))},
                             {"v_minus", c.emit.num(v.at(l, i, Sign::minus))}});
    }
  }
  const EquivalenceReport r = check_game_equivalence(spec, x);
  c.emit.emit("equivalence", {{"max_value_gap", c.emit.num(r.max_value_gap)},
                           {"max_antisymmetry_gap", c.emit.num(r.max_antisymmetry_gap)},
                           {"pass", r.pass() ? "true" : "false"}});
  return r.pass() ? kSuccess : kVerificationFailed;
}

int cmd_game_export(Context& c) {
  const GameGraph g = c.game(c.network());
  const std::string dot = export_dot(g);
  if (c.opt.dot.empty() || c.opt.dot == "-") {
    c.out << dot;
  } else {
    std::ofstream f(c.opt.dot);
    if (!f) throw InputError("cannot write " + c.opt.dot);
    f << dot;
    c.emit.emit("game", {{"states", std::to_string(g.layout().signed_count())},
                         {"dot", c.opt.dot}});
  }
  return kSuccess;
}

int cmd_policy(Context& c) {
  const GameGraph g = c.game(c.network());
  const TerminalReward t = terminal_reward_from_input(g, c.input());
  const PolicyPair pair = optimal_policies(g, t);
  c.emit.emit("policy", {{"fingerprint", policy_fingerprint(g, t)},
                         {"pi", pair.max.to_string()},
                         {"sigma", pair.min.to_string()}});
  return kSuccess;
}

int cmd_fixed(Context& c) {
  if (c.opt.pi.empty() == c.opt.sigma.empty()) throw InputError("give exactly one of --pi or --sigma");
  const GameGraph g = c.game(c.network());
  const TerminalReward t = terminal_reward_from_input(g, c.input());
  const bool max_side = !c.opt.pi.empty();
  const ValueTable v = max_side ? fixed_policy_value_max(g, t, PlayerPolicy::parse(c.opt.pi))
                                : fixed_policy_value_min(g, t, PlayerPolicy::parse(c.opt.sigma));
  const double f = shapley_value(g, t).at(1, 1, Sign::plus);
  for (std::size_t i = 1; i <= g.width(1); ++i) {
    c.emit.emit(max_side ? "f_pi" : "sigma_f", {{"index", std::to_string(i)},
                                                {"value", c.emit.num(v.at(1, i, Sign::plus))}});
  }
  c.emit.emit("network", {{"value", c.emit.num(f)}});
  return kSuccess;
}

int cmd_lipschitz(Context& c) {
  c.emit.emit("lipschitz", {{"bound", c.emit.num(lipschitz_bound(c.network()))}});
  return kSuccess;
}

int cmd_paths_enumerate(Context& c) {
  const GameGraph g = c.game(c.network());
  const TerminalReward t = terminal_reward_from_input(g, c.input());
  const PolicyPair pair = PolicyPair::parse(c.opt.policy);
  const auto paths = enumerate_paths(g, pair, parse_state(c.opt.start), c.opt.cap);
  double total = 0.0;
  for (const Trajectory& p : paths) {
    std::string walk;
    for (std::size_t s : p.states) {
      if (!walk.empty()) walk += ";";
      walk += to_string(g.node(s).key);
    }
    const double prob = path_probability(g, p);
    const double reward = path_reward(g, p, t);
    total += prob * reward;
    const char* end = p.end == PathEnd::terminal ? "terminal" : p.end == PathEnd::stopped ? "stopped" : "absorbed";
    c.emit.emit("path", {{"states", walk}, {"end", end}, {"probability", c.emit.num(prob)},
                         {"reward", c.emit.num(reward)}});
  }
  c.emit.emit("paths", {{"count", std::to_string(paths.size())}, {"value", c.emit.num(total)}});
  return kSuccess;
}

int cmd_paths_value(Context& c) {
  const GameGraph g = c.game(c.network());
  const TerminalReward t = terminal_reward_from_input(g, c.input());
  const PolicyPair pair = PolicyPair::parse(c.opt.policy);
  const StateKey start = parse_state(c.opt.start);
  const double by_paths = value_by_enumeration(g, pair, start, t, c.opt.cap);
  const double by_recursion = fixed_pair_value(g, t, pair).at(start);
  c.emit.emit("value", {{"enumeration", c.emit.num(by_paths)},
                        {"recursion", c.emit.num(by_recursion)}});
  return std::abs(by_paths - by_recursion) <= 1e-9 ? kSuccess : kVerificationFailed;
}

int cmd_paths_bruteforce(Context& c) {
  const GameGraph g = c.game(c.network());
  const TerminalReward t = terminal_reward_from_input(g, c.input());
  const StateKey start = parse_state(c.opt.start);
  const BruteForceResult r = maxmin_bruteforce(g, start, t, c.opt.bit_limit, c.opt.cap);
  const double shapley = shapley_value(g, t).at(start);
  c.emit.emit("bruteforce", {{"maxmin", c.emit.num(r.maxmin)},
                             {"minmax", c.emit.num(r.minmax)},
                             {"shapley", c.emit.num(shapley)},
                             {"pairs", std::to_string(r.pairs_evaluated)},
                             {"policy", r.argmax_argmin.to_string()}});
  const bool ok = std::abs(r.maxmin - r.minmax) <= 1e-9 && std::abs(r.maxmin - shapley) <= 1e-9;
  return ok ? kSuccess : kVerificationFailed;
}

int cmd_mc(Context& c) {
  const GameGraph g = c.game(c.network());
  const TerminalReward t = terminal_reward_from_input(g, c.input());
  const PolicyPair pair = c.opt.policy.empty() ? optimal_policies(g, t) : PolicyPair::parse(c.opt.policy);
  const MonteCarloResult r = monte_carlo_value(g, pair, parse_state(c.opt.start), t, c.opt.samples,
                                               c.opt.seed, c.opt.workers);
  c.emit.emit("mc", {{"estimate", c.emit.num(r.estimate)},
                     {"standard_error", c.emit.num(r.standard_error)},
                     {"samples", std::to_string(r.samples)},
                     {"seed", std::to_string(c.opt.seed)},
                     {"policy", pair.to_string()}});
  return kSuccess;
}

int cmd_bounds(Context& c) {
  const GameGraph g = c.game(c.network());
  const IntervalVector box{parse_csv(c.opt.lower), parse_csv(c.opt.upper)};
  const LayerIntervals iv = interval_propagate(g, box);
  const std::size_t last = c.opt.layers ? g.depth() - 1 : 1;
  for (std::size_t l = 1; l <= last; ++l) {
    for (std::size_t i = 1; i <= g.width(l); ++i) {
      c.emit.emit(l == 1 ? "output" : "hidden", {{"layer", std::to_string(l)},
                                                 {"index", std::to_string(i)},
                                                 {"lower", c.emit.num(iv.layer(l).lower[i - 1])},
                                                 {"upper", c.emit.num(iv.layer(l).upper[i - 1])}});
    }
  }
  return kSuccess;
}

int cmd_boundary(Context& c) {
  const GameGraph g = c.game(c.network());
  const ValueTable v = value_with_boundary(g, make_boundary(parse_csv(c.opt.plus), parse_csv(c.opt.minus)));
  for (std::size_t l = 1; l < g.depth(); ++l) {
    for (std::size_t i = 1; i <= g.width(l); ++i) {
      c.emit.emit("state", {{"layer", std::to_string(l)},
                            {"index", std::to_string(i)},
                            {"v_plus", c.emit.num(v.at(l, i, Sign::plus))},
                            {"v_minus", c.emit.num(v.at(l, i, Sign::minus))}});
    }
  }
  return kSuccess;
}

int cmd_certify_emit(Context& c) {
  if (c.opt.net.empty() || c.opt.input.empty() || !c.opt.alpha || !c.opt.beta) {
    throw InputError("certify needs --net, --input, --alpha and --beta");
  }
  const NetworkSpec spec = c.network();
  const GameGraph g = c.game(spec);
  const Classification cls = classify(g, c.input(), *c.opt.alpha, *c.opt.beta);
  c.emit.emit("verdict", {{"verdict", std::string(to_string(cls.verdict))},
                          {"value", c.emit.num(cls.network_value)}});
  if (cls.certificate) {
    Certificate cert = *cls.certificate;
    cert.net_hash = network_hash(spec);
    c.emit.emit("certificate", {{"kind", std::string(to_string(cert.kind))},
                                {"threshold", c.emit.num(cert.threshold)},
                                {"policy", cert.policy.to_string()},
                                {"certified_value", c.emit.num(cert.certified_value)},
                                {"net_hash", cert.net_hash}});
    if (!c.opt.out.empty()) {
      std::ofstream f(c.opt.out);
      if (!f) throw InputError("cannot write " + c.opt.out);
      f << serialize_certificate(cert);
    }
  }
  return kSuccess;
}

int cmd_certify_check(Context& c) {
  const NetworkSpec spec = c.network();
  const Certificate cert = parse_certificate(read_file(c.opt.cert));
  const bool hash_ok = cert.net_hash.empty() || cert.net_hash == network_hash(spec);
  const bool valid = hash_ok && check_certificate(c.game(spec), cert);
  c.emit.emit("check", {{"kind", std::string(to_string(cert.kind))},
                        {"hash_match", hash_ok ? "true" : "false"},
                        {"valid", valid ? "true" : "false"}});
  return valid ? kSuccess : kVerificationFailed;
}

int cmd_certify_cell(Context& c) {
  if (c.opt.pi.empty()) throw InputError("--pi is required");
  const GameGraph g = c.game(c.network());
  const bool member = cell_membership(g, PlayerPolicy::parse(c.opt.pi), c.opt.cell_alpha, c.input());
  c.emit.emit("cell", {{"pi", c.opt.pi}, {"alpha", c.emit.num(c.opt.cell_alpha)},
                       {"member", member ? "true" : "false"}});
  return kSuccess;
}

int cmd_softplus_eval(Context& c) {
  const NetworkSpec spec = c.network();
  const Vector x = c.input();
  const Activations act = forward_softplus(spec, x, c.opt.tau);
  const GameGraph g = c.game(spec);
  const EntropicValueTable v = entropic_value(g, terminal_reward_from_input(g, x), c.opt.tau);
  double gap = 0.0;
  c.emit.emit("output", {{"values", c.emit.vec(act.output())}, {"tau", c.emit.num(c.opt.tau)}});
  for (std::size_t l = 1; l < spec.depth(); ++l) {
    for (std::size_t i = 1; i <= spec.width(l); ++i) {
      gap = std::max(gap, std::abs(v.at(l, i, Sign::plus) - act.at(l)[i - 1]));
      c.emit.emit("neuron", {{"layer", std::to_string(l)},
                             {"index", std::to_string(i)},
                             {"y", c.emit.num(act.at(l)[i - 1])},
                             {"v_plus", c.emit.num(v.at(l, i, Sign::plus))},
                             {"v_minus", c.emit.num(v.at(l, i, Sign::minus))}});
    }
  }
  const bool pass = gap <= 1e-9;
  c.emit.emit("entropic_match", {{"max_value_gap", c.emit.num(gap)}, {"pass", pass ? "true" : "false"}});
  return pass ? kSuccess : kVerificationFailed;
}

int cmd_softplus_limit(Context& c) {
  const Vector taus = parse_csv(c.opt.taus);
  const TauLimitReport r = tau_limit_report(c.network(), c.input(), taus);
  for (const TauLimitRow& row : r.rows) {
    c.emit.emit("limit", {{"tau", c.emit.num(row.tau)},
                          {"max_deviation", c.emit.num(row.max_deviation)},
                          {"envelope", c.emit.num(row.envelope)},
                          {"finite", row.finite ? "true" : "false"}});
  }
  c.emit.emit("monotone", {{"strictly_decreasing", r.strictly_decreasing() ? "true" : "false"}});
  return kSuccess;
}

int cmd_softplus_policy(Context& c) {
  const GameGraph g = c.game(c.network());
  const TerminalReward t = terminal_reward_from_input(g, c.input());
  const EntropicValueTable v = entropic_value(g, t, c.opt.tau);
  const StochasticPolicy gibbs = gibbs_policies(g, v);
  const EntropicValueTable attained = entropic_value_given_policy(g, t, c.opt.tau, gibbs);
  for (const GameNode& n : g.nodes()) {
    if (n.key.layer == 0 || n.terminal) continue;
    const ActionProbabilities& a = gibbs.at(n.key);
    c.emit.emit("gibbs", {{"state", to_string(n.key)},
                          {"continue", c.emit.num(a.go)},
                          {"stop", c.emit.num(a.stop)},
                          {"entropy", c.emit.num(entropy(a))},
                          {"value", c.emit.num(v.at(n.key))}});
  }
  double gap = 0.0;
  for (std::size_t k = 0; k < v.values.size(); ++k) {
    gap = std::max(gap, std::abs(v.values[k] - attained.values[k]));
  }
  c.emit.emit("attainment", {{"max_gap", c.emit.num(gap)}});
  return gap <= 1e-9 ? kSuccess : kVerificationFailed;
}

using Handler = std::function<int(Context&)>;

struct Parser {
  CLI::App app{"relugame: ReLU and Softplus networks as zero-sum stopping games", "relugame"};
  Options opt;
  std::vector<std::pair<CLI::App*, Handler>> handlers;
  CLI::App* certify = nullptr;

  Parser() {
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Expand all help");
    app.add_option("--format", opt.format, "Output format")
        ->check(CLI::IsMember({"human", "record"}));
    app.add_option("--mode", opt.mode, "Zero weight rows: strict rejects, lenient keeps them")
        ->check(CLI::IsMember({"strict", "lenient"}));

    auto net = [this](CLI::App* s) { s->add_option("--net", opt.net, "Network file")->required(); };
    auto input = [this](CLI::App* s) { s->add_option("--input", opt.input, "Input vector (CSV)")->required(); };
    auto start = [this](CLI::App* s) { s->add_option("--start", opt.start, "Start state l,i,+|-"); };
    auto fmt = [this](CLI::App* s) {
      s->add_option("--format", opt.format, "Output format")->check(CLI::IsMember({"human", "record"}));
      s->add_option("--mode", opt.mode, "Zero weight rows policy")->check(CLI::IsMember({"strict", "lenient"}));
    };
    auto leaf = [&](CLI::App* parent, const std::string& name, const std::string& help, Handler h) {
      CLI::App* s = parent->add_subcommand(name, help);
      fmt(s);
      handlers.emplace_back(s, std::move(h));
      return s;
    };

    auto* s = leaf(&app, "validate", "Check a network file's structure", cmd_validate);
    net(s);
    s = leaf(&app, "random", "Generate a random network", cmd_random);
    s->add_option("--widths", opt.widths, "Widths, input first (CSV)")->required();
    s->add_option("--seed", opt.seed, "Seed (default 0)");
    s->add_option("--scale", opt.scale, "Entries uniform in [-scale, scale]");
    s->add_option("--out", opt.out, "Output file (stdout if omitted)");
    s = leaf(&app, "eval", "Forward pass and Shapley values per layer", cmd_eval);
    net(s), input(s);

    auto* game = app.add_subcommand("game", "Game construction")->require_subcommand(1);
    s = leaf(game, "export", "Write the game graph in Graphviz format", cmd_game_export);
    net(s);
    s->add_option("--dot", opt.dot, "Output file (stdout if omitted)");

    s = leaf(&app, "policy", "Optimal policy pair and fingerprint", cmd_policy);
    net(s), input(s);
    s = leaf(&app, "fixed", "One-sided value with one player's policy fixed", cmd_fixed);
    net(s), input(s);
    s->add_option("--pi", opt.pi, "Max policy bits");
    s->add_option("--sigma", opt.sigma, "Min policy bits");
    s = leaf(&app, "lipschitz", "Sup-norm Lipschitz bound", cmd_lipschitz);
    net(s);

    auto* paths = app.add_subcommand("paths", "Path-integral evaluation")->require_subcommand(1);
    s = leaf(paths, "enumerate", "List trajectories under a policy pair", cmd_paths_enumerate);
    net(s), input(s), start(s);
    s->add_option("--policy", opt.policy, "Policy pair pi/sigma")->required();
    s->add_option("--cap", opt.cap, "Maximum number of trajectories");
    s = leaf(paths, "value", "Value of a policy pair by path summation", cmd_paths_value);
    net(s), input(s), start(s);
    s->add_option("--policy", opt.policy, "Policy pair pi/sigma")->required();
    s->add_option("--cap", opt.cap, "Maximum number of trajectories");
    s = leaf(paths, "bruteforce", "Max-min over all deterministic policy pairs", cmd_paths_bruteforce);
    net(s), input(s), start(s);
    s->add_option("--bit-limit", opt.bit_limit, "Maximum total policy bits");
    s->add_option("--cap", opt.cap, "Maximum number of trajectories per pair");

    s = leaf(&app, "mc", "Monte-Carlo estimate of a policy pair's value", cmd_mc);
    net(s), input(s), start(s);
    s->add_option("--policy", opt.policy, "Policy pair pi/sigma (optimal if omitted)");
    s->add_option("--samples", opt.samples, "Number of trajectories");
    s->add_option("--seed", opt.seed, "Seed (default 0)");
    s->add_option("--workers", opt.workers, "Threads; does not change the result");

    s = leaf(&app, "bounds", "Propagate an input box to output intervals", cmd_bounds);
    net(s);
    s->add_option("--lower", opt.lower, "Box lower corner (CSV)")->required();
    s->add_option("--upper", opt.upper, "Box upper corner (CSV)")->required();
    s->add_flag("--layers", opt.layers, "Also print hidden-layer intervals");
    s = leaf(&app, "boundary", "Game value under a general boundary (x, x')", cmd_boundary);
    net(s);
    s->add_option("--plus", opt.plus, "Terminal rewards at + states (CSV)")->required();
    s->add_option("--minus", opt.minus, "Terminal rewards at - states (CSV)")->required();

    certify = app.add_subcommand("certify", "Threshold certificates (emit is the default)");
    fmt(certify);
    certify->add_option("--net", opt.net, "Network file");
    certify->add_option("--input", opt.input, "Input vector (CSV)");
    certify->add_option("--alpha", opt.alpha, "Acceptance threshold");
    certify->add_option("--beta", opt.beta, "Rejection threshold");
    certify->add_option("--out", opt.out, "Write the certificate here");
    certify->require_subcommand(0, 1);
    s = leaf(certify, "emit", "Classify and emit a certificate", cmd_certify_emit);
    s->fallthrough();
    s = leaf(certify, "check", "Re-verify a certificate file", cmd_certify_check);
    net(s);
    s->add_option("--cert", opt.cert, "Certificate file")->required();
    s = leaf(certify, "cell", "Membership of x in the cell of a Max policy", cmd_certify_cell);
    net(s), input(s);
    s->add_option("--pi", opt.pi, "Max policy bits")->required();
    s->add_option("--alpha", opt.cell_alpha, "Threshold")->required();

    auto* soft = app.add_subcommand("softplus", "Entropy-regularized game")->require_subcommand(1);
    s = leaf(soft, "eval", "Softplus forward pass and entropic values", cmd_softplus_eval);
    net(s), input(s);
    s->add_option("--tau", opt.tau, "Temperature")->required();
    s = leaf(soft, "limit", "Deviation from the ReLU game as tau shrinks", cmd_softplus_limit);
    net(s), input(s);
    s->add_option("--taus", opt.taus, "Temperatures (CSV, decreasing)");
    s = leaf(soft, "policy", "Gibbs continue probabilities", cmd_softplus_policy);
    net(s), input(s);
    s->add_option("--tau", opt.tau, "Temperature")->required();
  }

  static std::string path_of(const CLI::App* a) {
    std::string p;
    for (; a != nullptr && a->get_parent() != nullptr; a = a->get_parent()) {
      p = p.empty() ? a->get_name() : a->get_name() + " " + p;
    }
    return p;
  }
};

}  // namespace

std::span<const OperationRoute> operation_routes() { return kRoutes; }

std::vector<std::string> registered_subcommands() {
  Parser p;
  std::vector<std::string> names;
  for (const auto& [sub, handler] : p.handlers) names.push_back(Parser::path_of(sub));
  return names;
}

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  Parser p;
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    p.app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << p.app.help();
    return kSuccess;
  } catch (const CLI::CallForAllHelp& e) {
    out << p.app.help("", CLI::AppFormatMode::All);
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  }

  Handler handler;
  for (const auto& [sub, h] : p.handlers) {
    if (sub->parsed()) handler = h;
  }
  if (!handler) handler = cmd_certify_emit;  // bare `certify` with options

  Context ctx{p.opt, out, Emitter(out, p.opt.format == "record" ? Format::record : Format::human)};
  try {
    return handler(ctx);
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  }
}

}  // namespace relugame::cli
