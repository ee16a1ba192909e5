#include "relugame/certify.hpp"

#include <cmath>

#include "json.hpp"

namespace relugame {

namespace {

void require_single_output(const GameGraph& graph) {
  if (graph.width(1) != 1) {
    throw InputError("certificates need a single-output network, this one has " +
                     std::to_string(graph.width(1)) + " outputs");
  }
}

constexpr StateKey kOutputPlus{1, 1, Sign::plus};

double one_sided_value(const GameGraph& graph, const Certificate& cert) {
  const TerminalReward t = terminal_reward_from_input(graph, cert.input);
  return cert.kind == CertificateKind::accept
             ? fixed_policy_value_max(graph, t, cert.policy).at(kOutputPlus)
             : fixed_policy_value_min(graph, t, cert.policy).at(kOutputPlus);
}

}  // namespace

CertifyOutcome certify_accept(const GameGraph& graph, std::span<const double> x, double alpha) {
  require_single_output(graph);
  const TerminalReward t = terminal_reward_from_input(graph, x);
  const ValueTable v = shapley_value(graph, t);
  CertifyOutcome out;
  out.network_value = v.at(kOutputPlus);
  if (out.network_value >= alpha) {
    Certificate c;
    c.kind = CertificateKind::accept;
    c.threshold = alpha;
    c.policy = optimal_policies(graph, v).max;
    c.certified_value = fixed_policy_value_max(graph, t, c.policy).at(kOutputPlus);
    c.input.assign(x.begin(), x.end());
    out.certificate = std::move(c);
  }
  return out;
}

CertifyOutcome certify_reject(const GameGraph& graph, std::span<const double> x, double beta) {
  require_single_output(graph);
  const TerminalReward t = terminal_reward_from_input(graph, x);
  const ValueTable v = shapley_value(graph, t);
  CertifyOutcome out;
  out.network_value = v.at(kOutputPlus);
  if (out.network_value <= beta) {
    Certificate c;
    c.kind = CertificateKind::reject;
    c.threshold = beta;
    c.policy = optimal_policies(graph, v).min;
    c.certified_value = fixed_policy_value_min(graph, t, c.policy).at(kOutputPlus);
    c.input.assign(x.begin(), x.end());
    out.certificate = std::move(c);
  }
  return out;
}

bool check_certificate(const GameGraph& graph, const Certificate& cert) {
  require_single_output(graph);
  if (cert.input.size() != graph.width(graph.depth()) ||
      cert.policy.bits.size() != graph.layout().interior_neurons() ||
      !std::isfinite(cert.threshold)) {
    return false;
  }
  const double value = one_sided_value(graph, cert);
  return cert.kind == CertificateKind::accept ? value >= cert.threshold : value <= cert.threshold;
}

bool cell_membership(const GameGraph& graph, const PlayerPolicy& pi, double alpha,
                     std::span<const double> x) {
  const TerminalReward t = terminal_reward_from_input(graph, x);
  return fixed_policy_value_max(graph, t, pi).at(kOutputPlus) >= alpha;
}

bool reject_cell_membership(const GameGraph& graph, const PlayerPolicy& sigma, double beta,
                            std::span<const double> x) {
  const TerminalReward t = terminal_reward_from_input(graph, x);
  return fixed_policy_value_min(graph, t, sigma).at(kOutputPlus) <= beta;
}

Classification classify(const GameGraph& graph, std::span<const double> x, double alpha,
                        double beta) {
  if (!(alpha > beta)) throw InputError("thresholds must satisfy alpha > beta");
  Classification c;
  if (auto acc = certify_accept(graph, x, alpha); acc.certified()) {
    c.verdict = Verdict::accept;
    c.network_value = acc.network_value;
    c.certificate = std::move(acc.certificate);
    return c;
  }
  auto rej = certify_reject(graph, x, beta);
  c.network_value = rej.network_value;
  if (rej.certified()) {
    c.verdict = Verdict::reject;
    c.certificate = std::move(rej.certificate);
  }
  return c;
}

std::string_view to_string(CertificateKind kind) {
  return kind == CertificateKind::accept ? "accept" : "reject";
}

std::string_view to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::accept: return "accept";
    case Verdict::reject: return "reject";
    case Verdict::unclassified: break;
  }
  return "unclassified";
}

std::string serialize_certificate(const Certificate& cert) {
  nlohmann::json doc;
  doc["net_hash"] = cert.net_hash;
  doc["input"] = cert.input;
  doc["kind"] = std::string(to_string(cert.kind));
  doc["threshold"] = cert.threshold;
  doc["policy"] = cert.policy.to_string();
  doc["certified_value"] = cert.certified_value;
  return doc.dump(2) + "\n";
}

Certificate parse_certificate(std::string_view text) {
  try {
    const auto doc = nlohmann::json::parse(text);
    Certificate c;
    c.net_hash = doc.value("net_hash", std::string());
    c.input = doc.at("input").get<Vector>();
    const auto kind = doc.at("kind").get<std::string>();
    if (kind == "accept") {
      c.kind = CertificateKind::accept;
    } else if (kind == "reject") {
      c.kind = CertificateKind::reject;
    } else {
      throw InputError("certificate kind must be accept or reject");
    }
    c.threshold = doc.at("threshold").get<double>();
    c.policy = PlayerPolicy::parse(doc.at("policy").get<std::string>());
    c.certified_value = doc.value("certified_value", 0.0);
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed certificate: ") + e.what());
  }
}

}  // namespace relugame
