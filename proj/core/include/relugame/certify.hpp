#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "relugame/value.hpp"

namespace relugame {

enum class CertificateKind { accept, reject };

/// A single player's policy whose one-sided value clears a threshold at x:
/// accept carries Max's pi with f^pi(x) >= threshold (so f(x) >= threshold),
/// reject carries Min's sigma with ^sigma f(x) <= threshold.
struct Certificate {
  CertificateKind kind = CertificateKind::accept;
  double threshold = 0.0;
  PlayerPolicy policy;
  double certified_value = 0.0;  // informational; check_certificate recomputes it
  Vector input;
  std::string net_hash;  // optional binding to a network file
};

struct CertifyOutcome {
  std::optional<Certificate> certificate;
  double network_value = 0.0;  // f(x)

  bool certified() const { return certificate.has_value(); }
};

/// Certificate for f(x) >= alpha built from Max's optimal policy, or a refusal
/// carrying f(x). Single-output networks only.
CertifyOutcome certify_accept(const GameGraph& graph, std::span<const double> x, double alpha);

/// Certificate for f(x) <= beta built from Min's optimal policy, or a refusal.
CertifyOutcome certify_reject(const GameGraph& graph, std::span<const double> x, double beta);

/// Recomputes the one-sided value of the stored policy by a backward sweep and
/// checks the threshold. The stored certified_value is never trusted.
bool check_certificate(const GameGraph& graph, const Certificate& cert);

/// x in C^pi_alpha, i.e. f^pi(x) >= alpha.
bool cell_membership(const GameGraph& graph, const PlayerPolicy& pi, double alpha,
                     std::span<const double> x);

/// x in ^sigma C_beta, i.e. ^sigma f(x) <= beta.
bool reject_cell_membership(const GameGraph& graph, const PlayerPolicy& sigma, double beta,
                            std::span<const double> x);

enum class Verdict { accept, reject, unclassified };

struct Classification {
  Verdict verdict = Verdict::unclassified;
  double network_value = 0.0;
  std::optional<Certificate> certificate;
};

/// Accept if f(x) >= alpha, reject if f(x) <= beta, otherwise unclassified.
/// Requires alpha > beta.
Classification classify(const GameGraph& graph, std::span<const double> x, double alpha,
                        double beta);

std::string_view to_string(CertificateKind kind);
std::string_view to_string(Verdict verdict);

// Certificate files are JSON objects with keys "net_hash", "input", "kind"
// ("accept" | "reject"), "threshold", "policy" (bit string) and "certified_value".
std::string serialize_certificate(const Certificate& cert);
Certificate parse_certificate(std::string_view text);

}  // namespace relugame
