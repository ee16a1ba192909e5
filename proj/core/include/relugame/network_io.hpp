#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "relugame/network.hpp"

namespace relugame {

// Network files are JSON documents, layers stored input-first:
//
//   {
//     "activation": "relu",            // optional, "relu" | "softplus"
//     "tau": 0.5,                      // required iff activation is softplus
//     "widths": [2, 2, 1],             // input width first
//     "layers": [
//       {"W": [[7, -8], [-1, -2]], "b": [42, 33]},
//       {"W": [[2, -5]], "b": [7]}
//     ]
//   }
//
// W is row-major: one inner array per output neuron. Numbers are written with
// the shortest representation that round-trips, so load(save(n)) == n bitwise.

NetworkSpec parse_network(std::string_view text);
/// Like parse_network but returns structurally invalid networks as-is so that
/// validate() can report every problem; JSON syntax errors still throw.
NetworkSpec parse_network_unchecked(std::string_view text);
std::string serialize_network(const NetworkSpec& spec);

NetworkSpec load_network(const std::filesystem::path& path);
void save_network(const NetworkSpec& spec, const std::filesystem::path& path);

/// 64-bit FNV-1a of the canonical serialization, as 16 hex digits.
std::string network_hash(const NetworkSpec& spec);

}  // namespace relugame
