#include "relugame/network_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace relugame {

using nlohmann::json;

NetworkSpec parse_network_unchecked(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("network file is not valid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("layers") || !doc["layers"].is_array()) {
    throw InputError("network file needs a \"layers\" array");
  }

  ActivationKind activation;
  if (doc.contains("activation")) {
    const auto name = doc["activation"].get<std::string>();
    if (name == "relu") {
      activation.kind = Activation::relu;
    } else if (name == "softplus") {
      activation.kind = Activation::softplus;
      if (!doc.contains("tau")) throw InputError("softplus network needs \"tau\"");
      activation.tau = doc["tau"].get<double>();
    } else {
      throw InputError("unknown activation \"" + name + "\"");
    }
  }

  std::vector<Layer> input_first;
  try {
    for (const auto& entry : doc["layers"]) {
      const auto& rows = entry.at("W");
      Vector bias = entry.at("b").get<Vector>();
      const std::size_t n_rows = rows.size();
      const std::size_t n_cols = n_rows == 0 ? 0 : rows.at(0).size();
      std::vector<double> data;
      data.reserve(n_rows * n_cols);
      for (const auto& row : rows) {
        if (row.size() != n_cols) throw InputError("ragged weight matrix in network file");
        for (const auto& v : row) data.push_back(v.get<double>());
      }
      input_first.push_back({Matrix(n_rows, n_cols, std::move(data)), std::move(bias)});
    }
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed layer in network file: ") + e.what());
  }

  NetworkSpec spec = from_input_first(std::move(input_first), activation);
  if (doc.contains("widths")) {
    const auto widths = doc["widths"].get<std::vector<std::size_t>>();
    if (!widths.empty()) spec.input_width = widths.front();
    auto actual = spec.widths();
    std::vector<std::size_t> expected(widths.rbegin(), widths.rend());
    if (actual != expected) throw InputError("\"widths\" disagrees with the layer shapes");
  }
  return spec;
}

NetworkSpec parse_network(std::string_view text) {
  NetworkSpec spec = parse_network_unchecked(text);
  require_valid(spec);
  return spec;
}

std::string serialize_network(const NetworkSpec& spec) {
  json doc;
  if (spec.activation.kind == Activation::softplus) {
    doc["activation"] = "softplus";
    doc["tau"] = spec.activation.tau;
  } else {
    doc["activation"] = "relu";
  }
  auto widths = spec.widths();
  doc["widths"] = std::vector<std::size_t>(widths.rbegin(), widths.rend());
  json layers = json::array();
  for (auto it = spec.layers.rbegin(); it != spec.layers.rend(); ++it) {
    json rows = json::array();
    for (std::size_t i = 0; i < it->weights.rows(); ++i) {
      const auto r = it->weights.row(i);
      rows.push_back(std::vector<double>(r.begin(), r.end()));
    }
    layers.push_back({{"W", rows}, {"b", it->bias}});
  }
  doc["layers"] = layers;
  return doc.dump(2) + "\n";
}

NetworkSpec load_network(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open network file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_network(buf.str());
}

void save_network(const NetworkSpec& spec, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write network file " + path.string());
  out << serialize_network(spec);
}

std::string network_hash(const NetworkSpec& spec) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : serialize_network(spec)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace relugame
