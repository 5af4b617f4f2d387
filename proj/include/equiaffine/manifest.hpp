#ifndef EQUIAFFINE_MANIFEST_HPP
#define EQUIAFFINE_MANIFEST_HPP

// JSON manifest describing a connection (and optionally an auxiliary metric)
// on a rectangular chart:
//
//   {
//     "dimension": 2,
//     "coordinates": ["x0", "x1"],            optional, default x0..x{n-1}
//     "domain": {"lo": [-1, -1], "hi": [1, 1]},
//     "seed": 7,                              optional
//     "metric": {"0_0": "1", "1_1": "x0^2"},  optional "i_j" (i <= j), default identity
//     "connection": {"0_00": "x1"},           "h_ij" (i <= j), unlisted entries are 0
//     "psi": {"0": "...", "1": "..."},        written by equiaffinize
//     "source_connection": {...}              written by equiaffinize
//   }
//
// Connection keys with more than 10 coordinates are written "h_i,j".

#include <cctype>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "equiaffine/geometry.hpp"

namespace equiaffine {

struct Manifest {
  Chart chart;
  ConnectionField connection;
  MetricField metric;
  bool has_metric = false;
  std::optional<std::uint64_t> seed = std::nullopt;
  std::optional<OneFormField> psi = std::nullopt;
  std::optional<ConnectionField> source_connection = std::nullopt;
  std::string digest = {};
};

/// FNV-1a 64-bit digest of a byte string, as "fnv1a64:<16 hex digits>".
inline std::string digest_of(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[32];
  std::snprintf(buf, sizeof(buf), "fnv1a64:%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace detail {

using ordered_json = nlohmann::ordered_json;

inline int parse_index(std::string_view s, int n, const std::string& key) {
  if (s.empty() || s.find_first_not_of("0123456789") != std::string_view::npos)
    throw ManifestError("malformed index in key '" + key + "'");
  const int v = std::stoi(std::string(s));
  if (v >= n) throw ManifestError("index " + std::to_string(v) + " out of range in key '" + key + "' (dimension " + std::to_string(n) + ")");
  return v;
}

/// "ij" (single digits) or "i,j".
inline std::pair<int, int> parse_pair(std::string_view s, int n, const std::string& key) {
  const auto comma = s.find(',');
  if (comma != std::string_view::npos)
    return {parse_index(s.substr(0, comma), n, key), parse_index(s.substr(comma + 1), n, key)};
  if (s.size() != 2) throw ManifestError("malformed index pair in key '" + key + "'");
  return {parse_index(s.substr(0, 1), n, key), parse_index(s.substr(1, 1), n, key)};
}

inline std::string pair_key(int i, int j, int n) {
  return n > 10 ? std::to_string(i) + "," + std::to_string(j) : std::to_string(i) + std::to_string(j);
}

inline Expression parse_entry(const Chart& chart, const ordered_json& value, const std::string& where) {
  if (!value.is_string()) throw ManifestError(where + ": expression must be a string");
  try {
    return chart.parse(value.get<std::string>());
  } catch (const ParseError& e) {
    throw ManifestError(where + ": " + e.what());
  }
}

inline std::vector<double> read_bounds(const ordered_json& j, const char* name, int n) {
  if (!j.contains(name) || !j[name].is_array()) throw ManifestError(std::string("domain.") + name + " must be an array");
  std::vector<double> out;
  for (const auto& v : j[name]) {
    if (!v.is_number()) throw ManifestError(std::string("domain.") + name + " entries must be numbers");
    out.push_back(v.get<double>());
  }
  if (static_cast<int>(out.size()) != n) throw ManifestError(std::string("domain.") + name + " must have one entry per coordinate");
  return out;
}

inline ConnectionField read_connection(const Chart& chart, const ordered_json& section, const char* name) {
  if (!section.is_object()) throw ManifestError(std::string(name) + " must be an object");
  const int n = chart.dim();
  ConnectionField c(chart);
  for (const auto& [key, value] : section.items()) {
    const auto us = key.find('_');
    if (us == std::string::npos) throw ManifestError(std::string(name) + " key '" + key + "' must look like h_ij");
    const std::string_view whole(key);
    const int h = parse_index(whole.substr(0, us), n, key);
    const auto [i, j] = parse_pair(whole.substr(us + 1, whole.size() - us - 1), n, key);
    if (i > j) throw ManifestError(std::string(name) + " key '" + key + "' must use the i <= j representative");
    c.set(h, i, j, parse_entry(chart, value, std::string(name) + " " + key));
  }
  return c;
}

inline ordered_json write_connection(const ConnectionField& c) {
  const int n = c.dim();
  ordered_json out = ordered_json::object();
  for (int h = 0; h < n; ++h)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        const Expression& e = c(h, i, j);
        if (e.is_constant(0.0)) continue;
        out[std::to_string(h) + "_" + pair_key(i, j, n)] = c.chart().render(e);
      }
  return out;
}

}  // namespace detail

inline Manifest parse_manifest(std::string_view text) {
  using detail::ordered_json;
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ManifestError(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ManifestError("manifest must be a JSON object");
  if (!j.contains("dimension") || !j["dimension"].is_number_integer()) throw ManifestError("dimension must be an integer");
  const int n = j["dimension"].get<int>();
  if (n < 2 || n > kMaxDimension) throw ManifestError("dimension must lie in [2, " + std::to_string(kMaxDimension) + "]");

  std::vector<std::string> names;
  if (j.contains("coordinates")) {
    if (!j["coordinates"].is_array()) throw ManifestError("coordinates must be an array of names");
    for (const auto& v : j["coordinates"]) {
      if (!v.is_string()) throw ManifestError("coordinate names must be strings");
      names.push_back(v.get<std::string>());
    }
  }
  if (!j.contains("domain") || !j["domain"].is_object()) throw ManifestError("domain must be an object with lo and hi");

  Chart chart = [&] {
    try {
      return Chart(n, detail::read_bounds(j["domain"], "lo", n), detail::read_bounds(j["domain"], "hi", n), names);
    } catch (const DimensionError& e) {
      throw ManifestError(e.what());
    }
  }();
  for (const auto& name : chart.names()) {
    if (name.empty() || !(std::isalpha(static_cast<unsigned char>(name[0])) || name[0] == '_') ||
        name.find_first_not_of("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789_") != std::string::npos ||
        detail::function_from_name(name))
      throw ManifestError("invalid coordinate name '" + name + "'");
  }

  if (!j.contains("connection")) throw ManifestError("connection section is required");
  Manifest m{.chart = chart,
             .connection = detail::read_connection(chart, j["connection"], "connection"),
             .metric = MetricField::identity(chart)};

  if (j.contains("metric")) {
    const auto& section = j["metric"];
    if (!section.is_object()) throw ManifestError("metric must be an object");
    m.has_metric = true;
    MetricField metric(chart);
    for (const auto& [key, value] : section.items()) {
      const auto us = key.find('_');
      if (us == std::string::npos) throw ManifestError("metric key '" + key + "' must look like i_j");
      const int i = detail::parse_index(std::string_view(key).substr(0, us), n, key);
      const int jj = detail::parse_index(std::string_view(key).substr(us + 1), n, key);
      if (i > jj) throw ManifestError("metric key '" + key + "' must use the i <= j representative");
      metric.set(i, jj, detail::parse_entry(chart, value, "metric " + key));
    }
    m.metric = std::move(metric);
  }

  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) throw ManifestError("seed must be a non-negative integer");
    m.seed = j["seed"].get<std::uint64_t>();
  }

  if (j.contains("psi")) {
    const auto& section = j["psi"];
    if (!section.is_object()) throw ManifestError("psi must be an object");
    OneFormField psi(chart);
    for (const auto& [key, value] : section.items())
      psi.set(detail::parse_index(key, n, key), detail::parse_entry(chart, value, "psi " + key));
    m.psi = std::move(psi);
  }
  if (j.contains("source_connection"))
    m.source_connection = detail::read_connection(chart, j["source_connection"], "source_connection");

  m.digest = digest_of(text);
  return m;
}

inline Manifest load_manifest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ManifestError("cannot open manifest '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_manifest(ss.str());
}

/// Serializes with a fixed key order; the output re-parses to the same fields.
inline std::string dump_manifest(const Manifest& m) {
  using detail::ordered_json;
  const Chart& chart = m.chart;
  const int n = chart.dim();
  ordered_json j;
  j["dimension"] = n;
  j["coordinates"] = chart.names();
  j["domain"] = ordered_json{{"lo", chart.lo()}, {"hi", chart.hi()}};
  if (m.seed) j["seed"] = *m.seed;
  if (m.has_metric) {
    ordered_json metric = ordered_json::object();
    for (int i = 0; i < n; ++i)
      for (int k = i; k < n; ++k) {
        const Expression& e = m.metric(i, k);
        if (e.is_constant(0.0)) continue;
        metric[std::to_string(i) + "_" + std::to_string(k)] = chart.render(e);
      }
    j["metric"] = metric;
  }
  j["connection"] = detail::write_connection(m.connection);
  if (m.psi) {
    ordered_json psi = ordered_json::object();
    for (int i = 0; i < n; ++i) psi[std::to_string(i)] = chart.render((*m.psi)[i]);
    j["psi"] = psi;
  }
  if (m.source_connection) j["source_connection"] = detail::write_connection(*m.source_connection);
  return j.dump(2) + "\n";
}

}  // namespace equiaffine

#endif  // EQUIAFFINE_MANIFEST_HPP
