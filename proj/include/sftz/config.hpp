#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sftz/potential.hpp"

namespace sftz {

using Json = nlohmann::json;

/// Parsed experiment file.
///
///   { "subshift":   { "k": 2, "A": [[1,1],[1,0]] },
///     "potentials": { "f": {...}, "tau": {...}, "g": {...}, "f_u": {...} },
///     "params":     { ... free-form, read through the typed getters ... },
///     "seed": 1 }
///
/// A potential is { "constant": c }, { "symbols": [v1, .., vk] } or
/// { "depth": n, "values": { "12": v, ... } }.  Missing f and g read as 0, missing
/// tau as 1; f_u falls back to the normalized f at run time.
struct RunConfig {
  SubshiftSpec spec;
  Potential f;
  Potential tau;
  Potential g;
  std::optional<Potential> f_u;
  Json params;
  std::uint64_t seed = 1;
  /// The document as read, for the manifest.
  Json source;

  double get_double(const std::string& key, double fallback) const;
  int get_int(const std::string& key, int fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  std::vector<double> get_doubles(const std::string& key, std::vector<double> fallback) const;
  bool has(const std::string& key) const { return params.contains(key); }
};

/// Throws ConfigInvalid with the JSON path of the first bad field.  Errors raised while
/// validating the matrix or the tables (ZeroRowOrColumn, InadmissibleWord, ...) pass
/// through unchanged.
RunConfig parse_config(const Json& doc);
RunConfig load_config(const std::string& path);

Potential parse_potential(const SubshiftSpec& spec, const Json& node, const std::string& path);

/// 64-bit FNV-1a of the text.
std::uint64_t fnv1a(const std::string& text);

}  // namespace sftz
