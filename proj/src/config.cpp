#include "sftz/config.hpp"

#include <fstream>
#include <sstream>

namespace sftz {

namespace {

[[noreturn]] void bad(const std::string& path, const std::string& what) {
  fail(ErrorCode::config_invalid, path + ": " + what);
}

double number_at(const Json& node, const std::string& path) {
  if (!node.is_number()) bad(path, "expected a number");
  return node.get<double>();
}

int int_at(const Json& node, const std::string& path) {
  if (!node.is_number_integer()) bad(path, "expected an integer");
  return node.get<int>();
}

}  // namespace

Potential parse_potential(const SubshiftSpec& spec, const Json& node, const std::string& path) {
  if (node.is_number()) return Potential::constant(spec, node.get<double>());
  if (!node.is_object()) bad(path, "expected an object or a number");
  if (node.contains("constant")) {
    if (node.size() != 1) bad(path, "'constant' takes no other keys");
    return Potential::constant(spec, number_at(node["constant"], path + ".constant"));
  }
  if (node.contains("symbols")) {
    const auto& arr = node["symbols"];
    if (!arr.is_array() || static_cast<int>(arr.size()) != spec.k())
      bad(path + ".symbols", "expected " + std::to_string(spec.k()) + " numbers");
    std::vector<double> vals;
    for (std::size_t i = 0; i < arr.size(); ++i)
      vals.push_back(number_at(arr[i], path + ".symbols[" + std::to_string(i) + "]"));
    return Potential::from_symbol_values(spec, std::move(vals));
  }
  if (!node.contains("depth")) bad(path, "needs 'constant', 'symbols' or 'depth' + 'values'");
  const int depth = int_at(node["depth"], path + ".depth");
  if (depth < 1) bad(path + ".depth", "must be >= 1");
  if (!node.contains("values") || !node["values"].is_object())
    bad(path + ".values", "expected an object of word: value");
  std::vector<std::pair<std::string, double>> entries;
  for (const auto& [word, value] : node["values"].items())
    entries.emplace_back(word, number_at(value, path + ".values." + word));
  return potential_from_words(spec, depth, entries);
}

RunConfig parse_config(const Json& doc) {
  if (!doc.is_object()) bad("$", "expected an object");
  for (const auto& [key, value] : doc.items())
    if (key != "subshift" && key != "potentials" && key != "params" && key != "seed")
      bad("$." + key, "unknown key");

  if (!doc.contains("subshift")) bad("$.subshift", "missing");
  const auto& sub = doc["subshift"];
  if (!sub.is_object()) bad("$.subshift", "expected an object");
  if (!sub.contains("k")) bad("$.subshift.k", "missing");
  const int k = int_at(sub["k"], "$.subshift.k");
  if (k < 1) bad("$.subshift.k", "must be >= 1");
  if (!sub.contains("A") || !sub["A"].is_array()) bad("$.subshift.A", "expected a k x k array");
  const auto& rows = sub["A"];
  if (static_cast<int>(rows.size()) != k)
    bad("$.subshift.A", "has " + std::to_string(rows.size()) + " rows, expected " + std::to_string(k));
  std::vector<std::vector<int>> A(k);
  for (int i = 0; i < k; ++i) {
    const std::string rp = "$.subshift.A[" + std::to_string(i) + "]";
    if (!rows[i].is_array() || static_cast<int>(rows[i].size()) != k)
      bad(rp, "expected " + std::to_string(k) + " entries");
    for (int j = 0; j < k; ++j) {
      const std::string ep = rp + "[" + std::to_string(j) + "]";
      const int v = int_at(rows[i][j], ep);
      if (v != 0 && v != 1) bad(ep, "entries must be 0 or 1");
      A[i].push_back(v);
    }
  }
  const auto spec = validate_subshift(k, A);

  Json pots = doc.value("potentials", Json::object());
  if (!pots.is_object()) bad("$.potentials", "expected an object");
  for (const auto& [key, value] : pots.items())
    if (key != "f" && key != "tau" && key != "g" && key != "f_u")
      bad("$.potentials." + key, "unknown potential");
  auto read = [&](const char* name, double fallback) {
    if (!pots.contains(name)) return Potential::constant(spec, fallback);
    return parse_potential(spec, pots[name], std::string("$.potentials.") + name);
  };
  RunConfig cfg{spec, read("f", 0.0), read("tau", 1.0), read("g", 0.0), std::nullopt,
                Json::object(), 1, doc};
  if (pots.contains("f_u")) cfg.f_u = parse_potential(spec, pots["f_u"], "$.potentials.f_u");

  if (doc.contains("params")) {
    if (!doc["params"].is_object()) bad("$.params", "expected an object");
    cfg.params = doc["params"];
  }
  if (doc.contains("seed")) {
    const auto& seed = doc["seed"];
    if (!seed.is_number_integer() || (!seed.is_number_unsigned() && seed.get<std::int64_t>() < 0))
      bad("$.seed", "expected a non-negative integer");
    cfg.seed = doc["seed"].get<std::uint64_t>();
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::config_invalid, path + ": cannot open");
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const Json::parse_error& e) {
    fail(ErrorCode::config_invalid, path + ": " + e.what());
  }
  return parse_config(doc);
}

double RunConfig::get_double(const std::string& key, double fallback) const {
  if (!params.contains(key)) return fallback;
  return number_at(params[key], "$.params." + key);
}

int RunConfig::get_int(const std::string& key, int fallback) const {
  if (!params.contains(key)) return fallback;
  return int_at(params[key], "$.params." + key);
}

bool RunConfig::get_bool(const std::string& key, bool fallback) const {
  if (!params.contains(key)) return fallback;
  if (!params[key].is_boolean()) bad("$.params." + key, "expected true or false");
  return params[key].get<bool>();
}

std::string RunConfig::get_string(const std::string& key, const std::string& fallback) const {
  if (!params.contains(key)) return fallback;
  if (!params[key].is_string()) bad("$.params." + key, "expected a string");
  return params[key].get<std::string>();
}

std::vector<double> RunConfig::get_doubles(const std::string& key,
                                           std::vector<double> fallback) const {
  if (!params.contains(key)) return fallback;
  const auto& node = params[key];
  const std::string path = "$.params." + key;
  if (node.is_number()) return {node.get<double>()};
  if (!node.is_array()) bad(path, "expected a number or an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < node.size(); ++i)
    out.push_back(number_at(node[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace sftz
