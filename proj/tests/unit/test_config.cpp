#include <doctest.h>

#include "sftz/config.hpp"

using namespace sftz;

namespace {

std::string message_of(const Json& doc) {
  try {
    parse_config(doc);
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

ErrorCode code_of(const Json& doc) {
  try {
    parse_config(doc);
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::invalid_argument;
}

Json golden() { return Json::parse(R"({"subshift": {"k": 2, "A": [[1,1],[1,0]]}})"); }

}  // namespace

TEST_CASE("defaults") {
  const auto cfg = parse_config(golden());
  CHECK(cfg.f.table() == std::vector<double>{0.0, 0.0});
  CHECK(cfg.tau.table() == std::vector<double>{1.0, 1.0});
  CHECK(!cfg.f_u);
  CHECK(cfg.seed == 1);
  CHECK(cfg.get_double("T", 4.5) == 4.5);
}

TEST_CASE("potential forms") {
  auto doc = golden();
  doc["potentials"] = Json::parse(R"({
    "f": 0.25,
    "tau": {"symbols": [1, 2]},
    "g": {"depth": 2, "values": {"11": 1, "12": 2, "21": 3}},
    "f_u": {"constant": -0.5}})");
  doc["params"] = Json::parse(R"({"T": [3, 4], "N": 12, "mode": "theorem", "flag": true})");
  doc["seed"] = 7;
  const auto cfg = parse_config(doc);
  CHECK(cfg.f.table() == std::vector<double>{0.25, 0.25});
  CHECK(cfg.tau.table() == std::vector<double>{1.0, 2.0});
  CHECK(cfg.g.depth() == 2);
  CHECK(cfg.g.table() == std::vector<double>{1.0, 2.0, 3.0});
  CHECK(cfg.f_u->table() == std::vector<double>{-0.5, -0.5});
  CHECK(cfg.get_doubles("T", {}) == std::vector<double>{3.0, 4.0});
  CHECK(cfg.get_int("N", 0) == 12);
  CHECK(cfg.get_string("mode", "") == "theorem");
  CHECK(cfg.get_bool("flag", false));
  CHECK(cfg.seed == 7);
}

TEST_CASE("field paths in errors") {
  auto doc = golden();
  doc["extra"] = 1;
  CHECK(message_of(doc).find("$.extra") != std::string::npos);

  doc = golden();
  doc["subshift"]["A"][1][0] = 2;
  CHECK(message_of(doc).find("$.subshift.A[1][0]") != std::string::npos);
  CHECK(code_of(doc) == ErrorCode::config_invalid);

  doc = golden();
  doc["potentials"] = Json::parse(R"({"tau": {"symbols": [1]}})");
  CHECK(message_of(doc).find("$.potentials.tau.symbols") != std::string::npos);

  doc = golden();
  doc["potentials"] = Json::parse(R"({"h": 1})");
  CHECK(message_of(doc).find("$.potentials.h") != std::string::npos);

  doc = golden();
  doc["params"] = Json::parse(R"({"N": "many"})");
  const auto cfg = parse_config(doc);
  try {
    cfg.get_int("N", 0);
    FAIL("expected ConfigInvalid");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("$.params.N") != std::string::npos);
  }
}

TEST_CASE("matrix and table errors keep their codes") {
  CHECK(code_of(Json::parse(R"({"subshift": {"k": 2, "A": [[1,1],[0,0]]}})")) ==
        ErrorCode::zero_row_or_column);
  auto doc = golden();
  doc["potentials"] = Json::parse(R"({"g": {"depth": 2, "values": {"11": 1, "12": 2}}})");
  CHECK(code_of(doc) == ErrorCode::missing_word);
  doc["potentials"] = Json::parse(R"({"g": {"depth": 2, "values": {"11": 1, "12": 2, "21": 3, "22": 4}}})");
  CHECK(code_of(doc) == ErrorCode::inadmissible_word);
}

TEST_CASE("load_config failures") {
  try {
    load_config("/nonexistent/config.json");
    FAIL("expected ConfigInvalid");
  } catch (const Error& e) {
    CHECK(e.exit_code() == 2);
  }
}

TEST_CASE("fnv1a") {
  CHECK(fnv1a("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a("a") == 0xaf63dc4c8601ec8cULL);
}
