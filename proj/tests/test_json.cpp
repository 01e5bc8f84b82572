#include "causal/result_json.hpp"

#include <doctest.h>

using namespace causal;

TEST_CASE("rational_json uses decimal strings") {
  Json half = rational_json(Rational(1, 2));
  CHECK(half["num"] == "1");
  CHECK(half["den"] == "2");
  Json neg = rational_json(Rational(-2, 4));
  CHECK(neg["num"] == "-1");
  CHECK(neg["den"] == "2");
  Json zero = rational_json(Rational(0));
  CHECK(zero["num"] == "0");
  CHECK(zero["den"] == "1");

  // Values beyond 64 bits survive as strings.
  Rational big(BigInt(1) << 80, BigInt(3));
  Json j = rational_json(big);
  CHECK(j["num"] == (BigInt(1) << 80).str());
  CHECK(j["den"] == "3");
}

TEST_CASE("witness_json carries both parts and k") {
  CauseWitness w;
  w.x_prime = 0;
  w.changed = {{"BT", 0}, {"SH", 1}};
  w.frozen = {{"BH", 0}};
  Json j = witness_json(w);
  CHECK(j["x_prime"] == 0);
  CHECK(j["k"] == 2);
  REQUIRE(j["changed"].size() == 2);
  CHECK(j["changed"][0]["var"] == "BT");
  CHECK(j["changed"][0]["value"] == 0);
  CHECK(j["changed"][1]["var"] == "SH");
  REQUIRE(j["frozen"].size() == 1);
  CHECK(j["frozen"][0]["var"] == "BH");
}

TEST_CASE("result documents keep a stable key order") {
  ResultDocument doc;
  doc.command = "responsibility";
  doc.query["model"] = "rock_naive";
  doc.kind = "rational";
  doc.value = rational_json(Rational(1, 2));
  CauseWitness w;
  w.x_prime = 0;
  w.changed = {{"BT", 0}};
  doc.witness = w;
  doc.diagnostics.push_back({"inconclusive", "search", "capped"});
  doc.timing_ms = 12.5;

  Json j = doc.to_json();
  std::vector<std::string> keys;
  for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
  CHECK(keys == std::vector<std::string>{"command", "query", "kind", "value", "witness",
                                         "diagnostics", "timing_ms"});
  CHECK(j["command"] == "responsibility");
  CHECK(j["value"]["num"] == "1");
  CHECK(j["witness"]["k"] == 1);
  CHECK(j["diagnostics"][0]["code"] == "inconclusive");

  // Detail slots in before diagnostics when present; witness null when absent.
  ResultDocument plain;
  plain.command = "blame";
  plain.kind = "rational";
  plain.value = rational_json(Rational(5, 8));
  plain.detail["per_situation"] = Json::array();
  Json pj = plain.to_json();
  keys.clear();
  for (auto it = pj.begin(); it != pj.end(); ++it) keys.push_back(it.key());
  CHECK(keys == std::vector<std::string>{"command", "query", "kind", "value", "witness",
                                         "detail", "diagnostics", "timing_ms"});
  CHECK(pj["witness"].is_null());
  CHECK(pj["diagnostics"].is_array());
  CHECK(pj["diagnostics"].empty());
}

TEST_CASE("serialized documents re-parse") {
  ResultDocument doc;
  doc.command = "eval";
  doc.kind = "boolean";
  doc.value = true;
  std::string text = doc.to_json().dump(2);
  Json back = Json::parse(text);
  CHECK(back["kind"] == "boolean");
  CHECK(back["value"] == true);
}
