#include "causal/result_json.hpp"

namespace causal {

Json rational_json(const Rational& r) {
  Json j = Json::object();
  j["num"] = r.num().str();
  j["den"] = r.den().str();
  return j;
}

Json witness_json(const CauseWitness& w) {
  Json j = Json::object();
  j["x_prime"] = w.x_prime;
  Json changed = Json::array();
  for (const auto& [var, v] : w.changed) {
    Json pair = Json::object();
    pair["var"] = var;
    pair["value"] = v;
    changed.push_back(std::move(pair));
  }
  j["changed"] = std::move(changed);
  Json frozen = Json::array();
  for (const auto& [var, v] : w.frozen) {
    Json pair = Json::object();
    pair["var"] = var;
    pair["value"] = v;
    frozen.push_back(std::move(pair));
  }
  j["frozen"] = std::move(frozen);
  j["k"] = w.k();
  return j;
}

Json diagnostics_json(const std::vector<Diagnostic>& diags) {
  Json arr = Json::array();
  for (const auto& d : diags) {
    Json j = Json::object();
    j["code"] = d.code;
    j["subject"] = d.subject;
    j["message"] = d.message;
    arr.push_back(std::move(j));
  }
  return arr;
}

Json ResultDocument::to_json() const {
  Json j = Json::object();
  j["command"] = command;
  j["query"] = query;
  j["kind"] = kind;
  j["value"] = value;
  j["witness"] = witness ? witness_json(*witness) : Json();
  if (!detail.is_null()) j["detail"] = detail;
  j["diagnostics"] = diagnostics_json(diagnostics);
  j["timing_ms"] = timing_ms;
  return j;
}

}  // namespace causal
