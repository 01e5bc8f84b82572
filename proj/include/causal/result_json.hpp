#pragma once

#include "causal/text.hpp"

#include <json.hpp>

namespace causal {

using Json = nlohmann::ordered_json;

// Machine-readable result envelope for every CLI command. The layout is
// mirrored by schema/result.schema.json. `timing_ms` is the only field
// allowed to differ between identical invocations.
struct ResultDocument {
  std::string command;                  // subcommand name
  Json query = Json::object();          // echo of the inputs that shaped the result
  std::string kind;                     // "boolean" | "rational" | "integer" | "document"
  Json value;                           // shaped by `kind`
  std::optional<CauseWitness> witness;  // present for witness-producing queries
  Json detail;                          // optional command-specific breakdown
  std::vector<Diagnostic> diagnostics;
  double timing_ms = 0.0;

  Json to_json() const;
};

// { "num": "p", "den": "q" } with the canonical reduced representation.
Json rational_json(const Rational& r);

Json witness_json(const CauseWitness& w);

Json diagnostics_json(const std::vector<Diagnostic>& diags);

}  // namespace causal
