#pragma once

#include "causal/qbf.hpp"

#include <filesystem>

namespace causal {

// Parse failure with position information; `line` and `col` are 1-based.
// line == 0 marks a file-level problem (unreadable file, missing section)
// with no meaningful position.
class ParseError : public CausalError {
public:
  ParseError(const std::string& message, int line, int col)
      : CausalError(line > 0 ? "line " + std::to_string(line) + ", column " +
                                   std::to_string(col) + ": " + message
                             : message),
        line(line),
        col(col),
        detail(message) {}

  int line;
  int col;
  std::string detail;
};

// A model file: the model plus named contexts, forbidden patterns, and
// weights. Forbidden patterns and weights are dormant data until a query
// opts in (the CLI's --allow and --weights flags).
struct ModelDocument {
  std::string name;
  CausalModel model;
  std::vector<std::pair<std::string, Context>> contexts;  // declaration order
  AllowabilityPolicy policy;
  WeightTable weights;

  const Context* context(const std::string& name) const;
};

// One situation as written in a scenario file: a model by file reference or
// inline, a context by name or inline, and a probability.
struct SituationSyntax {
  std::optional<std::string> model_file;
  std::optional<ModelDocument> inline_model;
  std::optional<std::string> context_name;
  std::optional<Context> inline_context;
  Rational prob;
};

// A scenario file: the blame query. `state` holds the resolved situations
// (model files loaded, contexts looked up); `syntax` preserves the source
// shape for printing.
struct ScenarioDocument {
  std::string name;
  Event action;
  EventPtr phi;
  std::vector<SituationSyntax> syntax;
  EpistemicState state;
  AllowabilityPolicy policy;  // scenario-level forbid block
  std::optional<int> max_changes;
};

// ---------------------------------------------------------------------------
// Parsing. All parsers throw ParseError with the position of the first error.
// ---------------------------------------------------------------------------

ModelDocument parse_model_text(const std::string& text, const std::string& default_name = "model");
ModelDocument load_model_file(const std::filesystem::path& path);

// `base_dir` resolves relative model file references.
ScenarioDocument parse_scenario_text(const std::string& text, const std::filesystem::path& base_dir,
                                     const std::string& default_name = "scenario");
ScenarioDocument load_scenario_file(const std::filesystem::path& path);

Qbf2 parse_qbf_text(const std::string& text);
Qbf2 load_qbf_file(const std::filesystem::path& path);

// Formula text. When `sig` is given, symbolic values resolve against it;
// without it only numeric values parse.
EventPtr parse_event_text(const std::string& text, const Signature* sig = nullptr);
CausalPtr parse_causal_text(const std::string& text, const Signature* sig = nullptr);

// A primitive event "VAR=value".
Event parse_event_atom(const std::string& text, const Signature* sig = nullptr);

// ---------------------------------------------------------------------------
// Canonical printing. parse(print(doc)) reproduces the document exactly, and
// print(parse(text)) is a fixed point for canonical text.
// ---------------------------------------------------------------------------

std::string print_expr(const Expr& e);
std::string print_model(const ModelDocument& doc);
std::string print_scenario(const ScenarioDocument& doc);
std::string print_qbf(const Qbf2& qbf);
std::string print_prop(const Prop& p);
std::string print_event(const EventFormula& f, const Signature* sig = nullptr);
std::string print_causal(const CausalFormula& f, const Signature* sig = nullptr);

}  // namespace causal
