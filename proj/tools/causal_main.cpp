#include "causal/result_json.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>

namespace {

using namespace causal;

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

// Shared output switches. Human output never includes timing, so identical
// invocations stay byte-identical; JSON carries timing_ms as the one
// permitted difference.
struct Output {
  bool json = false;

  void emit(const ResultDocument& doc, const std::string& human) const {
    if (json)
      std::cout << doc.to_json().dump(2) << "\n";
    else
      std::cout << human;
  }
};

std::string witness_text(const CauseWitness& w, const Event& event, const Signature& sig) {
  std::ostringstream os;
  os << "witness:\n";
  os << "  x_prime: " << event.var << " <- " << sig.value_text(event.var, w.x_prime) << "\n";
  os << "  changed:";
  if (w.changed.empty()) os << " (none)";
  for (std::size_t i = 0; i < w.changed.size(); ++i) {
    os << (i ? ", " : " ") << w.changed[i].first << " <- "
       << sig.value_text(w.changed[i].first, w.changed[i].second);
  }
  os << "\n";
  os << "  frozen:";
  if (w.frozen.empty()) os << " (none)";
  for (std::size_t i = 0; i < w.frozen.size(); ++i) {
    os << (i ? ", " : " ") << w.frozen[i].first << " <- "
       << sig.value_text(w.frozen[i].first, w.frozen[i].second);
  }
  os << "\n";
  os << "  k: " << w.k() << "\n";
  return os.str();
}

const Context& require_context(const ModelDocument& doc, const std::string& name) {
  const Context* ctx = doc.context(name);
  if (!ctx)
    throw BindingError("model '" + doc.name + "' has no context named '" + name + "'");
  return *ctx;
}

void require_clean(const std::vector<Diagnostic>& diags) {
  if (!diags.empty()) throw BindingError(format_diagnostics(diags));
}

int run_validate(const std::string& model_path, bool dot, const Output& out) {
  auto start = Clock::now();
  ModelDocument doc = load_model_file(model_path);
  std::vector<Diagnostic> diags = validate_model(doc.model);

  ResultDocument res;
  res.command = "validate";
  res.query["model"] = model_path;
  res.kind = "boolean";
  res.value = diags.empty();
  res.diagnostics = diags;
  res.timing_ms = ms_since(start);

  std::ostringstream human;
  if (diags.empty()) {
    human << "valid\n";
    if (dot) {
      human << "digraph " << doc.name << " {\n";
      for (const auto& [parent, child] : causal_network(doc.model))
        human << "  " << parent << " -> " << child << ";\n";
      human << "}\n";
    }
  } else {
    human << "invalid\n";
    for (const auto& d : diags) {
      human << "  " << d.code;
      if (!d.subject.empty()) human << " (" << d.subject << ")";
      human << ": " << d.message << "\n";
    }
  }
  out.emit(res, human.str());
  return diags.empty() ? 0 : 3;
}

int run_eval(const std::string& model_path, const std::string& context_name,
             const std::string& formula_text, const Output& out) {
  auto start = Clock::now();
  ModelDocument doc = load_model_file(model_path);
  const Context& ctx = require_context(doc, context_name);
  CausalPtr formula = parse_causal_text(formula_text, &doc.model.signature());
  require_clean(bind_causal(doc.model, *formula));
  bool truth = eval_causal(doc.model, ctx, *formula);

  ResultDocument res;
  res.command = "eval";
  res.query["model"] = model_path;
  res.query["context"] = context_name;
  res.query["formula"] = print_causal(*formula);
  res.kind = "boolean";
  res.value = truth;
  res.timing_ms = ms_since(start);

  out.emit(res, truth ? "true\n" : "false\n");
  return 0;
}

SearchOptions make_options(const ModelDocument& doc, bool allow, int max_changes, int threads) {
  SearchOptions options;
  if (allow) options.policy = doc.policy;
  if (max_changes >= 0) options.max_changes = max_changes;
  options.threads = threads;
  return options;
}

int run_cause(const std::string& model_path, const std::string& context_name,
              const std::string& event_text, const std::string& phi_text, bool allow,
              int max_changes, const Output& out) {
  auto start = Clock::now();
  ModelDocument doc = load_model_file(model_path);
  const Signature& sig = doc.model.signature();
  const Context& ctx = require_context(doc, context_name);
  Event event = parse_event_atom(event_text, &sig);
  EventPtr phi = parse_event_text(phi_text, &sig);
  SearchOptions options = make_options(doc, allow, max_changes, 1);
  CauseResult result = is_cause(doc.model, ctx, event, *phi, options);

  ResultDocument res;
  res.command = "cause";
  res.query["model"] = model_path;
  res.query["context"] = context_name;
  res.query["event"] = event.var + "=" + sig.value_text(event.var, event.value);
  res.query["phi"] = print_event(*phi);
  res.query["allow"] = allow;
  if (max_changes >= 0) res.query["max_changes"] = max_changes;
  res.kind = "boolean";
  res.value = result.status == CauseStatus::Cause;
  res.witness = result.witness;
  if (result.status == CauseStatus::Inconclusive)
    res.diagnostics.push_back(
        {"inconclusive", event.var, "the max_changes cap stopped the witness search"});
  res.timing_ms = ms_since(start);

  std::ostringstream human;
  switch (result.status) {
    case CauseStatus::Cause:
      human << "true\n" << witness_text(*result.witness, event, sig);
      break;
    case CauseStatus::NotCause:
      human << "false\n";
      break;
    case CauseStatus::Inconclusive:
      human << "inconclusive\n";
      break;
  }
  out.emit(res, human.str());
  return result.status == CauseStatus::Inconclusive ? 5 : 0;
}

int run_responsibility(const std::string& model_path, const std::string& context_name,
                       const std::string& event_text, const std::string& phi_text, bool allow,
                       bool use_weights, int max_changes, const Output& out) {
  auto start = Clock::now();
  ModelDocument doc = load_model_file(model_path);
  const Signature& sig = doc.model.signature();
  const Context& ctx = require_context(doc, context_name);
  Event event = parse_event_atom(event_text, &sig);
  EventPtr phi = parse_event_text(phi_text, &sig);
  SearchOptions options = make_options(doc, allow, max_changes, 1);
  ResponsibilityResult result =
      use_weights ? weighted_responsibility(doc.model, ctx, event, *phi, doc.weights, options)
                  : responsibility(doc.model, ctx, event, *phi, options);

  ResultDocument res;
  res.command = "responsibility";
  res.query["model"] = model_path;
  res.query["context"] = context_name;
  res.query["event"] = event.var + "=" + sig.value_text(event.var, event.value);
  res.query["phi"] = print_event(*phi);
  res.query["allow"] = allow;
  res.query["weights"] = use_weights;
  if (max_changes >= 0) res.query["max_changes"] = max_changes;
  res.kind = "rational";
  res.value = rational_json(result.value);
  res.witness = result.witness;
  if (result.inconclusive())
    res.diagnostics.push_back(
        {"inconclusive", event.var, "the max_changes cap stopped the witness search"});
  res.timing_ms = ms_since(start);

  std::ostringstream human;
  if (result.inconclusive()) {
    human << "inconclusive\n";
  } else {
    human << result.value.str() << "\n";
    if (result.witness) human << witness_text(*result.witness, event, sig);
  }
  out.emit(res, human.str());
  return result.inconclusive() ? 5 : 0;
}

int run_blame(const std::string& scenario_path, bool allow, int max_changes, int threads,
              const Output& out) {
  auto start = Clock::now();
  ScenarioDocument doc = load_scenario_file(scenario_path);

  EpistemicState state = doc.state;
  SearchOptions options;
  options.threads = threads;
  if (allow) {
    options.policy = doc.policy;
  } else {
    for (auto& sit : state.situations) sit.policy = AllowabilityPolicy{};
  }
  if (max_changes >= 0)
    options.max_changes = max_changes;
  else if (doc.max_changes)
    options.max_changes = *doc.max_changes;

  BlameResult result = blame(state, doc.action, *doc.phi, options);

  ResultDocument res;
  res.command = "blame";
  res.query["scenario"] = scenario_path;
  res.query["action"] = doc.action.var + "=" + std::to_string(doc.action.value);
  res.query["phi"] = print_event(*doc.phi);
  res.query["allow"] = allow;
  if (options.max_changes) res.query["max_changes"] = *options.max_changes;
  res.kind = "rational";
  res.value = rational_json(result.value);
  Json breakdown = Json::array();
  for (const auto& [label, value] : result.per_situation) {
    Json row = Json::object();
    row["situation"] = label;
    row["responsibility"] = rational_json(value);
    breakdown.push_back(std::move(row));
  }
  res.detail = Json::object();
  res.detail["per_situation"] = std::move(breakdown);
  if (result.inconclusive)
    res.diagnostics.push_back(
        {"inconclusive", doc.action.var, "the max_changes cap stopped a witness search"});
  res.timing_ms = ms_since(start);

  std::ostringstream human;
  if (result.inconclusive) {
    human << "inconclusive\n";
  } else {
    human << result.value.str() << "\n";
    human << "situations:\n";
    for (const auto& [label, value] : result.per_situation)
      human << "  " << label << ": " << value.str() << "\n";
  }
  out.emit(res, human.str());
  return result.inconclusive ? 5 : 0;
}

int run_qbf_solve(const std::string& path, const Output& out) {
  auto start = Clock::now();
  Qbf2 qbf = load_qbf_file(path);
  require_clean(validate_qbf(qbf));
  bool truth = eval_qbf(qbf);

  ResultDocument res;
  res.command = "qbf-solve";
  res.query["file"] = path;
  res.kind = "boolean";
  res.value = truth;
  res.timing_ms = ms_since(start);
  out.emit(res, truth ? "true\n" : "false\n");
  return 0;
}

int run_qbf_count(const std::string& path, bool maximize, const Output& out) {
  auto start = Clock::now();
  Qbf2 qbf = load_qbf_file(path);
  require_clean(validate_qbf(qbf));
  int count = maximize ? maxqsat2(qbf) : minqsat2(qbf);

  ResultDocument res;
  res.command = maximize ? "qbf-maxqsat2" : "qbf-minqsat2";
  res.query["file"] = path;
  res.kind = "integer";
  res.value = count;
  res.timing_ms = ms_since(start);
  out.emit(res, std::to_string(count) + "\n");
  return 0;
}

int run_qbf_to_model(const std::string& path, const std::string& out_path, const Output& out) {
  auto start = Clock::now();
  Qbf2 qbf = load_qbf_file(path);
  require_clean(validate_qbf(qbf));
  TheoremInstance inst = qbf_to_model(qbf);

  ModelDocument doc;
  doc.name = "qbf_model";
  doc.model = inst.model;
  doc.contexts.emplace_back("base", inst.context);
  std::string model_text = print_model(doc);
  std::string event_text = inst.event.var + "=" + std::to_string(inst.event.value);
  std::string phi_text = print_event(*inst.phi);

  ResultDocument res;
  res.command = "qbf-to-model";
  res.query["file"] = path;
  res.kind = "document";
  res.value = Json::object();
  res.value["model"] = model_text;
  res.value["context"] = "base";
  res.value["event"] = event_text;
  res.value["phi"] = phi_text;
  res.timing_ms = ms_since(start);

  // The comment trailer keeps the emitted text a self-describing, loadable
  // model file.
  std::ostringstream text;
  text << model_text;
  text << "\n# event: " << event_text << "\n";
  text << "# phi: " << phi_text << "\n";

  if (!out_path.empty()) {
    std::ofstream f(out_path, std::ios::binary);
    if (!f) throw CausalError("cannot write file '" + out_path + "'");
    f << text.str();
    out.emit(res, "wrote " + out_path + "\n");
  } else {
    out.emit(res, text.str());
  }
  return 0;
}

int run_qbf_check_theorem(const std::string& path, const Output& out) {
  auto start = Clock::now();
  Qbf2 qbf = load_qbf_file(path);
  require_clean(validate_qbf(qbf));
  TheoremCheck check = check_responsibility_theorem(qbf);

  ResultDocument res;
  res.command = "qbf-check-theorem";
  res.query["file"] = path;
  res.kind = "document";
  res.value = Json::object();
  res.value["qbf_true"] = check.qbf_true;
  res.value["minqsat2"] = check.minqsat;
  res.value["expected"] = rational_json(check.expected);
  res.value["computed"] = rational_json(check.computed);
  res.value["holds"] = check.holds;
  res.witness = check.witness;
  res.timing_ms = ms_since(start);

  std::ostringstream human;
  human << "qbf: " << (check.qbf_true ? "true" : "false") << "\n";
  human << "minqsat2: " << check.minqsat << "\n";
  human << "expected: " << check.expected.str() << "\n";
  human << "computed: " << check.computed.str() << "\n";
  human << (check.holds ? "holds\n" : "MISMATCH\n");
  out.emit(res, human.str());
  return check.holds ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Structural-model causality: causes, responsibility, blame, and QBF bridges"};
  app.require_subcommand(1);

  Output out;
  app.add_flag("--json", out.json, "emit a machine-readable result document");

  std::string model_path, scenario_path, qbf_path;
  std::string context_name, formula_text, event_text, phi_text, out_path;
  bool allow = false, use_weights = false, dot = false;
  int max_changes = -1, threads = 1;

  auto* validate_cmd = app.add_subcommand("validate", "check a model file");
  validate_cmd->add_option("model", model_path, "model file (.scm)")->required();
  validate_cmd->add_flag("--dot", dot, "print the causal network in dot format when valid");

  auto* eval_cmd = app.add_subcommand("eval", "evaluate a causal formula at a context");
  eval_cmd->add_option("model", model_path, "model file (.scm)")->required();
  eval_cmd->add_option("--context", context_name, "named context from the model file")->required();
  eval_cmd->add_option("--formula", formula_text, "causal formula, e.g. \"[ST<-0](BS=0)\"")
      ->required();

  auto* cause_cmd = app.add_subcommand("cause", "test actual causality of an event");
  cause_cmd->add_option("model", model_path, "model file (.scm)")->required();
  cause_cmd->add_option("--context", context_name, "named context from the model file")->required();
  cause_cmd->add_option("--event", event_text, "candidate cause, e.g. \"ST=1\"")->required();
  cause_cmd->add_option("--phi", phi_text, "effect event formula")->required();
  cause_cmd->add_flag("--allow", allow, "activate the model file's forbid patterns");
  cause_cmd->add_option("--max-changes", max_changes, "cap on changed contingency variables");

  auto* resp_cmd = app.add_subcommand("responsibility", "degree of responsibility of an event");
  resp_cmd->add_option("model", model_path, "model file (.scm)")->required();
  resp_cmd->add_option("--context", context_name, "named context from the model file")->required();
  resp_cmd->add_option("--event", event_text, "candidate cause, e.g. \"X1=1\"")->required();
  resp_cmd->add_option("--phi", phi_text, "effect event formula")->required();
  resp_cmd->add_flag("--allow", allow, "activate the model file's forbid patterns");
  resp_cmd->add_flag("--weights", use_weights, "use the model file's weights block");
  resp_cmd->add_option("--max-changes", max_changes, "cap on changed contingency variables");

  auto* blame_cmd = app.add_subcommand("blame", "degree of blame over a scenario");
  blame_cmd->add_option("scenario", scenario_path, "scenario file (.scn)")->required();
  blame_cmd->add_flag("--allow", allow, "activate the forbid patterns in the files");
  blame_cmd->add_option("--max-changes", max_changes, "cap on changed contingency variables");
  blame_cmd->add_option("--threads", threads, "bound on parallel situation evaluation")
      ->check(CLI::PositiveNumber);

  auto* qbf_cmd = app.add_subcommand("qbf", "closed exists-forall formulas");
  qbf_cmd->require_subcommand(1);
  auto* qbf_solve = qbf_cmd->add_subcommand("solve", "truth of the closed formula");
  qbf_solve->add_option("file", qbf_path, "formula file (.qbf)")->required();
  auto* qbf_max = qbf_cmd->add_subcommand("maxqsat2", "max true existential variables, -1 if false");
  qbf_max->add_option("file", qbf_path, "formula file (.qbf)")->required();
  auto* qbf_min =
      qbf_cmd->add_subcommand("minqsat2", "min true existential variables, |exists|+1 if false");
  qbf_min->add_option("file", qbf_path, "formula file (.qbf)")->required();
  auto* qbf_model = qbf_cmd->add_subcommand("to-model", "build the responsibility bridge model");
  qbf_model->add_option("file", qbf_path, "formula file (.qbf)")->required();
  qbf_model->add_option("-o,--output", out_path, "write the model file here instead of stdout");
  auto* qbf_check =
      qbf_cmd->add_subcommand("check-theorem", "check responsibility against 1/(minqsat2+2)");
  qbf_check->add_option("file", qbf_path, "formula file (.qbf)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // Clamp CLI11's assorted usage-error codes to 1; --help stays 0.
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*validate_cmd) return run_validate(model_path, dot, out);
    if (*eval_cmd) return run_eval(model_path, context_name, formula_text, out);
    if (*cause_cmd)
      return run_cause(model_path, context_name, event_text, phi_text, allow, max_changes, out);
    if (*resp_cmd)
      return run_responsibility(model_path, context_name, event_text, phi_text, allow, use_weights,
                                max_changes, out);
    if (*blame_cmd) return run_blame(scenario_path, allow, max_changes, threads, out);
    if (*qbf_cmd) {
      if (*qbf_solve) return run_qbf_solve(qbf_path, out);
      if (*qbf_max) return run_qbf_count(qbf_path, true, out);
      if (*qbf_min) return run_qbf_count(qbf_path, false, out);
      if (*qbf_model) return run_qbf_to_model(qbf_path, out_path, out);
      if (*qbf_check) return run_qbf_check_theorem(qbf_path, out);
    }
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const QbfCapError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const ModelInvalidError& e) {
    std::cerr << "invalid model: " << e.what() << "\n";
    return 3;
  } catch (const BindingError& e) {
    std::cerr << "binding error: " << e.what() << "\n";
    return 4;
  } catch (const CausalError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
