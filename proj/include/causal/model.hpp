#pragma once

#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace causal {

// Values of model variables are plain integers; every variable is constrained
// to a finite declared range.
using Value = int;

// Base class for all errors raised by the library.
class CausalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// A structurally broken model (cycle, range-closure violation, incomplete
// table, duplicate declarations, ...) was used where a valid one is required.
class ModelInvalidError : public CausalError {
public:
  using CausalError::CausalError;
};

// A name or value did not bind against a model: unknown variable, value
// outside its declared range, intervention on an exogenous variable, and
// the like.
class BindingError : public CausalError {
public:
  using CausalError::CausalError;
};

// One validation finding. `code` is a stable machine-checkable identifier of
// the violated invariant, `subject` names the variable or construct involved.
struct Diagnostic {
  std::string code;
  std::string subject;
  std::string message;
};

std::string format_diagnostics(const std::vector<Diagnostic>& diags);

// ---------------------------------------------------------------------------
// Equation right-hand sides
// ---------------------------------------------------------------------------

enum class ExprOp {
  Literal,  // integer constant
  Var,      // variable reference by name
  Neg,      // arithmetic negation
  Not,      // boolean negation (0 -> 1, nonzero -> 0)
  Add,
  Sub,
  Mul,
  Eq,  // comparisons yield 0/1
  Ne,
  Lt,
  Le,
  And,  // boolean over 0/nonzero, yield 0/1
  Or,
  Ite,   // kids: condition, then, else
  Table  // explicit function table over `table_vars`
};

class Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct TableRow {
  std::vector<Value> inputs;  // aligned with Expr::table_vars
  Value output = 0;
};

class Expr {
public:
  ExprOp op = ExprOp::Literal;
  Value literal = 0;                    // Literal
  std::string name;                     // Var
  std::vector<ExprPtr> kids;            // operands
  std::vector<std::string> table_vars;  // Table
  std::vector<TableRow> table_rows;     // Table, in declaration order
  std::optional<Value> table_default;   // Table, applied when no row matches

  static ExprPtr lit(Value v);
  static ExprPtr var(std::string name);
  static ExprPtr unary(ExprOp op, ExprPtr a);
  static ExprPtr binary(ExprOp op, ExprPtr a, ExprPtr b);
  static ExprPtr ite(ExprPtr c, ExprPtr t, ExprPtr e);
  static ExprPtr table(std::vector<std::string> vars, std::vector<TableRow> rows,
                       std::optional<Value> dflt);
};

bool expr_equal(const Expr& a, const Expr& b);

// Declared variables referenced by `e`, in first-occurrence order, without
// duplicates. Undeclared names are reported by validation, not here.
std::vector<std::string> expr_vars(const Expr& e);

// One structural equation: `target` is an endogenous variable, `body` its
// mechanism. Every endogenous variable has exactly one equation.
struct Equation {
  std::string target;
  ExprPtr body;
};

// ---------------------------------------------------------------------------
// Signature and model
// ---------------------------------------------------------------------------

struct Signature {
  std::vector<std::string> exogenous;   // declaration order
  std::vector<std::string> endogenous;  // declaration order
  // Range per variable, values in declaration order (the order is the
  // canonical one used for deterministic enumeration).
  std::map<std::string, std::vector<Value>> ranges;
  // Optional symbolic names per range, aligned with `ranges`; empty for
  // numeric ranges.
  std::map<std::string, std::vector<std::string>> value_names;

  bool is_declared(const std::string& var) const;
  bool is_exogenous(const std::string& var) const;
  bool is_endogenous(const std::string& var) const;
  const std::vector<Value>* range(const std::string& var) const;
  bool in_range(const std::string& var, Value v) const;
  // Resolve a symbolic value name declared for `var`.
  std::optional<Value> named_value(const std::string& var, const std::string& name) const;
  // Render a value symbolically when the range declares names.
  std::string value_text(const std::string& var, Value v) const;
};

// Total assignment to the exogenous variables.
struct Context {
  std::map<std::string, Value> values;
};

// Ordered list of endogenous variables pinned to constants. Duplicate targets
// are rejected when the intervention is bound against a model.
struct Intervention {
  std::vector<std::pair<std::string, Value>> sets;

  bool empty() const { return sets.empty(); }
  std::optional<Value> value_of(const std::string& var) const;
  // Append or overwrite a pin, keeping first-set order for untouched targets.
  void set(const std::string& var, Value v);
};

// Total assignment to all variables, keyed by name.
using Assignment = std::map<std::string, Value>;

struct CompiledModel;  // internal evaluation backend, see causal/engine.hpp

class CausalModel {
public:
  CausalModel();
  CausalModel(Signature sig, std::vector<Equation> equations);

  const Signature& signature() const;
  // Equations in endogenous declaration order (when well-formed; otherwise in
  // the order given, which validation will flag).
  const std::vector<Equation>& equations() const;
  const Equation* equation_for(const std::string& target) const;

  // Structural findings computed at construction (duplicates, missing
  // equations, unknown references, cycles). validate_model() adds the
  // exhaustive range-closure sweep on top of these.
  const std::vector<Diagnostic>& structural_diagnostics() const;

  // Internal evaluation backend; null when the model is too malformed to
  // compile. Library code only.
  const CompiledModel* engine() const;

private:
  struct Impl;
  std::shared_ptr<const Impl> impl_;
};

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

// All structural diagnostics plus the exhaustive range-closure check: every
// equation body is evaluated over the full product of its referenced
// variables' ranges and must stay inside the target's range (and, for tables,
// must have a matching row or default). Empty result == valid model.
std::vector<Diagnostic> validate_model(const CausalModel& model);

// Edge (parent, child) iff `parent` occurs syntactically in the equation for
// `child`. Deterministic order: by child declaration index, then parent
// declaration index. Self-references are diagnosed by validation and skipped.
std::vector<std::pair<std::string, std::string>> causal_network(const CausalModel& model);

// True iff the dependence graph restricted to endogenous variables is acyclic.
bool is_recursive(const CausalModel& model);

// Unique solution of the model under `context`, with `intervention` pinning
// endogenous variables. Throws ModelInvalidError for structurally broken
// models and BindingError for bad contexts/interventions.
Assignment solve(const CausalModel& model, const Context& context,
                 const Intervention& intervention = {});

// Model with each pinned variable's equation replaced by the constant it is
// pinned to. Pinned variables stay endogenous.
CausalModel intervene(const CausalModel& model, const Intervention& intervention);

}  // namespace causal
