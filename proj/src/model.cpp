#include "causal/model.hpp"

#include "causal/engine.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <set>
#include <sstream>

namespace causal {

std::string format_diagnostics(const std::vector<Diagnostic>& diags) {
  std::ostringstream out;
  for (std::size_t i = 0; i < diags.size(); ++i) {
    if (i) out << "; ";
    out << diags[i].code;
    if (!diags[i].subject.empty()) out << " (" << diags[i].subject << ")";
    out << ": " << diags[i].message;
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Expr
// ---------------------------------------------------------------------------

ExprPtr Expr::lit(Value v) {
  auto e = std::make_shared<Expr>();
  e->op = ExprOp::Literal;
  e->literal = v;
  return e;
}

ExprPtr Expr::var(std::string name) {
  auto e = std::make_shared<Expr>();
  e->op = ExprOp::Var;
  e->name = std::move(name);
  return e;
}

ExprPtr Expr::unary(ExprOp op, ExprPtr a) {
  auto e = std::make_shared<Expr>();
  e->op = op;
  e->kids = {std::move(a)};
  return e;
}

ExprPtr Expr::binary(ExprOp op, ExprPtr a, ExprPtr b) {
  auto e = std::make_shared<Expr>();
  e->op = op;
  e->kids = {std::move(a), std::move(b)};
  return e;
}

ExprPtr Expr::ite(ExprPtr c, ExprPtr t, ExprPtr f) {
  auto e = std::make_shared<Expr>();
  e->op = ExprOp::Ite;
  e->kids = {std::move(c), std::move(t), std::move(f)};
  return e;
}

ExprPtr Expr::table(std::vector<std::string> vars, std::vector<TableRow> rows,
                    std::optional<Value> dflt) {
  auto e = std::make_shared<Expr>();
  e->op = ExprOp::Table;
  e->table_vars = std::move(vars);
  e->table_rows = std::move(rows);
  e->table_default = dflt;
  return e;
}

bool expr_equal(const Expr& a, const Expr& b) {
  if (a.op != b.op) return false;
  switch (a.op) {
    case ExprOp::Literal:
      return a.literal == b.literal;
    case ExprOp::Var:
      return a.name == b.name;
    case ExprOp::Table: {
      if (a.table_vars != b.table_vars) return false;
      if (a.table_default != b.table_default) return false;
      if (a.table_rows.size() != b.table_rows.size()) return false;
      for (std::size_t i = 0; i < a.table_rows.size(); ++i) {
        if (a.table_rows[i].inputs != b.table_rows[i].inputs ||
            a.table_rows[i].output != b.table_rows[i].output)
          return false;
      }
      return true;
    }
    default: {
      if (a.kids.size() != b.kids.size()) return false;
      for (std::size_t i = 0; i < a.kids.size(); ++i)
        if (!expr_equal(*a.kids[i], *b.kids[i])) return false;
      return true;
    }
  }
}

namespace {

void collect_names(const Expr& e, std::vector<std::string>& out, std::set<std::string>& seen) {
  if (e.op == ExprOp::Var) {
    if (seen.insert(e.name).second) out.push_back(e.name);
    return;
  }
  if (e.op == ExprOp::Table) {
    for (const auto& v : e.table_vars)
      if (seen.insert(v).second) out.push_back(v);
    return;
  }
  for (const auto& k : e.kids) collect_names(*k, out, seen);
}

}  // namespace

std::vector<std::string> expr_vars(const Expr& e) {
  std::vector<std::string> out;
  std::set<std::string> seen;
  collect_names(e, out, seen);
  return out;
}

// ---------------------------------------------------------------------------
// Signature
// ---------------------------------------------------------------------------

bool Signature::is_declared(const std::string& var) const {
  return is_exogenous(var) || is_endogenous(var);
}

bool Signature::is_exogenous(const std::string& var) const {
  return std::find(exogenous.begin(), exogenous.end(), var) != exogenous.end();
}

bool Signature::is_endogenous(const std::string& var) const {
  return std::find(endogenous.begin(), endogenous.end(), var) != endogenous.end();
}

const std::vector<Value>* Signature::range(const std::string& var) const {
  auto it = ranges.find(var);
  return it == ranges.end() ? nullptr : &it->second;
}

bool Signature::in_range(const std::string& var, Value v) const {
  const auto* r = range(var);
  return r && std::find(r->begin(), r->end(), v) != r->end();
}

std::optional<Value> Signature::named_value(const std::string& var, const std::string& name) const {
  auto it = value_names.find(var);
  if (it == value_names.end()) return std::nullopt;
  const auto* r = range(var);
  if (!r) return std::nullopt;
  for (std::size_t i = 0; i < it->second.size() && i < r->size(); ++i)
    if (it->second[i] == name) return (*r)[i];
  return std::nullopt;
}

std::string Signature::value_text(const std::string& var, Value v) const {
  auto it = value_names.find(var);
  if (it != value_names.end()) {
    const auto* r = range(var);
    if (r) {
      for (std::size_t i = 0; i < r->size() && i < it->second.size(); ++i)
        if ((*r)[i] == v) return it->second[i];
    }
  }
  return std::to_string(v);
}

// ---------------------------------------------------------------------------
// Intervention
// ---------------------------------------------------------------------------

std::optional<Value> Intervention::value_of(const std::string& var) const {
  for (const auto& [name, v] : sets)
    if (name == var) return v;
  return std::nullopt;
}

void Intervention::set(const std::string& var, Value v) {
  for (auto& [name, old] : sets) {
    if (name == var) {
      old = v;
      return;
    }
  }
  sets.emplace_back(var, v);
}

// ---------------------------------------------------------------------------
// CompiledModel
// ---------------------------------------------------------------------------

int CompiledModel::id(const std::string& name) const {
  auto it = id_of.find(name);
  return it == id_of.end() ? -1 : it->second;
}

Value CompiledModel::eval_endo(int k, const std::vector<Value>& state) const {
  thread_local std::vector<Value> stack;
  stack.clear();
  auto pop = [&]() {
    Value v = stack.back();
    stack.pop_back();
    return v;
  };
  for (const Instr& in : program[k]) {
    switch (in.op) {
      case ExprOp::Literal:
        stack.push_back(in.a);
        break;
      case ExprOp::Var:
        stack.push_back(state[in.a]);
        break;
      case ExprOp::Neg: {
        Value a = pop();
        stack.push_back(-a);
        break;
      }
      case ExprOp::Not: {
        Value a = pop();
        stack.push_back(a == 0 ? 1 : 0);
        break;
      }
      case ExprOp::Add: {
        Value b = pop(), a = pop();
        stack.push_back(a + b);
        break;
      }
      case ExprOp::Sub: {
        Value b = pop(), a = pop();
        stack.push_back(a - b);
        break;
      }
      case ExprOp::Mul: {
        Value b = pop(), a = pop();
        stack.push_back(a * b);
        break;
      }
      case ExprOp::Eq: {
        Value b = pop(), a = pop();
        stack.push_back(a == b ? 1 : 0);
        break;
      }
      case ExprOp::Ne: {
        Value b = pop(), a = pop();
        stack.push_back(a != b ? 1 : 0);
        break;
      }
      case ExprOp::Lt: {
        Value b = pop(), a = pop();
        stack.push_back(a < b ? 1 : 0);
        break;
      }
      case ExprOp::Le: {
        Value b = pop(), a = pop();
        stack.push_back(a <= b ? 1 : 0);
        break;
      }
      case ExprOp::And: {
        Value b = pop(), a = pop();
        stack.push_back(a != 0 && b != 0 ? 1 : 0);
        break;
      }
      case ExprOp::Or: {
        Value b = pop(), a = pop();
        stack.push_back(a != 0 || b != 0 ? 1 : 0);
        break;
      }
      case ExprOp::Ite: {
        Value f = pop(), t = pop(), c = pop();
        stack.push_back(c != 0 ? t : f);
        break;
      }
      case ExprOp::Table: {
        const TableData& td = tables[in.a];
        std::vector<Value> key(td.var_ids.size());
        for (std::size_t i = 0; i < td.var_ids.size(); ++i) key[i] = state[td.var_ids[i]];
        auto it = td.rows.find(key);
        if (it != td.rows.end()) {
          stack.push_back(it->second);
        } else if (td.dflt) {
          stack.push_back(*td.dflt);
        } else {
          std::ostringstream msg;
          msg << "table for " << var_names[n_exo + k] << " has no row for (";
          for (std::size_t i = 0; i < key.size(); ++i) msg << (i ? "," : "") << key[i];
          msg << ") and no default";
          throw ModelInvalidError("table-incomplete: " + msg.str());
        }
        break;
      }
    }
  }
  assert(stack.size() == 1);
  return stack.back();
}

void CompiledModel::run(std::vector<Value>& state, const std::vector<char>& pinned) const {
  for (int id : topo) {
    if (pinned[id]) continue;
    Value v = eval_endo(id - n_exo, state);
    const auto& r = range_by_id[id];
    if (std::find(r.begin(), r.end(), v) == r.end()) {
      throw ModelInvalidError("range-closure (" + var_names[id] + "): equation produced " +
                              std::to_string(v) + ", outside the declared range");
    }
    state[id] = v;
  }
}

// ---------------------------------------------------------------------------
// CausalModel
// ---------------------------------------------------------------------------

struct CausalModel::Impl {
  Signature sig;
  std::vector<Equation> equations;  // endogenous declaration order when well-formed
  std::vector<Diagnostic> structural;
  std::unique_ptr<CompiledModel> compiled;  // null when structure is too broken
};

namespace {

// Rewrite unresolved identifiers that appear as comparison operands against a
// variable with named range values, e.g. `BT == threw`, into literals.
ExprPtr resolve_named_values(const ExprPtr& e, const Signature& sig) {
  switch (e->op) {
    case ExprOp::Literal:
    case ExprOp::Var:
    case ExprOp::Table:
      return e;
    case ExprOp::Eq:
    case ExprOp::Ne:
    case ExprOp::Lt:
    case ExprOp::Le: {
      ExprPtr a = resolve_named_values(e->kids[0], sig);
      ExprPtr b = resolve_named_values(e->kids[1], sig);
      auto try_name = [&sig](const ExprPtr& var_side, const ExprPtr& name_side) -> ExprPtr {
        if (var_side->op != ExprOp::Var || name_side->op != ExprOp::Var) return nullptr;
        if (!sig.is_declared(var_side->name) || sig.is_declared(name_side->name)) return nullptr;
        if (auto v = sig.named_value(var_side->name, name_side->name)) return Expr::lit(*v);
        return nullptr;
      };
      if (ExprPtr litb = try_name(a, b)) b = litb;
      else if (ExprPtr lita = try_name(b, a)) a = lita;
      if (a == e->kids[0] && b == e->kids[1]) return e;
      return Expr::binary(e->op, std::move(a), std::move(b));
    }
    default: {
      std::vector<ExprPtr> kids;
      kids.reserve(e->kids.size());
      bool changed = false;
      for (const auto& k : e->kids) {
        kids.push_back(resolve_named_values(k, sig));
        changed = changed || kids.back() != k;
      }
      if (!changed) return e;
      auto out = std::make_shared<Expr>(*e);
      out->kids = std::move(kids);
      return out;
    }
  }
}

void flatten(const Expr& e, const CompiledModel& cm, std::vector<Instr>& out,
             std::vector<TableData>& tables, const Signature& sig) {
  switch (e.op) {
    case ExprOp::Literal:
      out.push_back({ExprOp::Literal, e.literal});
      break;
    case ExprOp::Var:
      out.push_back({ExprOp::Var, cm.id(e.name)});
      break;
    case ExprOp::Table: {
      TableData td;
      for (const auto& v : e.table_vars) td.var_ids.push_back(cm.id(v));
      for (const auto& row : e.table_rows) td.rows[row.inputs] = row.output;
      td.dflt = e.table_default;
      tables.push_back(std::move(td));
      out.push_back({ExprOp::Table, static_cast<int>(tables.size() - 1)});
      break;
    }
    default:
      for (const auto& k : e.kids) flatten(*k, cm, out, tables, sig);
      out.push_back({e.op, 0});
      break;
  }
}

}  // namespace

CausalModel::CausalModel() : CausalModel(Signature{}, {}) {}

CausalModel::CausalModel(Signature sig, std::vector<Equation> equations) {
  auto impl = std::make_shared<Impl>();
  impl->sig = std::move(sig);
  auto& diags = impl->structural;
  const Signature& s = impl->sig;

  // Name uniqueness across both variable classes.
  {
    std::set<std::string> seen;
    for (const auto& v : s.exogenous)
      if (!seen.insert(v).second)
        diags.push_back({"duplicate-name", v, "variable declared more than once"});
    for (const auto& v : s.endogenous)
      if (!seen.insert(v).second)
        diags.push_back({"duplicate-name", v, "variable declared more than once"});
  }

  // Every declared variable needs a nonempty range without repeated values.
  auto check_range = [&](const std::string& v) {
    const auto* r = s.range(v);
    if (!r) {
      diags.push_back({"missing-range", v, "declared variable has no range"});
      return;
    }
    if (r->empty()) diags.push_back({"empty-range", v, "range must be nonempty"});
    std::set<Value> seen(r->begin(), r->end());
    if (seen.size() != r->size())
      diags.push_back({"duplicate-range-value", v, "range lists a value twice"});
  };
  for (const auto& v : s.exogenous) check_range(v);
  for (const auto& v : s.endogenous) check_range(v);

  // Exactly one equation per endogenous variable; nothing else.
  std::map<std::string, ExprPtr> by_target;
  for (auto& eq : equations) {
    if (!s.is_endogenous(eq.target)) {
      diags.push_back({"equation-target", eq.target,
                       "equation target is not a declared endogenous variable"});
      continue;
    }
    if (by_target.count(eq.target)) {
      diags.push_back({"duplicate-equation", eq.target, "more than one equation for variable"});
      continue;
    }
    by_target[eq.target] = eq.body ? resolve_named_values(eq.body, s) : nullptr;
  }
  for (const auto& v : s.endogenous) {
    auto it = by_target.find(v);
    if (it == by_target.end() || !it->second)
      diags.push_back({"missing-equation", v, "endogenous variable has no equation"});
  }

  // Canonical equation list in declaration order.
  for (const auto& v : s.endogenous) {
    auto it = by_target.find(v);
    if (it != by_target.end() && it->second) impl->equations.push_back({v, it->second});
  }

  // Reference checks.
  bool references_ok = true;
  for (const auto& eq : impl->equations) {
    for (const auto& ref : expr_vars(*eq.body)) {
      if (ref == eq.target) {
        diags.push_back({"self-reference", eq.target, "equation refers to its own target"});
        references_ok = false;
      } else if (!s.is_declared(ref)) {
        diags.push_back({"unknown-variable", eq.target,
                         "equation references undeclared variable '" + ref + "'"});
        references_ok = false;
      }
    }
  }

  bool structure_ok = references_ok && diags.empty();
  if (structure_ok) {
    auto cm = std::make_unique<CompiledModel>();
    cm->n_exo = static_cast<int>(s.exogenous.size());
    cm->n_endo = static_cast<int>(s.endogenous.size());
    int next = 0;
    for (const auto& v : s.exogenous) {
      cm->var_names.push_back(v);
      cm->id_of[v] = next++;
    }
    for (const auto& v : s.endogenous) {
      cm->var_names.push_back(v);
      cm->id_of[v] = next++;
    }
    for (const auto& v : cm->var_names) cm->range_by_id.push_back(*s.range(v));

    cm->program.resize(cm->n_endo);
    cm->parents.resize(cm->n_endo);
    for (int k = 0; k < cm->n_endo; ++k) {
      const Equation& eq = impl->equations[k];
      flatten(*eq.body, *cm, cm->program[k], cm->tables, s);
      std::vector<int> ps;
      for (const auto& ref : expr_vars(*eq.body)) ps.push_back(cm->id(ref));
      std::sort(ps.begin(), ps.end());
      cm->parents[k] = std::move(ps);
    }

    // Kahn's algorithm over endogenous dependencies; the ready set is scanned
    // in declaration order so the topological order is deterministic.
    std::vector<int> indeg(cm->n_endo, 0);
    std::vector<std::vector<int>> children(cm->n_endo);
    for (int k = 0; k < cm->n_endo; ++k) {
      for (int p : cm->parents[k]) {
        if (p >= cm->n_exo) {
          indeg[k]++;
          children[p - cm->n_exo].push_back(k);
        }
      }
    }
    std::vector<char> done(cm->n_endo, 0);
    for (;;) {
      int pick = -1;
      for (int k = 0; k < cm->n_endo; ++k) {
        if (!done[k] && indeg[k] == 0) {
          pick = k;
          break;
        }
      }
      if (pick < 0) break;
      done[pick] = 1;
      cm->topo.push_back(cm->n_exo + pick);
      for (int c : children[pick]) indeg[c]--;
    }
    cm->acyclic = static_cast<int>(cm->topo.size()) == cm->n_endo;
    if (!cm->acyclic) {
      std::string members;
      for (int k = 0; k < cm->n_endo; ++k) {
        if (!done[k]) {
          if (!members.empty()) members += ", ";
          members += s.endogenous[k];
        }
      }
      diags.push_back({"cycle", members, "endogenous dependencies contain a cycle"});
    }
    impl->compiled = std::move(cm);
  }

  impl_ = std::move(impl);
}

const Signature& CausalModel::signature() const { return impl_->sig; }
const std::vector<Equation>& CausalModel::equations() const { return impl_->equations; }

const Equation* CausalModel::equation_for(const std::string& target) const {
  for (const auto& eq : impl_->equations)
    if (eq.target == target) return &eq;
  return nullptr;
}

const std::vector<Diagnostic>& CausalModel::structural_diagnostics() const {
  return impl_->structural;
}

const CompiledModel* CausalModel::engine() const { return impl_->compiled.get(); }

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

namespace {

// Enumerate the product of the referenced variables' ranges and evaluate the
// body at each point, reporting escapes and table gaps. The sweep is exact;
// its cost is the product of the parent range sizes.
void closure_sweep(const CausalModel& model, int endo_ordinal, std::vector<Diagnostic>& out) {
  const CompiledModel& cm = *model.engine();
  const Signature& sig = model.signature();
  const std::string& target = sig.endogenous[endo_ordinal];
  const auto& parents = cm.parents[endo_ordinal];
  const auto& target_range = cm.range_by_id[cm.n_exo + endo_ordinal];

  std::vector<Value> state(cm.n_vars(), 0);
  std::vector<std::size_t> idx(parents.size(), 0);
  for (;;) {
    for (std::size_t i = 0; i < parents.size(); ++i)
      state[parents[i]] = cm.range_by_id[parents[i]][idx[i]];
    Value v;
    try {
      v = cm.eval_endo(endo_ordinal, state);
    } catch (const ModelInvalidError&) {
      std::ostringstream msg;
      msg << "table has no row (and no default) at ";
      for (std::size_t i = 0; i < parents.size(); ++i)
        msg << (i ? ", " : "") << cm.var_names[parents[i]] << "=" << state[parents[i]];
      out.push_back({"table-incomplete", target, msg.str()});
      return;
    }
    if (std::find(target_range.begin(), target_range.end(), v) == target_range.end()) {
      std::ostringstream msg;
      msg << "equation produces " << v << " outside the declared range at ";
      if (parents.empty()) msg << "(no inputs)";
      for (std::size_t i = 0; i < parents.size(); ++i)
        msg << (i ? ", " : "") << cm.var_names[parents[i]] << "=" << state[parents[i]];
      out.push_back({"range-closure", target, msg.str()});
      return;
    }
    // Advance the odometer.
    std::size_t i = 0;
    for (; i < parents.size(); ++i) {
      if (++idx[i] < cm.range_by_id[parents[i]].size()) break;
      idx[i] = 0;
    }
    if (i == parents.size()) return;
  }
}

}  // namespace

std::vector<Diagnostic> validate_model(const CausalModel& model) {
  std::vector<Diagnostic> out = model.structural_diagnostics();
  const CompiledModel* cm = model.engine();
  if (cm && cm->acyclic) {
    for (int k = 0; k < cm->n_endo; ++k) closure_sweep(model, k, out);
  }
  return out;
}

std::vector<std::pair<std::string, std::string>> causal_network(const CausalModel& model) {
  std::vector<std::pair<std::string, std::string>> edges;
  const Signature& sig = model.signature();
  auto decl_index = [&sig](const std::string& name) {
    for (std::size_t i = 0; i < sig.exogenous.size(); ++i)
      if (sig.exogenous[i] == name) return static_cast<int>(i);
    for (std::size_t i = 0; i < sig.endogenous.size(); ++i)
      if (sig.endogenous[i] == name) return static_cast<int>(sig.exogenous.size() + i);
    return -1;
  };
  for (const auto& target : sig.endogenous) {
    const Equation* eq = model.equation_for(target);
    if (!eq) continue;
    std::vector<std::string> refs;
    for (const auto& ref : expr_vars(*eq->body))
      if (ref != target && decl_index(ref) >= 0) refs.push_back(ref);
    std::sort(refs.begin(), refs.end(), [&](const std::string& a, const std::string& b) {
      return decl_index(a) < decl_index(b);
    });
    for (const auto& ref : refs) edges.emplace_back(ref, target);
  }
  return edges;
}

bool is_recursive(const CausalModel& model) {
  const CompiledModel* cm = model.engine();
  return cm && cm->acyclic;
}

namespace {

void require_engine(const CausalModel& model) {
  const CompiledModel* cm = model.engine();
  if (!cm)
    throw ModelInvalidError("invalid model: " + format_diagnostics(model.structural_diagnostics()));
  if (!cm->acyclic)
    throw ModelInvalidError("invalid model: " + format_diagnostics(model.structural_diagnostics()));
}

}  // namespace

// Shared bind step: fills `state` with context values and pins, marking pinned
// endogenous variables. Throws BindingError on any name/range problem.
static void bind_inputs(const CausalModel& model, const Context& context,
                        const Intervention& intervention, std::vector<Value>& state,
                        std::vector<char>& pinned) {
  const CompiledModel& cm = *model.engine();
  const Signature& sig = model.signature();
  state.assign(cm.n_vars(), 0);
  pinned.assign(cm.n_vars(), 0);

  for (const auto& [name, v] : context.values) {
    int id = cm.id(name);
    if (id < 0) throw BindingError("context assigns unknown variable '" + name + "'");
    if (id >= cm.n_exo)
      throw BindingError("context assigns endogenous variable '" + name + "'");
    if (!sig.in_range(name, v))
      throw BindingError("context value " + std::to_string(v) + " is outside the range of '" +
                         name + "'");
    state[id] = v;
    pinned[id] = 1;
  }
  for (const auto& name : sig.exogenous) {
    if (!context.values.count(name))
      throw BindingError("context does not assign exogenous variable '" + name + "'");
  }

  std::set<std::string> targets;
  for (const auto& [name, v] : intervention.sets) {
    int id = cm.id(name);
    if (id < 0) throw BindingError("intervention targets unknown variable '" + name + "'");
    if (id < cm.n_exo)
      throw BindingError("intervention targets exogenous variable '" + name + "'");
    if (!targets.insert(name).second)
      throw BindingError("intervention targets '" + name + "' more than once");
    if (!sig.in_range(name, v))
      throw BindingError("intervention value " + std::to_string(v) +
                         " is outside the range of '" + name + "'");
    state[id] = v;
    pinned[id] = 1;
  }
}

Assignment solve(const CausalModel& model, const Context& context,
                 const Intervention& intervention) {
  require_engine(model);
  const CompiledModel& cm = *model.engine();
  std::vector<Value> state;
  std::vector<char> pinned;
  bind_inputs(model, context, intervention, state, pinned);
  cm.run(state, pinned);
  Assignment out;
  for (int id = 0; id < cm.n_vars(); ++id) out[cm.var_names[id]] = state[id];
  return out;
}

CausalModel intervene(const CausalModel& model, const Intervention& intervention) {
  require_engine(model);
  const CompiledModel& cm = *model.engine();
  const Signature& sig = model.signature();
  std::set<std::string> targets;
  for (const auto& [name, v] : intervention.sets) {
    int id = cm.id(name);
    if (id < 0) throw BindingError("intervention targets unknown variable '" + name + "'");
    if (id < cm.n_exo)
      throw BindingError("intervention targets exogenous variable '" + name + "'");
    if (!targets.insert(name).second)
      throw BindingError("intervention targets '" + name + "' more than once");
    if (!sig.in_range(name, v))
      throw BindingError("intervention value " + std::to_string(v) +
                         " is outside the range of '" + name + "'");
  }
  std::vector<Equation> eqs;
  for (const auto& eq : model.equations()) {
    if (auto v = intervention.value_of(eq.target))
      eqs.push_back({eq.target, Expr::lit(*v)});
    else
      eqs.push_back(eq);
  }
  return CausalModel(sig, std::move(eqs));
}

}  // namespace causal
