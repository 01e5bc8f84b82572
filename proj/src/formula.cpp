#include "causal/formula.hpp"

#include <set>

namespace causal {

EventPtr EventFormula::atom(std::string var, Value value) {
  auto f = std::make_shared<EventFormula>();
  f->op = EventOp::Atom;
  f->var = std::move(var);
  f->value = value;
  return f;
}

EventPtr EventFormula::negate(EventPtr a) {
  auto f = std::make_shared<EventFormula>();
  f->op = EventOp::Not;
  f->kids = {std::move(a)};
  return f;
}

EventPtr EventFormula::conj(EventPtr a, EventPtr b) {
  auto f = std::make_shared<EventFormula>();
  f->op = EventOp::And;
  f->kids = {std::move(a), std::move(b)};
  return f;
}

EventPtr EventFormula::disj(EventPtr a, EventPtr b) {
  auto f = std::make_shared<EventFormula>();
  f->op = EventOp::Or;
  f->kids = {std::move(a), std::move(b)};
  return f;
}

bool event_equal(const EventFormula& a, const EventFormula& b) {
  if (a.op != b.op) return false;
  if (a.op == EventOp::Atom) return a.var == b.var && a.value == b.value;
  if (a.kids.size() != b.kids.size()) return false;
  for (std::size_t i = 0; i < a.kids.size(); ++i)
    if (!event_equal(*a.kids[i], *b.kids[i])) return false;
  return true;
}

namespace {

void collect_atoms(const EventFormula& f, std::vector<std::pair<std::string, Value>>& out,
                   std::set<std::pair<std::string, Value>>& seen) {
  if (f.op == EventOp::Atom) {
    auto key = std::make_pair(f.var, f.value);
    if (seen.insert(key).second) out.push_back(key);
    return;
  }
  for (const auto& k : f.kids) collect_atoms(*k, out, seen);
}

}  // namespace

std::vector<std::pair<std::string, Value>> event_atoms(const EventFormula& f) {
  std::vector<std::pair<std::string, Value>> out;
  std::set<std::pair<std::string, Value>> seen;
  collect_atoms(f, out, seen);
  return out;
}

CausalPtr CausalFormula::basic(Intervention prefix, EventPtr body) {
  auto f = std::make_shared<CausalFormula>();
  f->op = CausalOp::Basic;
  f->prefix = std::move(prefix);
  f->body = std::move(body);
  return f;
}

CausalPtr CausalFormula::negate(CausalPtr a) {
  auto f = std::make_shared<CausalFormula>();
  f->op = CausalOp::Not;
  f->kids = {std::move(a)};
  return f;
}

CausalPtr CausalFormula::conj(CausalPtr a, CausalPtr b) {
  auto f = std::make_shared<CausalFormula>();
  f->op = CausalOp::And;
  f->kids = {std::move(a), std::move(b)};
  return f;
}

CausalPtr CausalFormula::disj(CausalPtr a, CausalPtr b) {
  auto f = std::make_shared<CausalFormula>();
  f->op = CausalOp::Or;
  f->kids = {std::move(a), std::move(b)};
  return f;
}

bool causal_equal(const CausalFormula& a, const CausalFormula& b) {
  if (a.op != b.op) return false;
  if (a.op == CausalOp::Basic) {
    if (a.prefix.sets != b.prefix.sets) return false;
    return event_equal(*a.body, *b.body);
  }
  if (a.kids.size() != b.kids.size()) return false;
  for (std::size_t i = 0; i < a.kids.size(); ++i)
    if (!causal_equal(*a.kids[i], *b.kids[i])) return false;
  return true;
}

bool eval_event(const EventFormula& f, const Assignment& assignment) {
  switch (f.op) {
    case EventOp::Atom: {
      auto it = assignment.find(f.var);
      if (it == assignment.end())
        throw BindingError("formula mentions unassigned variable '" + f.var + "'");
      return it->second == f.value;
    }
    case EventOp::Not:
      return !eval_event(*f.kids[0], assignment);
    case EventOp::And:
      return eval_event(*f.kids[0], assignment) && eval_event(*f.kids[1], assignment);
    case EventOp::Or:
      return eval_event(*f.kids[0], assignment) || eval_event(*f.kids[1], assignment);
  }
  return false;
}

namespace {

void bind_event_into(const CausalModel& model, const EventFormula& f,
                     std::vector<Diagnostic>& out) {
  if (f.op == EventOp::Atom) {
    const Signature& sig = model.signature();
    if (!sig.is_declared(f.var)) {
      out.push_back({"unknown-variable", f.var, "formula mentions an undeclared variable"});
    } else if (!sig.is_endogenous(f.var)) {
      out.push_back(
          {"exogenous-event", f.var, "primitive events may only mention endogenous variables"});
    } else if (!sig.in_range(f.var, f.value)) {
      out.push_back({"value-out-of-range", f.var,
                     "event value " + std::to_string(f.value) + " is outside the declared range"});
    }
    return;
  }
  for (const auto& k : f.kids) bind_event_into(model, *k, out);
}

void bind_causal_into(const CausalModel& model, const CausalFormula& f,
                      std::vector<Diagnostic>& out) {
  if (f.op == CausalOp::Basic) {
    const Signature& sig = model.signature();
    std::set<std::string> targets;
    for (const auto& [name, v] : f.prefix.sets) {
      if (!sig.is_declared(name)) {
        out.push_back({"unknown-variable", name, "intervention targets an undeclared variable"});
      } else if (!sig.is_endogenous(name)) {
        out.push_back({"exogenous-intervention", name,
                       "interventions may only set endogenous variables"});
      } else if (!sig.in_range(name, v)) {
        out.push_back({"value-out-of-range", name,
                       "intervention value " + std::to_string(v) +
                           " is outside the declared range"});
      }
      if (!targets.insert(name).second)
        out.push_back({"duplicate-intervention", name, "intervention sets a variable twice"});
    }
    bind_event_into(model, *f.body, out);
    return;
  }
  for (const auto& k : f.kids) bind_causal_into(model, *k, out);
}

}  // namespace

std::vector<Diagnostic> bind_event(const CausalModel& model, const EventFormula& f) {
  std::vector<Diagnostic> out;
  bind_event_into(model, f, out);
  return out;
}

std::vector<Diagnostic> bind_causal(const CausalModel& model, const CausalFormula& f) {
  std::vector<Diagnostic> out;
  bind_causal_into(model, f, out);
  return out;
}

bool eval_causal(const CausalModel& model, const Context& context, const CausalFormula& f) {
  switch (f.op) {
    case CausalOp::Basic: {
      Assignment sol = solve(model, context, f.prefix);
      return eval_event(*f.body, sol);
    }
    case CausalOp::Not:
      return !eval_causal(model, context, *f.kids[0]);
    case CausalOp::And:
      return eval_causal(model, context, *f.kids[0]) && eval_causal(model, context, *f.kids[1]);
    case CausalOp::Or:
      return eval_causal(model, context, *f.kids[0]) || eval_causal(model, context, *f.kids[1]);
  }
  return false;
}

}  // namespace causal
