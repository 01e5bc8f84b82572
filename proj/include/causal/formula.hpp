#pragma once

#include "causal/model.hpp"

namespace causal {

// ---------------------------------------------------------------------------
// Event formulas: boolean combinations of primitive events X = x over
// endogenous variables. These are what interventions and AC-conditions test.
// ---------------------------------------------------------------------------

enum class EventOp { Atom, Not, And, Or };

class EventFormula;
using EventPtr = std::shared_ptr<const EventFormula>;

class EventFormula {
public:
  EventOp op = EventOp::Atom;
  std::string var;  // Atom
  Value value = 0;  // Atom
  std::vector<EventPtr> kids;

  static EventPtr atom(std::string var, Value value);
  static EventPtr negate(EventPtr a);
  static EventPtr conj(EventPtr a, EventPtr b);
  static EventPtr disj(EventPtr a, EventPtr b);
};

bool event_equal(const EventFormula& a, const EventFormula& b);

// Atoms of `f` in first-occurrence order (var, value), with duplicates kept
// out.
std::vector<std::pair<std::string, Value>> event_atoms(const EventFormula& f);

// ---------------------------------------------------------------------------
// Causal formulas: boolean combinations of basic causal formulas
// [Y1 <- y1, ...] psi, where psi is an event formula. A bare event formula is
// the special case with an empty intervention prefix.
// ---------------------------------------------------------------------------

enum class CausalOp { Basic, Not, And, Or };

class CausalFormula;
using CausalPtr = std::shared_ptr<const CausalFormula>;

class CausalFormula {
public:
  CausalOp op = CausalOp::Basic;
  Intervention prefix;  // Basic
  EventPtr body;        // Basic
  std::vector<CausalPtr> kids;

  static CausalPtr basic(Intervention prefix, EventPtr body);
  static CausalPtr negate(CausalPtr a);
  static CausalPtr conj(CausalPtr a, CausalPtr b);
  static CausalPtr disj(CausalPtr a, CausalPtr b);
};

bool causal_equal(const CausalFormula& a, const CausalFormula& b);

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

// Truth-functional evaluation against a total assignment. Throws BindingError
// when an atom's variable is not assigned.
bool eval_event(const EventFormula& f, const Assignment& assignment);

// Name/range checks for an event formula against a model: every atom must
// name a declared endogenous variable and use a value inside its range.
std::vector<Diagnostic> bind_event(const CausalModel& model, const EventFormula& f);

// As bind_event, plus checks of every intervention prefix.
std::vector<Diagnostic> bind_causal(const CausalModel& model, const CausalFormula& f);

// Model-checking of a causal formula at a situation: each basic subformula
// [Ys <- ys] psi holds iff psi holds in the unique solution under that
// intervention. Throws on binding problems.
bool eval_causal(const CausalModel& model, const Context& context, const CausalFormula& f);

}  // namespace causal
