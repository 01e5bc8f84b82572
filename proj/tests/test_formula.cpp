#include "causal/formula.hpp"
#include "generators.hpp"
#include "oracle.hpp"

#include <doctest.h>

#include <random>

using namespace causal;

namespace {

CausalModel two_switch_model() {
  Signature sig;
  sig.exogenous = {"U1", "U2"};
  sig.endogenous = {"A", "B", "L"};
  sig.ranges = {{"U1", {0, 1}}, {"U2", {0, 1}}, {"A", {0, 1}}, {"B", {0, 1}}, {"L", {0, 1}}};
  std::vector<Equation> eqs;
  eqs.push_back({"A", Expr::var("U1")});
  eqs.push_back({"B", Expr::var("U2")});
  eqs.push_back({"L", Expr::binary(ExprOp::And, Expr::var("A"), Expr::var("B"))});
  return CausalModel(std::move(sig), std::move(eqs));
}

}  // namespace

TEST_CASE("event formulas evaluate truth-functionally") {
  Assignment a{{"X", 1}, {"Y", 0}};
  EventPtr x1 = EventFormula::atom("X", 1);
  EventPtr y1 = EventFormula::atom("Y", 1);
  CHECK(eval_event(*x1, a));
  CHECK_FALSE(eval_event(*y1, a));
  CHECK(eval_event(*EventFormula::negate(y1), a));
  CHECK_FALSE(eval_event(*EventFormula::conj(x1, y1), a));
  CHECK(eval_event(*EventFormula::disj(x1, y1), a));
  CHECK_FALSE(eval_event(*EventFormula::negate(EventFormula::disj(x1, y1)), a));
}

TEST_CASE("unassigned atoms raise a binding error") {
  Assignment a{{"X", 1}};
  CHECK_THROWS_AS(eval_event(*EventFormula::atom("Z", 0), a), BindingError);
}

TEST_CASE("event_atoms lists atoms in first-occurrence order") {
  EventPtr f = EventFormula::disj(
      EventFormula::conj(EventFormula::atom("B", 1), EventFormula::atom("A", 0)),
      EventFormula::conj(EventFormula::atom("B", 1), EventFormula::atom("B", 0)));
  auto atoms = event_atoms(*f);
  REQUIRE(atoms.size() == 3);  // the repeated (B, 1) collapses; (B, 0) is distinct
  CHECK(atoms[0] == std::pair<std::string, Value>{"B", 1});
  CHECK(atoms[1] == std::pair<std::string, Value>{"A", 0});
  CHECK(atoms[2] == std::pair<std::string, Value>{"B", 0});
}

TEST_CASE("event_equal is structural") {
  EventPtr a = EventFormula::conj(EventFormula::atom("X", 1), EventFormula::atom("Y", 0));
  EventPtr b = EventFormula::conj(EventFormula::atom("X", 1), EventFormula::atom("Y", 0));
  EventPtr c = EventFormula::conj(EventFormula::atom("Y", 0), EventFormula::atom("X", 1));
  CHECK(event_equal(*a, *b));
  CHECK_FALSE(event_equal(*a, *c));  // commuted, structurally different
}

TEST_CASE("bind_event reports undeclared, exogenous, and out-of-range atoms") {
  CausalModel m = two_switch_model();
  CHECK(bind_event(m, *EventFormula::atom("L", 1)).empty());
  CHECK_FALSE(bind_event(m, *EventFormula::atom("NOPE", 1)).empty());
  CHECK_FALSE(bind_event(m, *EventFormula::atom("U1", 1)).empty());
  CHECK_FALSE(bind_event(m, *EventFormula::atom("L", 5)).empty());
}

TEST_CASE("bind_causal checks intervention prefixes too") {
  CausalModel m = two_switch_model();
  Intervention good;
  good.set("A", 0);
  CHECK(bind_causal(m, *CausalFormula::basic(good, EventFormula::atom("L", 0))).empty());

  Intervention exo;
  exo.set("U1", 0);
  CHECK_FALSE(bind_causal(m, *CausalFormula::basic(exo, EventFormula::atom("L", 0))).empty());

  Intervention range;
  range.set("A", 3);
  CHECK_FALSE(bind_causal(m, *CausalFormula::basic(range, EventFormula::atom("L", 0))).empty());
}

TEST_CASE("eval_causal applies the bracketed interventions") {
  CausalModel m = two_switch_model();
  Context u{{{"U1", 1}, {"U2", 1}}};

  CHECK(eval_causal(m, u, *CausalFormula::basic({}, EventFormula::atom("L", 1))));

  Intervention offA;
  offA.set("A", 0);
  CHECK(eval_causal(m, u, *CausalFormula::basic(offA, EventFormula::atom("L", 0))));

  // Boolean structure over basic formulas.
  CausalPtr lhs = CausalFormula::basic(offA, EventFormula::atom("L", 0));
  CausalPtr rhs = CausalFormula::basic({}, EventFormula::atom("L", 0));
  CHECK(eval_causal(m, u, *CausalFormula::disj(lhs, rhs)));
  CHECK_FALSE(eval_causal(m, u, *CausalFormula::conj(lhs, rhs)));
  CHECK(eval_causal(m, u, *CausalFormula::negate(rhs)));
}

TEST_CASE("eval_causal matches solving by hand on random models") {
  std::mt19937 rng(777);
  for (int i = 0; i < 200; ++i) {
    gen::ModelInstance inst = gen::random_model(rng);
    Assignment actual = solve(inst.model, inst.context);
    EventPtr phi = gen::random_phi(rng, inst.model, &actual);

    // Pick a random prefix.
    Intervention iv;
    std::map<std::string, Value> pins;
    const Signature& sig = inst.model.signature();
    for (const auto& var : sig.endogenous) {
      if (rng() % 3) continue;
      const auto* range = sig.range(var);
      Value v = (*range)[rng() % range->size()];
      iv.set(var, v);
      pins[var] = v;
    }
    bool ours = eval_causal(inst.model, inst.context, *CausalFormula::basic(iv, phi));
    bool ref = oracle::eval_event(*phi, oracle::solve(inst.model, inst.context, pins));
    CHECK(ours == ref);
  }
}
