#include "causal/model.hpp"
#include "generators.hpp"
#include "oracle.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>

using namespace causal;

namespace {

// Small well-formed model: A = U, B = !A, C = A || B.
CausalModel chain_model() {
  Signature sig;
  sig.exogenous = {"U"};
  sig.endogenous = {"A", "B", "C"};
  sig.ranges = {{"U", {0, 1}}, {"A", {0, 1}}, {"B", {0, 1}}, {"C", {0, 1}}};
  std::vector<Equation> eqs;
  eqs.push_back({"A", Expr::var("U")});
  eqs.push_back({"B", Expr::unary(ExprOp::Not, Expr::var("A"))});
  eqs.push_back({"C", Expr::binary(ExprOp::Or, Expr::var("A"), Expr::var("B"))});
  return CausalModel(std::move(sig), std::move(eqs));
}

bool has_code(const std::vector<Diagnostic>& diags, const std::string& code) {
  return std::any_of(diags.begin(), diags.end(),
                     [&](const Diagnostic& d) { return d.code == code; });
}

}  // namespace

TEST_CASE("a well-formed model validates cleanly") {
  CausalModel m = chain_model();
  CHECK(validate_model(m).empty());
  CHECK(is_recursive(m));
}

TEST_CASE("solve follows the equations") {
  CausalModel m = chain_model();
  Context u0{{{"U", 0}}}, u1{{{"U", 1}}};
  Assignment s0 = solve(m, u0);
  CHECK(s0.at("A") == 0);
  CHECK(s0.at("B") == 1);
  CHECK(s0.at("C") == 1);
  Assignment s1 = solve(m, u1);
  CHECK(s1.at("A") == 1);
  CHECK(s1.at("B") == 0);
  CHECK(s1.at("C") == 1);
}

TEST_CASE("solve under interventions severs equations") {
  CausalModel m = chain_model();
  Context u1{{{"U", 1}}};
  Intervention iv;
  iv.set("A", 0);
  Assignment s = solve(m, u1, iv);
  CHECK(s.at("A") == 0);  // pinned despite U = 1
  CHECK(s.at("B") == 1);
  CHECK(s.at("C") == 1);

  iv.set("B", 0);
  s = solve(m, u1, iv);
  CHECK(s.at("C") == 0);
}

TEST_CASE("intervene builds the severed model") {
  CausalModel m = chain_model();
  Intervention iv;
  iv.set("B", 0);
  CausalModel cut = intervene(m, iv);
  const Equation* eq = cut.equation_for("B");
  REQUIRE(eq);
  CHECK(eq->body->op == ExprOp::Literal);
  CHECK(eq->body->literal == 0);
  // Other equations and the signature are untouched.
  CHECK(expr_equal(*cut.equation_for("A")->body, *m.equation_for("A")->body));
  CHECK(cut.signature().endogenous == m.signature().endogenous);
}

TEST_CASE("causal_network lists dependencies in declaration order") {
  CausalModel m = chain_model();
  auto edges = causal_network(m);
  std::vector<std::pair<std::string, std::string>> want = {
      {"U", "A"}, {"A", "B"}, {"A", "C"}, {"B", "C"}};
  CHECK(edges == want);
}

TEST_CASE("structural problems are reported by code") {
  Signature sig;
  sig.exogenous = {"U"};
  sig.endogenous = {"A", "B"};
  sig.ranges = {{"U", {0, 1}}, {"A", {0, 1}}, {"B", {0, 1}}};

  SUBCASE("missing equation") {
    std::vector<Equation> eqs;
    eqs.push_back({"A", Expr::var("U")});
    CausalModel m(std::move(sig), std::move(eqs));
    CHECK(has_code(validate_model(m), "missing-equation"));
  }

  SUBCASE("duplicate equation") {
    std::vector<Equation> eqs;
    eqs.push_back({"A", Expr::var("U")});
    eqs.push_back({"A", Expr::lit(0)});
    eqs.push_back({"B", Expr::lit(0)});
    CausalModel m(std::move(sig), std::move(eqs));
    CHECK(has_code(validate_model(m), "duplicate-equation"));
  }

  SUBCASE("equation for an undeclared or exogenous target") {
    std::vector<Equation> eqs;
    eqs.push_back({"A", Expr::var("U")});
    eqs.push_back({"B", Expr::lit(0)});
    eqs.push_back({"U", Expr::lit(0)});
    CausalModel m(std::move(sig), std::move(eqs));
    CHECK(has_code(validate_model(m), "equation-target"));
  }

  SUBCASE("unknown variable in a body") {
    std::vector<Equation> eqs;
    eqs.push_back({"A", Expr::var("NOPE")});
    eqs.push_back({"B", Expr::lit(0)});
    CausalModel m(std::move(sig), std::move(eqs));
    CHECK(has_code(validate_model(m), "unknown-variable"));
  }

  SUBCASE("self reference") {
    std::vector<Equation> eqs;
    eqs.push_back({"A", Expr::var("A")});
    eqs.push_back({"B", Expr::lit(0)});
    CausalModel m(std::move(sig), std::move(eqs));
    CHECK(has_code(validate_model(m), "self-reference"));
  }

  SUBCASE("cycle") {
    std::vector<Equation> eqs;
    eqs.push_back({"A", Expr::var("B")});
    eqs.push_back({"B", Expr::var("A")});
    CausalModel m(std::move(sig), std::move(eqs));
    auto diags = validate_model(m);
    CHECK(has_code(diags, "cycle"));
    CHECK_FALSE(is_recursive(m));
    CHECK_THROWS_AS(solve(m, Context{{{"U", 0}}}), ModelInvalidError);
  }

  SUBCASE("duplicate declaration") {
    sig.endogenous.push_back("A");
    std::vector<Equation> eqs;
    eqs.push_back({"A", Expr::var("U")});
    eqs.push_back({"B", Expr::lit(0)});
    CausalModel m(std::move(sig), std::move(eqs));
    CHECK(has_code(validate_model(m), "duplicate-name"));
  }

  SUBCASE("missing and empty ranges") {
    sig.ranges.erase("A");
    sig.ranges["B"] = {};
    std::vector<Equation> eqs;
    eqs.push_back({"A", Expr::var("U")});
    eqs.push_back({"B", Expr::lit(0)});
    CausalModel m(std::move(sig), std::move(eqs));
    auto diags = validate_model(m);
    CHECK(has_code(diags, "missing-range"));
    CHECK(has_code(diags, "empty-range"));
  }

  SUBCASE("duplicate range value") {
    sig.ranges["A"] = {0, 0, 1};
    std::vector<Equation> eqs;
    eqs.push_back({"A", Expr::var("U")});
    eqs.push_back({"B", Expr::lit(0)});
    CausalModel m(std::move(sig), std::move(eqs));
    CHECK(has_code(validate_model(m), "duplicate-range-value"));
  }
}

TEST_CASE("validation sweeps the full input space for range closure") {
  Signature sig;
  sig.exogenous = {"U"};
  sig.endogenous = {"A"};
  sig.ranges = {{"U", {0, 1}}, {"A", {0, 1}}};
  std::vector<Equation> eqs;
  // A = U + 1 escapes {0,1} when U = 1.
  eqs.push_back({"A", Expr::binary(ExprOp::Add, Expr::var("U"), Expr::lit(1))});
  CausalModel m(std::move(sig), std::move(eqs));
  CHECK(has_code(validate_model(m), "range-closure"));
}

TEST_CASE("incomplete tables are caught") {
  Signature sig;
  sig.exogenous = {"U"};
  sig.endogenous = {"A", "B"};
  sig.ranges = {{"U", {0, 1}}, {"A", {0, 1}}, {"B", {0, 1}}};
  std::vector<Equation> eqs;
  eqs.push_back({"A", Expr::var("U")});
  // Table over A with a single row and no default.
  eqs.push_back({"B", Expr::table({"A"}, {TableRow{{0}, 1}}, std::nullopt)});
  CausalModel m(std::move(sig), std::move(eqs));
  CHECK(has_code(validate_model(m), "table-incomplete"));
}

TEST_CASE("contexts must be total and in range") {
  CausalModel m = chain_model();
  CHECK_THROWS_AS(solve(m, Context{}), BindingError);
  CHECK_THROWS_AS(solve(m, Context{{{"U", 7}}}), BindingError);
  CHECK_THROWS_AS(solve(m, Context{{{"U", 0}, {"Z", 0}}}), BindingError);
}

TEST_CASE("interventions must name endogenous variables in range") {
  CausalModel m = chain_model();
  Context u{{{"U", 0}}};
  Intervention bad;
  bad.set("U", 1);  // exogenous
  CHECK_THROWS_AS(solve(m, u, bad), BindingError);
  Intervention out;
  out.set("A", 9);
  CHECK_THROWS_AS(solve(m, u, out), BindingError);
}

TEST_CASE("solve agrees with the fixpoint oracle on random models") {
  std::mt19937 rng(555);
  for (int i = 0; i < 300; ++i) {
    gen::ModelInstance inst = gen::random_model(rng);
    REQUIRE(validate_model(inst.model).empty());
    Assignment ours = solve(inst.model, inst.context);
    Assignment ref = oracle::solve(inst.model, inst.context);
    CHECK(ours == ref);

    // And under a random pin.
    const auto& endo = inst.model.signature().endogenous;
    std::string var = endo[rng() % endo.size()];
    const auto* range = inst.model.signature().range(var);
    Value v = (*range)[rng() % range->size()];
    Intervention iv;
    iv.set(var, v);
    CHECK(solve(inst.model, inst.context, iv) == oracle::solve(inst.model, inst.context, {{var, v}}));
  }
}

TEST_CASE("solutions stay inside declared ranges on random models") {
  std::mt19937 rng(556);
  for (int i = 0; i < 200; ++i) {
    gen::ModelInstance inst = gen::random_model(rng);
    Assignment s = solve(inst.model, inst.context);
    for (const auto& [var, v] : s) CHECK(inst.model.signature().in_range(var, v));
  }
}
