#pragma once

// Seeded random instances for differential tests. Models are built from
// complete function tables over earlier-declared variables, so every
// generated model is acyclic and range-closed by construction.

#include "causal/qbf.hpp"

#include <random>

namespace gen {

using causal::CausalModel;
using causal::Context;
using causal::Event;
using causal::EventPtr;
using causal::Qbf2;
using causal::Rational;
using causal::Value;

struct ModelInstance {
  CausalModel model;
  Context context;
};

// 1-2 exogenous and 1-`max_endo` endogenous variables with ranges of size
// 2-3; equations are complete tables (or constants) over earlier variables.
ModelInstance random_model(std::mt19937& rng, int max_endo = 4);

// A primitive event over a random endogenous variable. When `actual` is
// given, the value is that variable's value there (making AC1's first half
// hold); otherwise uniform over the range.
Event random_event(std::mt19937& rng, const CausalModel& model,
                   const causal::Assignment* actual = nullptr);

// Random event formula of small depth. Atom values are biased toward values
// from `actual` when given, so the formula often holds at the base solution.
EventPtr random_phi(std::mt19937& rng, const CausalModel& model,
                    const causal::Assignment* actual = nullptr);

// Random forbid patterns (possibly none) over the model's endogenous
// variables.
std::vector<std::vector<std::pair<std::string, Value>>> random_patterns(std::mt19937& rng,
                                                                        const CausalModel& model);

// Positive weights for a random subset of the endogenous variables.
std::map<std::string, Rational> random_weights(std::mt19937& rng, const CausalModel& model);

// Closed exists/forall formula with `n_exists` + `n_forall` variables and a
// random matrix tree.
Qbf2 random_qbf(std::mt19937& rng, int n_exists, int n_forall);

// Same blocks, matrix in 3-CNF.
Qbf2 random_cnf_qbf(std::mt19937& rng, int n_exists, int n_forall, int n_clauses);

}  // namespace gen
