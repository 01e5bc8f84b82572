#pragma once

#include "causal/causality.hpp"
#include "causal/rational.hpp"

namespace causal {

// Positive weight per endogenous variable; variables without an entry weigh 1.
struct WeightTable {
  std::map<std::string, Rational> weights;

  Rational weight_of(const std::string& var) const {
    auto it = weights.find(var);
    return it == weights.end() ? Rational(1) : it->second;
  }
};

struct ResponsibilityResult {
  // 1/(k+1) for the minimal witness, 0 when the event is not a cause. For the
  // weighted variant: wt(X) / (wt(changed) + wt(X)) for a witness whose
  // changed set has minimal total weight.
  Rational value;
  CauseStatus status = CauseStatus::NotCause;
  std::optional<CauseWitness> witness;  // present iff status == Cause

  bool inconclusive() const { return status == CauseStatus::Inconclusive; }
};

// Degree of responsibility of `event` for `phi` at (model, context). The
// witness returned is the canonical minimal one. When options.max_changes
// truncates the sweep without a find, the result is flagged Inconclusive and
// must not be read as 0.
ResponsibilityResult responsibility(const CausalModel& model, const Context& context,
                                    const Event& event, const EventFormula& phi,
                                    const SearchOptions& options = {});

// Weight-generalized degree of responsibility: the changed set is minimized
// by total weight instead of cardinality (ties broken canonically). With unit
// weights this equals responsibility(). Throws ModelInvalidError on a
// nonpositive weight.
ResponsibilityResult weighted_responsibility(const CausalModel& model, const Context& context,
                                             const Event& event, const EventFormula& phi,
                                             const WeightTable& weights,
                                             const SearchOptions& options = {});

// One epistemic alternative: a model, a context, and the probability the
// agent assigns to it.
struct Situation {
  std::string label;
  CausalModel model;
  Context context;
  Rational prob;
  // Extra forbidden patterns contributed by this situation's model document;
  // merged with the query-level policy.
  AllowabilityPolicy policy;
};

struct EpistemicState {
  std::vector<Situation> situations;
};

// Nonempty, each situation's model valid, context total and in-range, every
// probability positive, and the probabilities sum to exactly 1.
std::vector<Diagnostic> validate_epistemic_state(const EpistemicState& state);

struct BlameResult {
  Rational value;
  bool inconclusive = false;  // some situation hit the max_changes cap
  // Degree of responsibility per situation, in declaration order.
  std::vector<std::pair<std::string, Rational>> per_situation;
};

// Degree of blame of setting action.var to action.value for phi: the
// probability-weighted sum of the degrees of responsibility of the action in
// each intervened situation (M_{X <- x}, u). Situations are independent, so
// options.threads > 1 fans them out; the summation order is fixed, keeping
// the result deterministic.
BlameResult blame(const EpistemicState& state, const Event& action, const EventFormula& phi,
                  const SearchOptions& options = {});

}  // namespace causal
