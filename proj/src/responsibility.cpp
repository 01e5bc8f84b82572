#include "causal/responsibility.hpp"

#include <algorithm>
#include <future>

namespace causal {

ResponsibilityResult responsibility(const CausalModel& model, const Context& context,
                                    const Event& event, const EventFormula& phi,
                                    const SearchOptions& options) {
  CauseResult cause = is_cause(model, context, event, phi, options);
  ResponsibilityResult out;
  out.status = cause.status;
  if (cause.status == CauseStatus::Cause) {
    out.witness = cause.witness;
    out.value = Rational(1) / Rational(cause.witness->k() + 1);
  }
  return out;
}

ResponsibilityResult weighted_responsibility(const CausalModel& model, const Context& context,
                                             const Event& event, const EventFormula& phi,
                                             const WeightTable& weights,
                                             const SearchOptions& options) {
  for (const auto& [name, w] : weights.weights) {
    if (!(w > Rational(0)))
      throw ModelInvalidError("weight-nonpositive (" + name + "): weights must be positive");
  }
  // Minimal total weight is not monotone in the number of changes, so the
  // whole sweep runs; the canonical enumeration order makes the first
  // minimal-weight witness the canonical one.
  WitnessSet all = enumerate_witnesses(model, context, event, phi, options);
  ResponsibilityResult out;
  if (all.witnesses.empty()) {
    out.status = all.complete ? CauseStatus::NotCause : CauseStatus::Inconclusive;
    return out;
  }
  const CauseWitness* best = nullptr;
  Rational best_weight;
  for (const auto& w : all.witnesses) {
    Rational total(0);
    for (const auto& [name, v] : w.changed) total += weights.weight_of(name);
    if (!best || total < best_weight) {
      best = &w;
      best_weight = total;
    }
  }
  out.status = CauseStatus::Cause;
  out.witness = *best;
  Rational wx = weights.weight_of(event.var);
  out.value = wx / (best_weight + wx);
  return out;
}

std::vector<Diagnostic> validate_epistemic_state(const EpistemicState& state) {
  std::vector<Diagnostic> out;
  if (state.situations.empty()) {
    out.push_back({"empty-epistemic-state", "", "an epistemic state needs at least one situation"});
    return out;
  }
  Rational total(0);
  for (const auto& s : state.situations) {
    for (auto d : validate_model(s.model)) {
      d.subject = s.label + (d.subject.empty() ? "" : "." + d.subject);
      out.push_back(std::move(d));
    }
    const Signature& sig = s.model.signature();
    for (const auto& [name, v] : s.context.values) {
      if (!sig.is_exogenous(name)) {
        out.push_back({"context-variable", s.label + "." + name,
                       "context must assign exogenous variables only"});
      } else if (!sig.in_range(name, v)) {
        out.push_back({"value-out-of-range", s.label + "." + name,
                       "context value " + std::to_string(v) + " is outside the declared range"});
      }
    }
    for (const auto& name : sig.exogenous) {
      if (!s.context.values.count(name))
        out.push_back({"missing-context-value", s.label + "." + name,
                       "context does not assign this exogenous variable"});
    }
    if (!(s.prob > Rational(0)))
      out.push_back({"probability-nonpositive", s.label,
                     "situation probability must be positive, got " + s.prob.str()});
    total += s.prob;
  }
  if (total != Rational(1))
    out.push_back(
        {"probability-sum", "", "situation probabilities sum to " + total.str() + ", not 1"});
  return out;
}

BlameResult blame(const EpistemicState& state, const Event& action, const EventFormula& phi,
                  const SearchOptions& options) {
  auto diags = validate_epistemic_state(state);
  if (!diags.empty()) throw ModelInvalidError(format_diagnostics(diags));

  auto dr_of = [&](const Situation& s) {
    Intervention act;
    act.set(action.var, action.value);
    CausalModel acted = intervene(s.model, act);
    SearchOptions local = options;
    local.policy.merge(s.policy);
    return responsibility(acted, s.context, action, phi, local);
  };

  const auto& situations = state.situations;
  std::vector<ResponsibilityResult> results(situations.size());
  int threads = std::max(1, options.threads);
  if (threads > 1 && situations.size() > 1) {
    // Fan situations out in waves of at most `threads`; the reduction below
    // stays in declaration order.
    for (std::size_t start = 0; start < situations.size(); start += threads) {
      std::size_t end = std::min(situations.size(), start + static_cast<std::size_t>(threads));
      std::vector<std::future<ResponsibilityResult>> futures;
      for (std::size_t i = start; i < end; ++i)
        futures.push_back(std::async(std::launch::async, dr_of, std::cref(situations[i])));
      for (std::size_t i = start; i < end; ++i) results[i] = futures[i - start].get();
    }
  } else {
    for (std::size_t i = 0; i < situations.size(); ++i) results[i] = dr_of(situations[i]);
  }

  BlameResult out;
  out.value = Rational(0);
  for (std::size_t i = 0; i < situations.size(); ++i) {
    if (results[i].inconclusive()) out.inconclusive = true;
    out.per_situation.emplace_back(situations[i].label, results[i].value);
    out.value += situations[i].prob * results[i].value;
  }
  return out;
}

}  // namespace causal
