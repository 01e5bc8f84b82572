#pragma once

#include "causal/formula.hpp"

#include <optional>

namespace causal {

// A primitive event X = x, the candidate cause.
struct Event {
  std::string var;
  Value value = 0;
};

// Forbidden patterns over endogenous variables. A contingency is disallowed
// when, under either the counterfactual setting [X <- x', W <- w'] or the
// restoring setting [X <- x, W <- w'], the solved state satisfies every pair
// of some pattern.
struct AllowabilityPolicy {
  std::vector<std::vector<std::pair<std::string, Value>>> forbid;

  bool empty() const { return forbid.empty(); }
  void merge(const AllowabilityPolicy& other);
};

// A verified AC2 witness. `changed` lists the W-variables set away from their
// actual (solved) values together with the contingency values; `frozen` lists
// the W-variables held at their actual values. Both are in declaration order.
// k — the quantity responsibility is computed from — is the number of changed
// variables only.
struct CauseWitness {
  Value x_prime = 0;
  std::vector<std::pair<std::string, Value>> changed;
  std::vector<std::pair<std::string, Value>> frozen;

  int k() const { return static_cast<int>(changed.size()); }
};

struct SearchOptions {
  AllowabilityPolicy policy;
  // Upper bound on the number of changed variables explored. When the bound
  // cuts the sweep short and nothing was found, the outcome is Inconclusive
  // rather than NotCause.
  std::optional<int> max_changes;
  // Parallelism bound; consumed by blame's per-situation fan-out. The witness
  // search itself is sequential and deterministic.
  int threads = 1;
};

enum class CauseStatus { Cause, NotCause, Inconclusive };

struct CauseResult {
  CauseStatus status = CauseStatus::NotCause;
  std::optional<CauseWitness> witness;  // present iff status == Cause

  bool is_cause() const { return status == CauseStatus::Cause; }
};

struct WitnessSet {
  // Ascending by (k, changed set, frozen set, changed values, x'), comparing
  // variable sets lexicographically in declaration order.
  std::vector<CauseWitness> witnesses;
  // False iff max_changes stopped the sweep before the full depth, in which
  // case witnesses with more changes may exist beyond the cap.
  bool complete = true;
};

// AC1: the event and phi both hold in the unintervened solution.
bool check_ac1(const CausalModel& model, const Context& context, const Event& event,
               const EventFormula& phi);

// AC2 for one specific witness: the counterfactual condition (a), the
// restoration condition (b) over every subset of the unfixed variables, and
// the allowability policy. AC1 is not part of this check.
bool check_ac2(const CausalModel& model, const Context& context, const Event& event,
               const EventFormula& phi, const CauseWitness& witness,
               const AllowabilityPolicy& policy = {});

// Breadth-first search over contingencies, ascending in the number of changed
// variables; the witness returned is the canonical minimal one. For a single
// primitive event the minimality condition AC3 holds automatically: the empty
// candidate cannot satisfy AC2, because condition (a) and condition (b) at
// the empty restoring subset contradict each other.
CauseResult is_cause(const CausalModel& model, const Context& context, const Event& event,
                     const EventFormula& phi, const SearchOptions& options = {});

// Every witness up to the cap, in canonical order.
WitnessSet enumerate_witnesses(const CausalModel& model, const Context& context,
                               const Event& event, const EventFormula& phi,
                               const SearchOptions& options = {});

}  // namespace causal
