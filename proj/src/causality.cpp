#include "causal/causality.hpp"

#include "causal/engine.hpp"

#include <algorithm>
#include <set>

namespace causal {

void AllowabilityPolicy::merge(const AllowabilityPolicy& other) {
  for (const auto& p : other.forbid) forbid.push_back(p);
}

namespace {

// Event formula with variable ids resolved, evaluated against state vectors.
struct CompiledEvent {
  EventOp op = EventOp::Atom;
  int var_id = -1;
  Value value = 0;
  std::vector<CompiledEvent> kids;

  bool eval(const std::vector<Value>& state) const {
    switch (op) {
      case EventOp::Atom:
        return state[var_id] == value;
      case EventOp::Not:
        return !kids[0].eval(state);
      case EventOp::And:
        return kids[0].eval(state) && kids[1].eval(state);
      case EventOp::Or:
        return kids[0].eval(state) || kids[1].eval(state);
    }
    return false;
  }
};

CompiledEvent compile_event(const CompiledModel& cm, const EventFormula& f) {
  CompiledEvent out;
  out.op = f.op;
  if (f.op == EventOp::Atom) {
    out.var_id = cm.id(f.var);
    out.value = f.value;
  } else {
    for (const auto& k : f.kids) out.kids.push_back(compile_event(cm, *k));
  }
  return out;
}

// Shared machinery for AC checks and the witness search, bound to one
// (model, context, event, phi, policy) query.
struct Search {
  const CausalModel& model;
  const CompiledModel& cm;
  int x_id;
  Value x_actual;
  CompiledEvent phi;
  std::vector<std::vector<std::pair<int, Value>>> patterns;  // bound policy
  std::vector<Value> base;      // unintervened solution
  std::vector<Value> exo_seed;  // context values at exogenous ids, zero elsewhere

  // Scratch buffers reused across solves.
  mutable std::vector<Value> state;
  mutable std::vector<char> pinned;

  Search(const CausalModel& model_, const Context& context, const Event& event,
         const EventFormula& phi_, const AllowabilityPolicy& policy)
      : model(model_), cm(*model_.engine()) {
    const Signature& sig = model.signature();
    if (!sig.is_declared(event.var))
      throw BindingError("event mentions undeclared variable '" + event.var + "'");
    if (!sig.is_endogenous(event.var))
      throw BindingError("event variable '" + event.var + "' is exogenous");
    if (!sig.in_range(event.var, event.value))
      throw BindingError("event value " + std::to_string(event.value) +
                         " is outside the range of '" + event.var + "'");
    auto diags = bind_event(model, phi_);
    if (!diags.empty()) throw BindingError(format_diagnostics(diags));
    for (const auto& pattern : policy.forbid) {
      std::vector<std::pair<int, Value>> bound;
      std::set<std::string> seen;
      for (const auto& [name, v] : pattern) {
        if (!sig.is_declared(name))
          throw BindingError("forbidden pattern mentions undeclared variable '" + name + "'");
        if (!sig.is_endogenous(name))
          throw BindingError("forbidden pattern mentions exogenous variable '" + name + "'");
        if (!sig.in_range(name, v))
          throw BindingError("forbidden pattern value " + std::to_string(v) +
                             " is outside the range of '" + name + "'");
        if (!seen.insert(name).second)
          throw BindingError("forbidden pattern mentions '" + name + "' twice");
        bound.emplace_back(cm.id(name), v);
      }
      patterns.push_back(std::move(bound));
    }
    x_id = cm.id(event.var);
    x_actual = event.value;
    phi = compile_event(cm, phi_);

    Assignment sol = solve(model, context);  // also validates the context
    base.resize(cm.n_vars());
    for (int id = 0; id < cm.n_vars(); ++id) base[id] = sol.at(cm.var_names[id]);
    exo_seed.assign(cm.n_vars(), 0);
    for (int id = 0; id < cm.n_exo; ++id) exo_seed[id] = base[id];
  }

  // Solve under pins given as (id, value) pairs; result lands in `state`.
  void solve_pinned(const std::vector<std::pair<int, Value>>& pins) const {
    state = exo_seed;
    pinned.assign(cm.n_vars(), 0);
    for (const auto& [id, v] : pins) {
      state[id] = v;
      pinned[id] = 1;
    }
    cm.run(state, pinned);
  }

  bool forbidden(const std::vector<Value>& s) const {
    for (const auto& pattern : patterns) {
      bool all = true;
      for (const auto& [id, v] : pattern) {
        if (s[id] != v) {
          all = false;
          break;
        }
      }
      if (all) return true;
    }
    return false;
  }

  bool ac1() const { return base[x_id] == x_actual && phi.eval(base); }

  // Full AC2 + policy test of one candidate contingency. `w_pins` holds the
  // (id, value) pairs for W (changed and frozen alike), `rest` the variables
  // outside {X} and W, ascending by id.
  bool test(Value x_prime, const std::vector<std::pair<int, Value>>& w_pins,
            const std::vector<int>& rest) const {
    std::vector<std::pair<int, Value>> pins;
    pins.reserve(w_pins.size() + rest.size() + 1);

    // AC2(a): the counterfactual setting falsifies phi.
    pins.emplace_back(x_id, x_prime);
    pins.insert(pins.end(), w_pins.begin(), w_pins.end());
    solve_pinned(pins);
    if (!patterns.empty() && forbidden(state)) return false;
    if (phi.eval(state)) return false;

    // Policy also constrains the restoring side.
    if (!patterns.empty()) {
      pins[0] = {x_id, x_actual};
      solve_pinned(pins);
      if (forbidden(state)) return false;
    }

    // AC2(b): phi holds with X restored, under every subset of `rest` pinned
    // back to its original solved value. X itself is always restored, so
    // subsets containing X are covered without enumerating them. Subsets are
    // visited smallest-first only for early exit; all must pass.
    std::vector<std::size_t> members;
    for (std::size_t size = 0; size <= rest.size(); ++size) {
      members.assign(size, 0);
      for (std::size_t i = 0; i < size; ++i) members[i] = i;
      for (;;) {
        pins.clear();
        pins.emplace_back(x_id, x_actual);
        pins.insert(pins.end(), w_pins.begin(), w_pins.end());
        for (std::size_t i : members) pins.emplace_back(rest[i], base[rest[i]]);
        solve_pinned(pins);
        if (!phi.eval(state)) return false;
        // Next size-`size` combination.
        if (size == 0) break;
        std::size_t j = size;
        while (j > 0 && members[j - 1] == rest.size() - size + (j - 1)) --j;
        if (j == 0) break;
        ++members[j - 1];
        for (std::size_t i = j; i < size; ++i) members[i] = members[i - 1] + 1;
      }
    }
    return true;
  }

  CauseWitness make_witness(Value x_prime, const std::vector<int>& changed_ids,
                            const std::vector<Value>& changed_vals,
                            const std::vector<int>& frozen_ids) const {
    CauseWitness w;
    w.x_prime = x_prime;
    for (std::size_t i = 0; i < changed_ids.size(); ++i)
      w.changed.emplace_back(cm.var_names[changed_ids[i]], changed_vals[i]);
    for (int id : frozen_ids) w.frozen.emplace_back(cm.var_names[id], base[id]);
    return w;
  }
};

// Visit subsets of items[from...] as extensions of `cur`, in lexicographic
// order with shorter prefixes first. `fn` returns false to abort.
template <typename Fn>
bool subsets_lex(const std::vector<int>& items, std::size_t from, std::vector<int>& cur, Fn&& fn) {
  if (!fn(cur)) return false;
  for (std::size_t i = from; i < items.size(); ++i) {
    cur.push_back(items[i]);
    if (!subsets_lex(items, i + 1, cur, fn)) return false;
    cur.pop_back();
  }
  return true;
}

// Visit size-k combinations of `items` in lexicographic order.
template <typename Fn>
bool combinations_lex(const std::vector<int>& items, std::size_t k, std::size_t from,
                      std::vector<int>& cur, Fn&& fn) {
  if (cur.size() == k) return fn(cur);
  for (std::size_t i = from; i + (k - cur.size()) <= items.size(); ++i) {
    cur.push_back(items[i]);
    if (!combinations_lex(items, k, i + 1, cur, fn)) return false;
    cur.pop_back();
  }
  return true;
}

// Runs the canonical sweep. `on_witness` receives each verified witness in
// canonical order and returns false to stop the search.
template <typename Fn>
void sweep(const Search& search, const SearchOptions& options, bool& capped, Fn&& on_witness) {
  const CompiledModel& cm = search.cm;
  std::vector<int> others;
  for (int id = cm.n_exo; id < cm.n_vars(); ++id)
    if (id != search.x_id) others.push_back(id);

  const int full_depth = static_cast<int>(others.size());
  int depth = full_depth;
  if (options.max_changes && *options.max_changes < depth) depth = std::max(0, *options.max_changes);
  capped = depth < full_depth;

  const auto& x_range = cm.range_by_id[search.x_id];
  std::vector<int> changed, frozen, rest, remaining;
  std::vector<Value> vals;
  std::vector<std::pair<int, Value>> w_pins;
  bool go = true;

  for (int k = 0; k <= depth && go; ++k) {
    changed.clear();
    go = combinations_lex(others, static_cast<std::size_t>(k), 0, changed, [&](const std::vector<int>& c) {
      remaining.clear();
      std::set_difference(others.begin(), others.end(), c.begin(), c.end(),
                          std::back_inserter(remaining));
      frozen.clear();
      return subsets_lex(remaining, 0, frozen, [&](const std::vector<int>& f) {
        rest.clear();
        std::set_difference(remaining.begin(), remaining.end(), f.begin(), f.end(),
                            std::back_inserter(rest));
        // Odometer over contingency values: each changed variable ranges over
        // its declared values minus its actual one, in declaration order.
        std::vector<std::vector<Value>> choices(c.size());
        for (std::size_t i = 0; i < c.size(); ++i) {
          for (Value v : cm.range_by_id[c[i]])
            if (v != search.base[c[i]]) choices[i].push_back(v);
          if (choices[i].empty()) return true;  // unary range: nothing to change
        }
        std::vector<std::size_t> idx(c.size(), 0);
        for (;;) {
          vals.clear();
          for (std::size_t i = 0; i < c.size(); ++i) vals.push_back(choices[i][idx[i]]);
          w_pins.clear();
          for (std::size_t i = 0; i < c.size(); ++i) w_pins.emplace_back(c[i], vals[i]);
          for (int id : f) w_pins.emplace_back(id, search.base[id]);
          for (Value xp : x_range) {
            if (xp == search.x_actual) continue;
            if (search.test(xp, w_pins, rest)) {
              if (!on_witness(search.make_witness(xp, c, vals, f))) return false;
            }
          }
          std::size_t i = c.size();
          while (i > 0 && ++idx[i - 1] == choices[i - 1].size()) idx[--i] = 0;
          if (i == 0) break;
        }
        return true;
      });
    });
  }
}

}  // namespace

bool check_ac1(const CausalModel& model, const Context& context, const Event& event,
               const EventFormula& phi) {
  Search search(model, context, event, phi, {});
  return search.ac1();
}

bool check_ac2(const CausalModel& model, const Context& context, const Event& event,
               const EventFormula& phi, const CauseWitness& witness,
               const AllowabilityPolicy& policy) {
  Search search(model, context, event, phi, policy);
  const Signature& sig = model.signature();
  const CompiledModel& cm = search.cm;

  if (!sig.in_range(event.var, witness.x_prime))
    throw BindingError("witness counterfactual value " + std::to_string(witness.x_prime) +
                       " is outside the range of '" + event.var + "'");
  if (witness.x_prime == event.value)
    throw BindingError("witness counterfactual value equals the actual value of '" + event.var +
                       "'");

  std::set<int> seen;
  std::vector<std::pair<int, Value>> w_pins;
  auto bind_member = [&](const std::string& name, Value v, bool is_changed) {
    if (!sig.is_declared(name))
      throw BindingError("witness mentions undeclared variable '" + name + "'");
    if (!sig.is_endogenous(name))
      throw BindingError("witness variable '" + name + "' is exogenous");
    if (name == event.var)
      throw BindingError("witness may not include the event variable '" + name + "'");
    if (!sig.in_range(name, v))
      throw BindingError("witness value " + std::to_string(v) + " is outside the range of '" +
                         name + "'");
    int id = cm.id(name);
    if (!seen.insert(id).second)
      throw BindingError("witness mentions '" + name + "' more than once");
    if (is_changed && v == search.base[id])
      throw BindingError("witness lists '" + name +
                         "' as changed, but the value equals its actual value");
    if (!is_changed && v != search.base[id])
      throw BindingError("witness lists '" + name +
                         "' as frozen, but the value differs from its actual value");
    w_pins.emplace_back(id, v);
  };
  for (const auto& [name, v] : witness.changed) bind_member(name, v, true);
  for (const auto& [name, v] : witness.frozen) bind_member(name, v, false);

  std::vector<int> rest;
  for (int id = cm.n_exo; id < cm.n_vars(); ++id)
    if (id != search.x_id && !seen.count(id)) rest.push_back(id);

  return search.test(witness.x_prime, w_pins, rest);
}

CauseResult is_cause(const CausalModel& model, const Context& context, const Event& event,
                     const EventFormula& phi, const SearchOptions& options) {
  Search search(model, context, event, phi, options.policy);
  CauseResult result;
  if (!search.ac1()) {
    result.status = CauseStatus::NotCause;
    return result;
  }
  bool capped = false;
  sweep(search, options, capped, [&](CauseWitness w) {
    result.status = CauseStatus::Cause;
    result.witness = std::move(w);
    return false;  // first witness in canonical order is the minimal one
  });
  if (result.status != CauseStatus::Cause)
    result.status = capped ? CauseStatus::Inconclusive : CauseStatus::NotCause;
  return result;
}

WitnessSet enumerate_witnesses(const CausalModel& model, const Context& context,
                               const Event& event, const EventFormula& phi,
                               const SearchOptions& options) {
  Search search(model, context, event, phi, options.policy);
  WitnessSet out;
  if (!search.ac1()) {
    // AC1 failing rules out every contingency, so the empty set is complete
    // even under a cap.
    return out;
  }
  bool capped = false;
  sweep(search, options, capped, [&](CauseWitness w) {
    out.witnesses.push_back(std::move(w));
    return true;
  });
  out.complete = !capped;
  return out;
}

}  // namespace causal
