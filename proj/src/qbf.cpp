#include "causal/qbf.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace causal {

PropPtr Prop::var(std::string name) {
  auto p = std::make_shared<Prop>();
  p->op = PropOp::Var;
  p->name = std::move(name);
  return p;
}

PropPtr Prop::negate(PropPtr a) {
  auto p = std::make_shared<Prop>();
  p->op = PropOp::Not;
  p->kids = {std::move(a)};
  return p;
}

PropPtr Prop::conj(PropPtr a, PropPtr b) {
  auto p = std::make_shared<Prop>();
  p->op = PropOp::And;
  p->kids = {std::move(a), std::move(b)};
  return p;
}

PropPtr Prop::disj(PropPtr a, PropPtr b) {
  auto p = std::make_shared<Prop>();
  p->op = PropOp::Or;
  p->kids = {std::move(a), std::move(b)};
  return p;
}

bool prop_equal(const Prop& a, const Prop& b) {
  if (a.op != b.op) return false;
  if (a.op == PropOp::Var) return a.name == b.name;
  if (a.kids.size() != b.kids.size()) return false;
  for (std::size_t i = 0; i < a.kids.size(); ++i)
    if (!prop_equal(*a.kids[i], *b.kids[i])) return false;
  return true;
}

namespace {

void collect_prop_vars(const Prop& p, std::vector<std::string>& out, std::set<std::string>& seen) {
  if (p.op == PropOp::Var) {
    if (seen.insert(p.name).second) out.push_back(p.name);
    return;
  }
  for (const auto& k : p.kids) collect_prop_vars(*k, out, seen);
}

}  // namespace

std::vector<std::string> prop_vars(const Prop& p) {
  std::vector<std::string> out;
  std::set<std::string> seen;
  collect_prop_vars(p, out, seen);
  return out;
}

PropPtr negate_vars(const Prop& p) {
  if (p.op == PropOp::Var) return Prop::negate(Prop::var(p.name));
  auto out = std::make_shared<Prop>();
  out->op = p.op;
  for (const auto& k : p.kids) out->kids.push_back(negate_vars(*k));
  return out;
}

std::vector<Diagnostic> validate_qbf(const Qbf2& qbf) {
  std::vector<Diagnostic> out;
  std::set<std::string> seen;
  for (const auto& v : qbf.exists_vars)
    if (!seen.insert(v).second)
      out.push_back({"duplicate-variable", v, "variable quantified more than once"});
  for (const auto& v : qbf.forall_vars)
    if (!seen.insert(v).second)
      out.push_back({"duplicate-variable", v, "variable quantified more than once"});
  if (!qbf.matrix) {
    out.push_back({"missing-matrix", "", "formula has no matrix"});
    return out;
  }
  for (const auto& v : prop_vars(*qbf.matrix))
    if (!seen.count(v))
      out.push_back({"unquantified-variable", v, "matrix mentions an unquantified variable"});
  return out;
}

namespace {

struct BoundQbf {
  std::vector<int> exists_ids;  // indices into `vals`
  std::vector<int> forall_ids;
  // Matrix with var leaves replaced by indices.
  struct Node {
    PropOp op;
    int var = -1;
    std::vector<Node> kids;
    bool eval(const std::vector<char>& vals) const {
      switch (op) {
        case PropOp::Var:
          return vals[var] != 0;
        case PropOp::Not:
          return !kids[0].eval(vals);
        case PropOp::And:
          return kids[0].eval(vals) && kids[1].eval(vals);
        case PropOp::Or:
          return kids[0].eval(vals) || kids[1].eval(vals);
      }
      return false;
    }
  };
  Node matrix;
  int n_vars = 0;
};

BoundQbf::Node bind_prop(const Prop& p, const std::map<std::string, int>& ids) {
  BoundQbf::Node n;
  n.op = p.op;
  if (p.op == PropOp::Var) {
    n.var = ids.at(p.name);
  } else {
    for (const auto& k : p.kids) n.kids.push_back(bind_prop(*k, ids));
  }
  return n;
}

BoundQbf bind_qbf(const Qbf2& qbf) {
  auto diags = validate_qbf(qbf);
  if (!diags.empty()) throw BindingError(format_diagnostics(diags));
  BoundQbf b;
  std::map<std::string, int> ids;
  for (const auto& v : qbf.exists_vars) {
    ids[v] = b.n_vars;
    b.exists_ids.push_back(b.n_vars++);
  }
  for (const auto& v : qbf.forall_vars) {
    ids[v] = b.n_vars;
    b.forall_ids.push_back(b.n_vars++);
  }
  b.matrix = bind_prop(*qbf.matrix, ids);
  return b;
}

// True iff the universal part holds under the fixed existential assignment.
bool forall_holds(const BoundQbf& b, std::vector<char>& vals) {
  const std::size_t nb = b.forall_ids.size();
  for (std::uint64_t beta = 0; beta < (std::uint64_t{1} << nb); ++beta) {
    for (std::size_t i = 0; i < nb; ++i) vals[b.forall_ids[i]] = (beta >> i) & 1;
    if (!b.matrix.eval(vals)) return false;
  }
  return true;
}

// Calls `fn(popcount)` for every witness; returns true if any witness exists.
template <typename Fn>
bool for_each_witness(const Qbf2& qbf, Fn&& fn) {
  BoundQbf b = bind_qbf(qbf);
  if (b.exists_ids.size() > 62 || b.forall_ids.size() > 62)
    throw QbfCapError("quantifier block too large for exhaustive evaluation");
  std::vector<char> vals(b.n_vars, 0);
  bool any = false;
  const std::size_t na = b.exists_ids.size();
  for (std::uint64_t alpha = 0; alpha < (std::uint64_t{1} << na); ++alpha) {
    for (std::size_t i = 0; i < na; ++i) vals[b.exists_ids[i]] = (alpha >> i) & 1;
    if (forall_holds(b, vals)) {
      any = true;
      fn(alpha);
    }
  }
  return any;
}

}  // namespace

bool eval_qbf(const Qbf2& qbf) {
  return for_each_witness(qbf, [](std::uint64_t) {});
}

int maxqsat2(const Qbf2& qbf) {
  int best = -1;
  for_each_witness(qbf, [&](std::uint64_t alpha) {
    int ones = static_cast<int>(__builtin_popcountll(alpha));
    best = std::max(best, ones);
  });
  return best;
}

int minqsat2(const Qbf2& qbf) {
  int best = static_cast<int>(qbf.exists_vars.size()) + 1;
  bool any = for_each_witness(qbf, [&](std::uint64_t alpha) {
    int ones = static_cast<int>(__builtin_popcountll(alpha));
    best = std::min(best, ones);
  });
  return any ? best : static_cast<int>(qbf.exists_vars.size()) + 1;
}

int subset_maxqsat2(const Qbf2& qbf, const std::vector<std::string>& subset) {
  std::set<std::string> exists(qbf.exists_vars.begin(), qbf.exists_vars.end());
  std::uint64_t mask = 0;
  std::set<std::string> seen;
  for (const auto& v : subset) {
    if (!exists.count(v))
      throw BindingError("subset variable '" + v + "' is not existentially quantified");
    if (!seen.insert(v).second) throw BindingError("subset lists '" + v + "' twice");
  }
  for (std::size_t i = 0; i < qbf.exists_vars.size(); ++i)
    if (seen.count(qbf.exists_vars[i])) mask |= std::uint64_t{1} << i;
  int best = -1;
  for_each_witness(qbf, [&](std::uint64_t alpha) {
    int ones = static_cast<int>(__builtin_popcountll(alpha & mask));
    best = std::max(best, ones);
  });
  return best;
}

namespace {

std::string fresh_name(std::string base, const std::set<std::string>& taken) {
  if (!taken.count(base)) return base;
  for (int i = 1;; ++i) {
    std::string candidate = base + "_" + std::to_string(i);
    if (!taken.count(candidate)) return candidate;
  }
}

}  // namespace

Qbf2 subset_reduction(const Qbf2& qbf, const std::vector<std::string>& subset) {
  auto diags = validate_qbf(qbf);
  if (!diags.empty()) throw BindingError(format_diagnostics(diags));
  std::set<std::string> in_subset(subset.begin(), subset.end());
  for (const auto& v : subset) {
    if (std::find(qbf.exists_vars.begin(), qbf.exists_vars.end(), v) == qbf.exists_vars.end())
      throw BindingError("subset variable '" + v + "' is not existentially quantified");
  }
  std::set<std::string> taken(qbf.exists_vars.begin(), qbf.exists_vars.end());
  taken.insert(qbf.forall_vars.begin(), qbf.forall_vars.end());

  Qbf2 out;
  out.exists_vars = qbf.exists_vars;
  out.forall_vars = qbf.forall_vars;
  out.matrix = qbf.matrix;
  for (const auto& u : qbf.exists_vars) {
    if (in_subset.count(u)) continue;
    std::string primed = fresh_name(u + "_p", taken);
    taken.insert(primed);
    out.exists_vars.push_back(primed);
    // u <-> !u', spelled with the connectives the grammar has.
    PropPtr iff = Prop::disj(Prop::conj(Prop::var(u), Prop::negate(Prop::var(primed))),
                             Prop::conj(Prop::negate(Prop::var(u)), Prop::var(primed)));
    out.matrix = Prop::conj(out.matrix, iff);
  }
  return out;
}

namespace {

EventPtr prop_to_event(const Prop& p) {
  switch (p.op) {
    case PropOp::Var:
      return EventFormula::atom(p.name, 1);
    case PropOp::Not:
      return EventFormula::negate(prop_to_event(*p.kids[0]));
    case PropOp::And:
      return EventFormula::conj(prop_to_event(*p.kids[0]), prop_to_event(*p.kids[1]));
    case PropOp::Or:
      return EventFormula::disj(prop_to_event(*p.kids[0]), prop_to_event(*p.kids[1]));
  }
  return nullptr;
}

}  // namespace

TheoremInstance qbf_to_model(const Qbf2& qbf) {
  auto diags = validate_qbf(qbf);
  if (!diags.empty()) throw BindingError(format_diagnostics(diags));

  std::set<std::string> taken(qbf.exists_vars.begin(), qbf.exists_vars.end());
  taken.insert(qbf.forall_vars.begin(), qbf.forall_vars.end());
  TheoremInstance inst;
  inst.c_name = fresh_name("C", taken);
  taken.insert(inst.c_name);
  inst.x_name = fresh_name("X", taken);
  taken.insert(inst.x_name);
  inst.e_name = fresh_name("E", taken);
  taken.insert(inst.e_name);

  Signature sig;
  sig.exogenous = {inst.e_name};
  sig.ranges[inst.e_name] = {0, 1};
  std::vector<Equation> eqs;
  for (const auto& a : qbf.exists_vars) {
    sig.endogenous.push_back(a);
    sig.ranges[a] = {0, 1};
    eqs.push_back({a, Expr::lit(0)});
  }
  for (const auto& b : qbf.forall_vars) {
    sig.endogenous.push_back(b);
    sig.ranges[b] = {0, 1, 2};
    eqs.push_back({b, Expr::binary(ExprOp::Add, Expr::var(inst.c_name), Expr::var(inst.x_name))});
  }
  sig.endogenous.push_back(inst.c_name);
  sig.ranges[inst.c_name] = {0, 1};
  eqs.push_back({inst.c_name, Expr::lit(0)});
  sig.endogenous.push_back(inst.x_name);
  sig.ranges[inst.x_name] = {0, 1};
  eqs.push_back({inst.x_name, Expr::lit(0)});

  inst.model = CausalModel(std::move(sig), std::move(eqs));
  inst.context.values[inst.e_name] = 0;
  inst.event = {inst.x_name, 0};

  // psi = (phi' and no B-variable is 2)
  //    or (C = 0)
  //    or (X = 1 and C = 1 and some B-variable is not 2),
  // with phi' reading each QBF variable S as the event S = 1.
  EventPtr phi_prime = prop_to_event(*qbf.matrix);
  EventPtr clause1 = phi_prime;
  for (const auto& b : qbf.forall_vars)
    clause1 = EventFormula::conj(clause1, EventFormula::negate(EventFormula::atom(b, 2)));
  EventPtr psi = EventFormula::disj(clause1, EventFormula::atom(inst.c_name, 0));
  if (!qbf.forall_vars.empty()) {
    EventPtr some_not2;
    for (const auto& b : qbf.forall_vars) {
      EventPtr lit = EventFormula::negate(EventFormula::atom(b, 2));
      some_not2 = some_not2 ? EventFormula::disj(some_not2, lit) : lit;
    }
    EventPtr clause3 = EventFormula::conj(
        EventFormula::conj(EventFormula::atom(inst.x_name, 1), EventFormula::atom(inst.c_name, 1)),
        some_not2);
    psi = EventFormula::disj(psi, clause3);
  }
  inst.phi = psi;
  return inst;
}

TheoremCheck check_responsibility_theorem(const Qbf2& qbf) {
  if (qbf.exists_vars.size() > 4 || qbf.forall_vars.size() > 3)
    throw QbfCapError("theorem check is capped at 4 existential and 3 universal variables");
  if (qbf.forall_vars.empty())
    throw QbfCapError("theorem check needs at least one universal variable");

  TheoremCheck check;
  check.qbf_true = eval_qbf(qbf);
  check.minqsat = minqsat2(qbf);
  check.expected =
      check.qbf_true ? Rational(1) / Rational(check.minqsat + 2) : Rational(0);

  TheoremInstance inst = qbf_to_model(qbf);
  ResponsibilityResult r =
      responsibility(inst.model, inst.context, inst.event, *inst.phi);
  check.computed = r.value;
  check.witness = r.witness;
  check.holds = check.computed == check.expected;
  return check;
}

}  // namespace causal
