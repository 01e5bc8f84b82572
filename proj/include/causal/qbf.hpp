#pragma once

#include "causal/responsibility.hpp"

namespace causal {

// ---------------------------------------------------------------------------
// Propositional matrices
// ---------------------------------------------------------------------------

enum class PropOp { Var, Not, And, Or };

class Prop;
using PropPtr = std::shared_ptr<const Prop>;

class Prop {
public:
  PropOp op = PropOp::Var;
  std::string name;  // Var
  std::vector<PropPtr> kids;

  static PropPtr var(std::string name);
  static PropPtr negate(PropPtr a);
  static PropPtr conj(PropPtr a, PropPtr b);
  static PropPtr disj(PropPtr a, PropPtr b);
};

bool prop_equal(const Prop& a, const Prop& b);

// Distinct variables of `p` in first-occurrence order.
std::vector<std::string> prop_vars(const Prop& p);

// `p` with every variable occurrence replaced by its negation.
PropPtr negate_vars(const Prop& p);

// ---------------------------------------------------------------------------
// Closed 2-quantifier boolean formulas: exists A forall B . matrix
// ---------------------------------------------------------------------------

struct Qbf2 {
  std::vector<std::string> exists_vars;
  std::vector<std::string> forall_vars;
  PropPtr matrix;
};

// Duplicate variables within or across blocks, matrix variables outside the
// blocks, missing matrix.
std::vector<Diagnostic> validate_qbf(const Qbf2& qbf);

// Truth of the closed formula. Exhaustive over both blocks.
bool eval_qbf(const Qbf2& qbf);

// Maximum number of existential variables assigned 1 over all witnesses (an
// assignment to the existential block under which the universal part holds);
// -1 when the formula is false.
int maxqsat2(const Qbf2& qbf);

// Minimum over the same set; |exists_vars| + 1 when the formula is false.
int minqsat2(const Qbf2& qbf);

// Maximum number of variables from `subset` (a subset of the existential
// block) assigned 1 over all witnesses; -1 when the formula is false.
int subset_maxqsat2(const Qbf2& qbf, const std::vector<std::string>& subset);

// The reduction backing subset_maxqsat2: for U = exists \ subset, adds a
// primed copy u' per u in U, existentially quantified, and conjoins
// (u <-> !u') to the matrix. For a true formula,
// maxqsat2(result) - |U| == subset_maxqsat2(qbf, subset); for a false one
// both sides sit at the -1 sentinel without the offset.
Qbf2 subset_reduction(const Qbf2& qbf, const std::vector<std::string>& subset);

// ---------------------------------------------------------------------------
// Executable bridge between responsibility and QBF
// ---------------------------------------------------------------------------

// The situation and query built from a closed QBF so that the degree of
// responsibility of `event` for `phi` equals 1 / (minqsat2(qbf) + 2) exactly
// when the formula is true, and 0 otherwise. The construction needs at least
// one universal variable; with none, the model cannot tie the fresh switch
// variables to the matrix and the correspondence genuinely fails.
struct TheoremInstance {
  CausalModel model;
  Context context;
  Event event;
  EventPtr phi;
  // Fresh variable names actually used (renamed on collision with QBF names).
  std::string c_name;
  std::string x_name;
  std::string e_name;
};

TheoremInstance qbf_to_model(const Qbf2& qbf);

struct TheoremCheck {
  bool qbf_true = false;
  int minqsat = 0;
  Rational expected;  // 1/(minqsat+2) when true, 0 otherwise
  Rational computed;  // engine-computed degree of responsibility
  bool holds = false;
  std::optional<CauseWitness> witness;
};

// Runs both sides of the correspondence on one instance. Guarded to
// |exists| <= 4 and |forall| <= 3; beyond that the witness search blows up,
// and the guard throws QbfCapError.
class QbfCapError : public CausalError {
public:
  using CausalError::CausalError;
};

TheoremCheck check_responsibility_theorem(const Qbf2& qbf);

}  // namespace causal
