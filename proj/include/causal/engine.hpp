#pragma once

#include "causal/model.hpp"

#include <unordered_map>

namespace causal {

// Compiled form of a CausalModel used by solve() and the witness search.
// Variables get dense ids: exogenous first, then endogenous, both in
// declaration order. Equation bodies are flattened to postfix programs
// evaluated by a small stack machine.

struct Instr {
  ExprOp op;
  int a = 0;  // Literal: value; Var: variable id; Table: table index
};

struct TableData {
  std::vector<int> var_ids;
  std::map<std::vector<Value>, Value> rows;
  std::optional<Value> dflt;
};

struct CompiledModel {
  int n_exo = 0;
  int n_endo = 0;
  std::vector<std::string> var_names;             // by id
  std::unordered_map<std::string, int> id_of;     // name -> id
  std::vector<std::vector<Value>> range_by_id;    // by id
  std::vector<std::vector<Instr>> program;        // by endogenous ordinal (id - n_exo)
  std::vector<TableData> tables;
  std::vector<std::vector<int>> parents;          // by endogenous ordinal, sorted by id
  std::vector<int> topo;                          // endogenous ids in evaluation order
  bool acyclic = false;

  int n_vars() const { return n_exo + n_endo; }
  int id(const std::string& name) const;  // -1 when unknown

  // Evaluate the body of the endogenous variable with ordinal `k` against a
  // full state vector. Throws ModelInvalidError on an incomplete table.
  Value eval_endo(int k, const std::vector<Value>& state) const;

  // Evaluate all unpinned endogenous equations in topological order; `state`
  // must hold exogenous values and pinned endogenous values on entry. Checks
  // computed values against ranges (throws ModelInvalidError on escape).
  void run(std::vector<Value>& state, const std::vector<char>& pinned) const;
};

}  // namespace causal
