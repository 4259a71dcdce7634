// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "prefq/mucalc.hpp"
#include "prefq/query.hpp"

namespace prefq {

struct TranslateStats {
  int node_count = 0;
  int binder_count = 0;
  int modal_count = 0;
};

struct Translation {
  MuFormula formula;
  int fresh_variable_counter = 0;  // fixpoint names Z0..Z(counter-1) were used
  TranslateStats stats;
};

// Compiles a query into a least-fixpoint formula whose global evaluation,
// restricted to outcomes, equals the direct answer under the same mode.
//
// Each preference operator becomes reachability fixpoints over its coalition:
// reverse-step fixpoints find nodes some target dominates, forward-step ones
// find nodes dominated by a target, and the mode decides whether stakeholders
// quantify per id or as one coalition. Conjuncts fold left in the order
// first argument, witness part, agreement part, with stakeholder ids
// ascending. The second argument's translation is copied into every fixpoint
// body, each copy with fresh variable names; nested preference operators are
// translated under the same mode.
Translation translate(const Query& q, SemanticsMode mode);

}  // namespace prefq
