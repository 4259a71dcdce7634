// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "prefq/direct.hpp"
#include "prefq/graph.hpp"

namespace prefq {

enum class MuOp : std::uint8_t {
  True,
  False,
  Prop,
  Not,
  And,
  Or,
  DiamFwd,  // <A>  phi: some forward edge compatible with A leads into phi
  DiamRev,  // <A>r phi: some edge into this node starts from phi
  Var,
  Mu,
};

struct MuNode {
  MuOp op = MuOp::True;
  std::int32_t lhs = -1;  // child (unary ops, Mu body, And/Or left)
  std::int32_t rhs = -1;  // And/Or right
  std::int32_t aux = -1;  // Prop: atom index; Diam: coalition index;
                          // Var/Mu: name index
};

// Least-fixpoint modal formulas over a preference graph, stored as an arena
// of nodes. Nodes form a tree: children are created before their parent and
// every node has exactly one parent. Node ids are stable, which makes them
// usable as memoization keys.
//
// There is no greatest fixpoint; formulas stay alternation-free because
// negation is only ever applied to closed subformulas, which validation
// enforces.
class MuFormula {
 public:
  std::int32_t add_true();
  std::int32_t add_false();
  std::int32_t add_prop(PropAtom atom);
  std::int32_t add_not(std::int32_t child);
  std::int32_t add_and(std::int32_t l, std::int32_t r);
  std::int32_t add_or(std::int32_t l, std::int32_t r);
  std::int32_t add_diamond(StakeholderSet coalition, bool reverse,
                           std::int32_t child);
  std::int32_t add_var(std::string name);
  std::int32_t add_mu(std::string var_name, std::int32_t body);
  void set_root(std::int32_t id);

  std::int32_t root() const { return root_; }
  std::int32_t node_count() const { return static_cast<std::int32_t>(nodes_.size()); }
  const MuNode& node(std::int32_t id) const {
    return nodes_[static_cast<std::size_t>(id)];
  }
  const PropAtom& atom_of(std::int32_t id) const;
  const StakeholderSet& coalition_of(std::int32_t id) const;
  const std::string& name_of(std::int32_t id) const;  // Var or Mu nodes

  int binder_count() const;
  int modal_count() const;

  // Structural checks over the tree under the root: a root must be set,
  // every fixpoint variable bound by an enclosing binder of the same name,
  // every negation applied to a closed subformula, every modality over a
  // non-empty coalition. Returns human-readable diagnostics, empty when the
  // formula is valid; the binding and closedness tables are cached on
  // success.
  const std::vector<std::string>& validate() const;

  // Valid only after a successful validate(): the Mu node binding this Var
  // occurrence, and whether a subformula has no free variables.
  std::int32_t binder_of(std::int32_t var_id) const;
  bool is_closed(std::int32_t id) const;

  // Throws SemanticError when validation reports diagnostics.
  void ensure_valid() const;

 private:
  std::int32_t push(MuNode n);

  std::vector<MuNode> nodes_;
  std::vector<PropAtom> atoms_;
  std::vector<StakeholderSet> coalitions_;
  std::vector<std::string> names_;
  std::int32_t root_ = -1;

  mutable bool validated_ = false;
  mutable std::vector<std::string> diagnostics_;
  mutable std::vector<std::int32_t> binder_;  // per node, Var only
  mutable std::vector<bool> closed_;
};

std::vector<std::string> validate_af(const MuFormula& f);

bool structurally_equal(const MuFormula& a, const MuFormula& b);

// Prints in the concrete syntax parse_formula reads back:
//
//   mu Z0 . (<{1}>r (E=code) | <{1}>r Z0)
//
// '~' negates, '&' and '|' combine with '!'-free query precedence, '<{ids}>'
// steps forward, '<{ids}>r' steps backward, and fixpoint bodies are always
// parenthesized. parse(print(f)) reproduces the tree.
std::string print_formula(const MuFormula& f);
MuFormula parse_formula(const std::string& text);

struct GlobalEvalStats {
  std::uint64_t fixpoints_evaluated = 0;
  std::uint64_t total_iterations = 0;
  std::uint64_t max_iterations = 0;  // worst single fixpoint run
};

// Evaluates by iterating every fixpoint from the empty set until it
// stabilizes, which takes at most one pass more than the universe size.
// Closed subformulas are computed once per call. Returns the satisfying
// nodes over the full universe, worst node included.
NodeSet eval_global(const MuFormula& f, const PreferenceGraph& g,
                    const EngineOptions& opts = {},
                    GlobalEvalStats* stats = nullptr);

// Goal-directed membership checking that explores only the part of the graph
// the formula steers it to. Goals are (fixpoint, node) pairs; re-entering a
// goal already in progress answers false, the least-fixpoint default, and
// completed verdicts are kept. A run that proved one of its own assumed-false
// goals is inconsistent and replays with the accumulated truths, so verdicts
// match the global semantics even on cyclic graphs. True verdicts persist
// across check() calls on one evaluator; distinct evaluators share nothing.
//
// Requires every fixpoint subformula to be closed (translations always are).
// Holds references to the formula and the graph: both must outlive the
// evaluator (in particular, keep the Translation that owns the formula).
class LocalEvaluator {
 public:
  LocalEvaluator(const MuFormula& f, const PreferenceGraph& g,
                 const EngineOptions& opts = {});
  bool check(NodeId node);

 private:
  struct RunState;
  bool eval_at(std::int32_t id, NodeId n, RunState& run);
  bool goal(std::int32_t mu_id, NodeId n, RunState& run);

  const MuFormula& f_;
  const PreferenceGraph& g_;
  EngineOptions opts_;
  std::vector<std::pair<int, int>> resolved_;        // per node: prop (var, val)
  std::vector<std::int32_t> mu_index_;               // node id -> dense mu index
  std::vector<std::vector<NodeId>> true_memo_;       // per mu, sorted
};

// One-shot membership check with a fresh evaluator.
bool eval_local(const MuFormula& f, const PreferenceGraph& g, NodeId node,
                const EngineOptions& opts = {});

}  // namespace prefq
