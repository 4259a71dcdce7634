// SPDX-License-Identifier: Apache-2.0
#include "prefq/direct.hpp"

#include <vector>

namespace prefq {

namespace {

NodeSet reach(const PreferenceGraph& g, const NodeSet& targets,
              const StakeholderSet& who, EdgeDir dir,
              const EngineOptions& opts) {
  NodeSet reached = g.empty_set();
  std::vector<NodeId> frontier = targets.to_vector();
  while (!frontier.empty()) {
    NodeId n = frontier.back();
    frontier.pop_back();
    opts.deadline.poll();
    for (NodeId m : g.successors(n, who, dir, opts.trace)) {
      if (reached.contains(m)) continue;
      reached.insert(m);
      frontier.push_back(m);
    }
  }
  return reached;
}

class DirectEvaluator {
 public:
  DirectEvaluator(const PreferenceGraph& g, SemanticsMode mode,
                  const EngineOptions& opts)
      : g_(g), mode_(mode), opts_(opts) {}

  // Full semantics over outcomes plus the worst node; tt holds at the worst
  // node, no atom does, and negation complements within the outcomes only.
  NodeSet eval(const Query& q) {
    switch (q.kind) {
      case Query::Kind::True:
        return g_.full_universe();
      case Query::Kind::False:
        return g_.empty_set();
      case Query::Kind::Prop:
        return g_.prop_nodes(q.prop, opts_.trace);
      case Query::Kind::Not: {
        NodeSet s = g_.all_outcomes();
        return s.subtract(eval(*q.lhs));
      }
      case Query::Kind::And:
        return eval(*q.lhs) & eval(*q.rhs);
      case Query::Kind::Or:
        return eval(*q.lhs) | eval(*q.rhs);
      case Query::Kind::Pref:
        return eval_pref(q);
    }
    throw InternalError("unhandled query node");
  }

 private:
  NodeSet eval_pref(const Query& q) {
    for (int id : q.coalition)
      if (!g_.stakeholders().contains(id))
        throw SemanticError("unknown stakeholder " + std::to_string(id) +
                            " in coalition " + q.coalition.to_string());

    NodeSet psi1 = eval(*q.lhs);
    NodeSet targets = eval(*q.rhs);

    if (mode_ == SemanticsMode::Consensus) {
      // Each stakeholder alone must both witness an improvement over a
      // target and concede no deterioration towards one.
      NodeSet acc = g_.full_universe();
      for (int a : q.coalition) {
        StakeholderSet one = StakeholderSet::single(a);
        NodeSet term = psi1 & dominators(g_, targets, one, opts_);
        NodeSet agree = g_.all_outcomes();
        agree.subtract(dominated(g_, targets, one, opts_));
        term &= agree;
        acc &= term;
      }
      return acc;
    }

    NodeSet witness = g_.empty_set();
    switch (mode_) {
      case SemanticsMode::W1A2:
      case SemanticsMode::W1A1:
        for (int a : q.coalition)
          witness |= dominators(g_, targets, StakeholderSet::single(a), opts_);
        break;
      case SemanticsMode::W2A2:
      case SemanticsMode::W2A1:
        witness = dominators(g_, targets, q.coalition, opts_);
        break;
      default:
        throw InternalError("unhandled semantics mode");
    }

    NodeSet agree = g_.all_outcomes();
    switch (mode_) {
      case SemanticsMode::W1A1:
      case SemanticsMode::W2A1: {
        NodeSet bad = g_.empty_set();
        for (int a : q.coalition)
          bad |= dominated(g_, targets, StakeholderSet::single(a), opts_);
        agree.subtract(bad);
        break;
      }
      case SemanticsMode::W1A2:
      case SemanticsMode::W2A2:
        agree.subtract(dominated(g_, targets, q.coalition, opts_));
        break;
      default:
        throw InternalError("unhandled semantics mode");
    }

    psi1 &= witness;
    psi1 &= agree;
    return psi1;
  }

  const PreferenceGraph& g_;
  SemanticsMode mode_;
  EngineOptions opts_;
};

}  // namespace

NodeSet dominators(const PreferenceGraph& g, const NodeSet& targets,
                   const StakeholderSet& who, const EngineOptions& opts) {
  return reach(g, targets, who, EdgeDir::Forward, opts);
}

NodeSet dominated(const PreferenceGraph& g, const NodeSet& targets,
                  const StakeholderSet& who, const EngineOptions& opts) {
  return reach(g, targets, who, EdgeDir::Reverse, opts);
}

NodeSet eval_direct(const Query& q, const PreferenceGraph& g,
                    SemanticsMode mode, const EngineOptions& opts) {
  return DirectEvaluator(g, mode, opts).eval(q).without_bottom();
}

}  // namespace prefq
