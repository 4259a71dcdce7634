// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "prefq/graph.hpp"
#include "prefq/query.hpp"

namespace prefq {

struct EngineOptions {
  TraversalStats* trace = nullptr;
  Deadline deadline{};
};

// Nodes that improve on some target: reachable from a target along one or
// more edges, each of whose annotation intersects `who`. Targets count only
// when reached over at least one edge. Pass a singleton to require one
// stakeholder to endorse every step, or a larger coalition to let members
// chain steps together.
NodeSet dominators(const PreferenceGraph& g, const NodeSet& targets,
                   const StakeholderSet& who, const EngineOptions& opts = {});

// Nodes some target improves on: the mirror image of dominators, following
// edges backwards.
NodeSet dominated(const PreferenceGraph& g, const NodeSet& targets,
                  const StakeholderSet& who, const EngineOptions& opts = {});

// Evaluates a query by computing dominator and dominated sets directly on
// the graph. Returns the answer as a canonically sorted set of outcomes; the
// synthetic worst node participates inside the evaluation but is never part
// of an answer. Throws SemanticError for coalitions outside the graph's
// stakeholders or atoms that do not resolve.
NodeSet eval_direct(const Query& q, const PreferenceGraph& g, SemanticsMode mode,
                    const EngineOptions& opts = {});

}  // namespace prefq
