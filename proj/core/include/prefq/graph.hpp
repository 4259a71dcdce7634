// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "prefq/model.hpp"
#include "prefq/nodeset.hpp"

namespace prefq {

enum class EdgeDir { Forward, Reverse };

// Distinct nodes an evaluation looked at: expanded for successors or tested
// against a label. Used to compare how much of the graph each engine visits.
struct TraversalStats {
  std::unordered_set<NodeId> touched;
  void mark(NodeId n) { touched.insert(n); }
  std::size_t touched_count() const { return touched.size(); }
};

// Directed edge from the worse outcome to the better one, annotated with the
// stakeholders that endorse it.
struct AnnotatedEdge {
  NodeId worse = 0;
  NodeId better = 0;
  StakeholderSet who;

  friend bool operator==(const AnnotatedEdge&, const AnnotatedEdge&) = default;
};

// The pairs of outcomes one statement orders, worse first.
struct InducedEdge {
  Outcome worse;
  Outcome better;

  friend bool operator==(const InducedEdge&, const InducedEdge&) = default;
};

// Every ordered pair induced by a statement: the compared variable flips from
// dispreferred to preferred, conditioned variables stay fixed (both endpoints
// satisfy the condition), less important variables take every combination on
// each endpoint independently, and all remaining variables are equal.
// Throws CapacityError when the pair count exceeds the limit.
std::vector<InducedEdge> induced_edges_of_statement(
    const VariableSchema& schema, const PreferenceStatement& s,
    std::uint64_t limit = kDefaultMaterializeLimit);

// The preference graph induced by a profile: one node per outcome plus a
// synthetic worst node with an edge to every outcome endorsed by all
// stakeholders. No edge ever enters the worst node, and no label holds there.
//
// Profile-backed graphs answer neighbourhood queries straight from the
// statements without materializing anything; materialize() converts to an
// explicit adjacency representation. Both answer every query identically.
// Lazy queries are pure, so concurrent readers need no coordination.
class PreferenceGraph {
 public:
  static PreferenceGraph from_profile(
      PreferenceProfile profile,
      std::uint64_t limit = kDefaultMaterializeLimit);

  // Explicit graph over the given schema. Parallel edges merge into one edge
  // with the union annotation; edges to the worst node are implicit and must
  // not appear in the list.
  static PreferenceGraph from_edges(VariableSchema schema,
                                    StakeholderSet stakeholders,
                                    const std::vector<AnnotatedEdge>& edges);

  const VariableSchema& schema() const { return schema_; }
  const StakeholderSet& stakeholders() const { return stakeholders_; }
  std::uint64_t outcome_count() const { return n_outcomes_; }
  bool is_lazy() const { return lazy_; }

  // Neighbours of node along edges whose annotation intersects the coalition,
  // in canonical order (outcomes ascending, then the worst node). Forward
  // follows worse -> better; reverse returns the nodes with an edge into
  // node. The worst node's forward successors are all outcomes; its reverse
  // successors are none.
  std::vector<NodeId> successors(NodeId node, const StakeholderSet& coalition,
                                 EdgeDir dir,
                                 TraversalStats* stats = nullptr) const;

  // Set of outcomes whose value matches the atom; never contains the worst
  // node. Unresolved atoms resolve against this schema. Scans every outcome.
  NodeSet prop_nodes(const PropAtom& atom, TraversalStats* stats = nullptr) const;

  bool node_satisfies(NodeId node, const PropAtom& atom,
                      TraversalStats* stats = nullptr) const;

  // (variable index, value index) for an atom, resolving bare value names
  // uniquely across domains. Throws SemanticError for unknown or ambiguous
  // atoms.
  std::pair<int, int> resolve_atom(const PropAtom& atom) const;

  int outcome_value(NodeId node, int var) const;
  Outcome outcome_of(NodeId node) const;
  std::string node_to_string(NodeId node) const;  // "(code,simple,fix)" or "_|_"

  NodeSet empty_set() const { return NodeSet(n_outcomes_); }
  NodeSet all_outcomes() const { return NodeSet::all_outcomes(n_outcomes_); }
  NodeSet full_universe() const { return NodeSet::full_universe(n_outcomes_); }

  // Explicit copy of this graph; already-explicit graphs return themselves
  // unchanged. The merged outcome-to-outcome edge list (implicit worst-node
  // edges excluded) is available from edges() on any graph.
  PreferenceGraph materialize(
      std::uint64_t limit = kDefaultMaterializeLimit) const;
  std::vector<AnnotatedEdge> edges(
      std::uint64_t limit = kDefaultMaterializeLimit) const;

 private:
  PreferenceGraph() = default;

  struct CompiledIntra {
    int var = -1;
    int preferred = -1;
    int dispreferred = -1;
    std::vector<std::pair<int, int>> cond;  // (var, value)
    std::vector<int> yvars;
  };
  struct CompiledDirect {
    NodeId worse = 0;
    NodeId better = 0;
  };
  struct CompiledStmt {
    bool is_direct = false;
    CompiledIntra intra;
    CompiledDirect direct;
  };

  void compile_profile(const PreferenceProfile& profile);
  void lazy_neighbours(NodeId node, const StakeholderSet& coalition,
                       EdgeDir dir, std::vector<NodeId>& out) const;
  void append_intra_neighbours(NodeId node, const CompiledIntra& s, EdgeDir dir,
                               std::vector<NodeId>& out) const;

  VariableSchema schema_;
  StakeholderSet stakeholders_;
  std::uint64_t n_outcomes_ = 0;
  std::vector<std::uint64_t> stride_;
  std::vector<int> domain_size_;
  bool lazy_ = true;

  // lazy mode
  std::vector<std::pair<int, std::vector<CompiledStmt>>> compiled_;  // by id

  // explicit mode
  std::vector<std::vector<std::pair<NodeId, StakeholderSet>>> fwd_, rev_;
};

}  // namespace prefq
