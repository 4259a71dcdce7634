// SPDX-License-Identifier: Apache-2.0
#include "prefq/graph.hpp"

#include <algorithm>
#include <string>

namespace prefq {

namespace {

// Canonical neighbour order: outcomes ascending, worst node last.
void sort_nodes(std::vector<NodeId>& nodes) {
  std::sort(nodes.begin(), nodes.end(), [](NodeId a, NodeId b) {
    if (a == kBottom) return false;
    if (b == kBottom) return true;
    return a < b;
  });
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
}

std::vector<std::uint64_t> compute_strides(const VariableSchema& schema) {
  std::vector<std::uint64_t> stride(
      static_cast<std::size_t>(schema.var_count()), 1);
  for (int i = schema.var_count() - 2; i >= 0; --i)
    stride[static_cast<std::size_t>(i)] =
        stride[static_cast<std::size_t>(i + 1)] *
        schema.var(i + 1).values.size();
  return stride;
}

}  // namespace

std::vector<InducedEdge> induced_edges_of_statement(
    const VariableSchema& schema, const PreferenceStatement& s,
    std::uint64_t limit) {
  std::vector<InducedEdge> out;
  if (s.kind() == PreferenceStatement::Kind::Direct) {
    out.push_back({s.direct().worse, s.direct().better});
    return out;
  }
  const IntraStatement& st = s.intra();

  // Variables not compared, conditioned or less important stay equal on both
  // endpoints; enumerate their assignments as the frame of the edge family.
  std::vector<int> frame;
  for (int v = 0; v < schema.var_count(); ++v) {
    if (v == st.var) continue;
    if (st.condition.binds(v)) continue;
    if (std::binary_search(st.less_important.begin(), st.less_important.end(),
                           v))
      continue;
    frame.push_back(v);
  }

  std::uint64_t n_frame = 1, n_y = 1;
  for (int v : frame) {
    std::uint64_t d = schema.var(v).values.size();
    if (n_frame > limit / d) throw CapacityError("statement induces too many edges");
    n_frame *= d;
  }
  for (int v : st.less_important) {
    std::uint64_t d = schema.var(v).values.size();
    if (n_y > limit / d) throw CapacityError("statement induces too many edges");
    n_y *= d;
  }
  // n_frame * n_y * n_y pairs in total.
  std::uint64_t total = n_frame;
  for (int rep = 0; rep < 2; ++rep) {
    if (total > limit / n_y)
      throw CapacityError("statement induces too many edges");
    total *= n_y;
  }

  Outcome base(static_cast<std::size_t>(schema.var_count()), 0);
  for (const auto& [cv, cval] : st.condition.bindings())
    base[static_cast<std::size_t>(cv)] = cval;

  auto enumerate = [&](const std::vector<int>& vars, std::uint64_t total,
                       Outcome& o, std::uint64_t t) {
    for (auto it = vars.rbegin(); it != vars.rend(); ++it) {
      std::uint64_t d = schema.var(*it).values.size();
      o[static_cast<std::size_t>(*it)] = static_cast<int>(t % d);
      t /= d;
    }
    (void)total;
  };

  out.reserve(static_cast<std::size_t>(n_frame * n_y * n_y));
  Outcome worse = base, better = base;
  for (std::uint64_t f = 0; f < n_frame; ++f) {
    enumerate(frame, n_frame, worse, f);
    enumerate(frame, n_frame, better, f);
    worse[static_cast<std::size_t>(st.var)] = st.dispreferred;
    better[static_cast<std::size_t>(st.var)] = st.preferred;
    for (std::uint64_t yw = 0; yw < n_y; ++yw) {
      enumerate(st.less_important, n_y, worse, yw);
      for (std::uint64_t yb = 0; yb < n_y; ++yb) {
        enumerate(st.less_important, n_y, better, yb);
        out.push_back({worse, better});
      }
    }
  }
  return out;
}

void PreferenceGraph::compile_profile(const PreferenceProfile& profile) {
  for (const auto& [id, statements] : profile.statements()) {
    std::vector<CompiledStmt> compiled;
    compiled.reserve(statements.size());
    for (const PreferenceStatement& s : statements) {
      CompiledStmt c;
      if (s.kind() == PreferenceStatement::Kind::Direct) {
        c.is_direct = true;
        c.direct.worse = static_cast<NodeId>(
            outcome_to_index(schema_, s.direct().worse));
        c.direct.better = static_cast<NodeId>(
            outcome_to_index(schema_, s.direct().better));
      } else {
        c.intra.var = s.intra().var;
        c.intra.preferred = s.intra().preferred;
        c.intra.dispreferred = s.intra().dispreferred;
        c.intra.cond = s.intra().condition.bindings();
        c.intra.yvars = s.intra().less_important;
      }
      compiled.push_back(std::move(c));
    }
    compiled_.emplace_back(id, std::move(compiled));
  }
}

PreferenceGraph PreferenceGraph::from_profile(PreferenceProfile profile,
                                              std::uint64_t limit) {
  PreferenceGraph g;
  g.schema_ = profile.schema();
  g.stakeholders_ = profile.stakeholders();
  if (g.stakeholders_.empty())
    throw SemanticError("profile declares no stakeholders");
  g.n_outcomes_ = g.schema_.outcome_count(limit);
  g.stride_ = compute_strides(g.schema_);
  for (const Variable& v : g.schema_.vars())
    g.domain_size_.push_back(static_cast<int>(v.values.size()));
  g.lazy_ = true;
  g.compile_profile(profile);
  return g;
}

PreferenceGraph PreferenceGraph::from_edges(
    VariableSchema schema, StakeholderSet stakeholders,
    const std::vector<AnnotatedEdge>& edges) {
  PreferenceGraph g;
  g.schema_ = std::move(schema);
  g.stakeholders_ = std::move(stakeholders);
  if (g.stakeholders_.empty())
    throw SemanticError("graph declares no stakeholders");
  g.n_outcomes_ = g.schema_.outcome_count();
  g.stride_ = compute_strides(g.schema_);
  for (const Variable& v : g.schema_.vars())
    g.domain_size_.push_back(static_cast<int>(v.values.size()));
  g.lazy_ = false;

  std::map<std::pair<NodeId, NodeId>, StakeholderSet> merged;
  for (const AnnotatedEdge& e : edges) {
    auto in_range = [&](NodeId n) {
      return n >= 0 && static_cast<std::uint64_t>(n) < g.n_outcomes_;
    };
    if (!in_range(e.worse) || !in_range(e.better))
      throw SemanticError("edge endpoint out of range (the worst node is implicit)");
    if (e.who.empty()) throw SemanticError("edge with empty annotation");
    if (!e.who.subset_of(g.stakeholders_))
      throw SemanticError("edge annotated with unknown stakeholder");
    merged[{e.worse, e.better}].merge(e.who);
  }

  g.fwd_.resize(static_cast<std::size_t>(g.n_outcomes_));
  g.rev_.resize(static_cast<std::size_t>(g.n_outcomes_));
  for (const auto& [pair, who] : merged) {
    g.fwd_[static_cast<std::size_t>(pair.first)].emplace_back(pair.second, who);
    g.rev_[static_cast<std::size_t>(pair.second)].emplace_back(pair.first, who);
  }
  return g;
}

int PreferenceGraph::outcome_value(NodeId node, int var) const {
  return static_cast<int>(
      (static_cast<std::uint64_t>(node) / stride_[static_cast<std::size_t>(var)]) %
      static_cast<std::uint64_t>(domain_size_[static_cast<std::size_t>(var)]));
}

Outcome PreferenceGraph::outcome_of(NodeId node) const {
  if (node == kBottom || node < 0 ||
      static_cast<std::uint64_t>(node) >= n_outcomes_)
    throw InternalError("not an outcome node");
  return outcome_from_index(schema_, static_cast<std::uint64_t>(node));
}

std::string PreferenceGraph::node_to_string(NodeId node) const {
  if (node == kBottom) return "_|_";
  return outcome_to_string(schema_, outcome_of(node));
}

void PreferenceGraph::append_intra_neighbours(NodeId node,
                                              const CompiledIntra& s,
                                              EdgeDir dir,
                                              std::vector<NodeId>& out) const {
  int here = dir == EdgeDir::Forward ? s.dispreferred : s.preferred;
  int there = dir == EdgeDir::Forward ? s.preferred : s.dispreferred;
  if (outcome_value(node, s.var) != here) return;
  for (const auto& [cv, cval] : s.cond)
    if (outcome_value(node, cv) != cval) return;

  NodeId base = node + (static_cast<NodeId>(there) - here) *
                           static_cast<NodeId>(stride_[static_cast<std::size_t>(s.var)]);
  if (s.yvars.empty()) {
    out.push_back(base);
    return;
  }
  // Zero the less important variables, then run an odometer over their joint
  // assignments.
  for (int y : s.yvars)
    base -= static_cast<NodeId>(outcome_value(node, y)) *
            static_cast<NodeId>(stride_[static_cast<std::size_t>(y)]);
  std::uint64_t total = 1;
  for (int y : s.yvars)
    total *= static_cast<std::uint64_t>(domain_size_[static_cast<std::size_t>(y)]);
  for (std::uint64_t t = 0; t < total; ++t) {
    NodeId n = base;
    std::uint64_t rest = t;
    for (auto it = s.yvars.rbegin(); it != s.yvars.rend(); ++it) {
      std::uint64_t d =
          static_cast<std::uint64_t>(domain_size_[static_cast<std::size_t>(*it)]);
      n += static_cast<NodeId>(rest % d) *
           static_cast<NodeId>(stride_[static_cast<std::size_t>(*it)]);
      rest /= d;
    }
    out.push_back(n);
  }
}

void PreferenceGraph::lazy_neighbours(NodeId node,
                                      const StakeholderSet& coalition,
                                      EdgeDir dir,
                                      std::vector<NodeId>& out) const {
  for (const auto& [id, statements] : compiled_) {
    if (!coalition.contains(id)) continue;
    for (const CompiledStmt& s : statements) {
      if (s.is_direct) {
        if (dir == EdgeDir::Forward && s.direct.worse == node)
          out.push_back(s.direct.better);
        else if (dir == EdgeDir::Reverse && s.direct.better == node)
          out.push_back(s.direct.worse);
      } else {
        append_intra_neighbours(node, s.intra, dir, out);
      }
    }
  }
}

std::vector<NodeId> PreferenceGraph::successors(NodeId node,
                                                const StakeholderSet& coalition,
                                                EdgeDir dir,
                                                TraversalStats* stats) const {
  if (stats) stats->mark(node);
  std::vector<NodeId> out;
  if (node == kBottom) {
    if (dir == EdgeDir::Reverse || !coalition.intersects(stakeholders_))
      return out;
    out.reserve(static_cast<std::size_t>(n_outcomes_));
    for (std::uint64_t i = 0; i < n_outcomes_; ++i)
      out.push_back(static_cast<NodeId>(i));
    return out;
  }
  if (node < 0 || static_cast<std::uint64_t>(node) >= n_outcomes_)
    throw InternalError("node id out of range");

  if (lazy_) {
    lazy_neighbours(node, coalition, dir, out);
  } else {
    const auto& adj = (dir == EdgeDir::Forward ? fwd_ : rev_)[
        static_cast<std::size_t>(node)];
    for (const auto& [n, who] : adj)
      if (who.intersects(coalition)) out.push_back(n);
  }
  sort_nodes(out);
  if (dir == EdgeDir::Reverse && coalition.intersects(stakeholders_))
    out.push_back(kBottom);
  return out;
}

NodeSet PreferenceGraph::prop_nodes(const PropAtom& atom,
                                    TraversalStats* stats) const {
  auto [var, val] = resolve_atom(atom);
  NodeSet s(n_outcomes_);
  for (std::uint64_t i = 0; i < n_outcomes_; ++i) {
    NodeId n = static_cast<NodeId>(i);
    if (stats) stats->mark(n);
    if (outcome_value(n, var) == val) s.insert(n);
  }
  return s;
}

bool PreferenceGraph::node_satisfies(NodeId node, const PropAtom& atom,
                                     TraversalStats* stats) const {
  if (node == kBottom) return false;
  if (stats) stats->mark(node);
  auto [var, val] = resolve_atom(atom);
  return outcome_value(node, var) == val;
}

std::pair<int, int> PreferenceGraph::resolve_atom(const PropAtom& atom) const {
  if (atom.resolved()) {
    int var = schema_.var_index(atom.variable);
    if (var < 0)
      throw SemanticError("unknown variable '" + atom.variable + "'");
    int val = schema_.value_index(var, atom.value);
    if (val < 0)
      throw SemanticError("unknown value '" + atom.value + "' for variable '" +
                          atom.variable + "'");
    return {var, val};
  }
  auto hit = schema_.resolve_unique_value(atom.value);
  if (!hit) {
    // Distinguish "nowhere" from "in several domains" for the diagnostic.
    int occurrences = 0;
    for (int v = 0; v < schema_.var_count(); ++v)
      if (schema_.value_index(v, atom.value) >= 0) ++occurrences;
    if (occurrences == 0)
      throw SemanticError("unknown value '" + atom.value + "'");
    throw SemanticError("value '" + atom.value +
                        "' is ambiguous; qualify it as variable=value");
  }
  return *hit;
}

std::vector<AnnotatedEdge> PreferenceGraph::edges(std::uint64_t limit) const {
  std::map<std::pair<NodeId, NodeId>, StakeholderSet> merged;
  if (lazy_) {
    // Expand per node through successors() so the explicit graph is the
    // image of exactly the neighbourhood semantics; singleton coalitions
    // recover the per-stakeholder annotations.
    for (int id : stakeholders_) {
      StakeholderSet one = StakeholderSet::single(id);
      std::uint64_t edge_count = 0;
      for (std::uint64_t i = 0; i < n_outcomes_; ++i) {
        NodeId n = static_cast<NodeId>(i);
        for (NodeId m : successors(n, one, EdgeDir::Forward)) {
          merged[{n, m}].insert(id);
          if (++edge_count > limit)
            throw CapacityError("graph has too many edges to materialize");
        }
      }
    }
  } else {
    for (std::uint64_t i = 0; i < n_outcomes_; ++i)
      for (const auto& [m, who] : fwd_[static_cast<std::size_t>(i)])
        merged[{static_cast<NodeId>(i), m}] = who;
  }
  std::vector<AnnotatedEdge> out;
  out.reserve(merged.size());
  for (const auto& [pair, who] : merged)
    out.push_back({pair.first, pair.second, who});
  return out;
}

PreferenceGraph PreferenceGraph::materialize(std::uint64_t limit) const {
  if (!lazy_) return *this;
  return from_edges(schema_, stakeholders_, edges(limit));
}

}  // namespace prefq
