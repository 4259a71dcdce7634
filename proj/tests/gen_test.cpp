// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <set>

#include "prefq/direct.hpp"
#include "prefq/dsl.hpp"
#include "prefq/gen.hpp"
#include "test_util.hpp"

using namespace prefq;
using namespace prefq::test;

namespace {

// Cycle detection over one stakeholder's own edges, independent of the
// generator's internal bookkeeping.
bool stakeholder_graph_has_cycle(const PreferenceGraph& g, int a) {
  std::map<NodeId, std::vector<NodeId>> adj;
  for (const AnnotatedEdge& e : g.edges())
    if (e.who.contains(a)) adj[e.worse].push_back(e.better);

  std::map<NodeId, int> color;
  std::vector<std::pair<NodeId, std::size_t>> stack;
  for (const auto& [start, _] : adj) {
    if (color[start]) continue;
    stack.push_back({start, 0});
    color[start] = 1;
    while (!stack.empty()) {
      auto& [n, i] = stack.back();
      if (i < adj[n].size()) {
        NodeId m = adj[n][i++];
        if (color[m] == 1) return true;
        if (color[m] == 0) {
          color[m] = 1;
          stack.push_back({m, 0});
        }
      } else {
        color[n] = 2;
        stack.pop_back();
      }
    }
  }
  return false;
}

}  // namespace

TEST_CASE("profile generation is deterministic") {
  ProfileGenConfig cfg;
  cfg.seed = 42;
  cfg.n_variables = 5;
  cfg.n_stakeholders = 4;
  cfg.statements_per_stakeholder = 4;
  ProfileGenResult a = gen_profile(cfg);
  ProfileGenResult b = gen_profile(cfg);
  CHECK(print_profile(a.profile) == print_profile(b.profile));
  CHECK(a.warnings == b.warnings);

  cfg.seed = 43;
  CHECK(print_profile(gen_profile(cfg).profile) != print_profile(a.profile));
}

TEST_CASE("generated profiles have the requested shape") {
  ProfileGenConfig cfg;
  cfg.seed = 7;
  cfg.n_variables = 4;
  cfg.n_stakeholders = 3;
  cfg.statements_per_stakeholder = 5;
  ProfileGenResult res = gen_profile(cfg);
  const PreferenceProfile& p = res.profile;
  CHECK(p.schema().var_count() == 4);
  CHECK(p.stakeholders().size() == 3);
  for (const auto& [id, stmts] : p.statements()) {
    CHECK(id >= 1);
    CHECK(id <= 3);
    CHECK(stmts.size() <= 5);
    if (res.warnings.empty()) CHECK(stmts.size() == 5);
    // No stakeholder repeats a statement.
    for (std::size_t i = 0; i < stmts.size(); ++i)
      for (std::size_t j = i + 1; j < stmts.size(); ++j)
        CHECK_FALSE(stmts[i] == stmts[j]);
  }
}

TEST_CASE("each stakeholder's own induced graph is acyclic") {
  for (std::uint64_t seed : {1u, 2u, 3u, 4u, 5u}) {
    ProfileGenConfig cfg;
    cfg.seed = seed;
    cfg.n_variables = 4;
    cfg.n_stakeholders = 4;
    cfg.statements_per_stakeholder = 5;
    PreferenceGraph g =
        PreferenceGraph::from_profile(gen_profile(cfg).profile);
    for (int a : g.stakeholders()) {
      CAPTURE(seed);
      CAPTURE(a);
      CHECK_FALSE(stakeholder_graph_has_cycle(g, a));
    }
  }
}

TEST_CASE("an empty profile answers every preference query with everything") {
  ProfileGenConfig cfg;
  cfg.seed = 9;
  cfg.n_variables = 3;
  cfg.n_stakeholders = 2;
  cfg.statements_per_stakeholder = 0;
  PreferenceGraph g = PreferenceGraph::from_profile(gen_profile(cfg).profile);
  CHECK(g.edges().empty());
  StakeholderSet all = g.stakeholders();
  QueryPtr q = parse_query("P(tt, tt, all)", &g.schema(), &all);
  for (SemanticsMode mode : {SemanticsMode::Consensus, SemanticsMode::W1A2,
                             SemanticsMode::W1A1, SemanticsMode::W2A2,
                             SemanticsMode::W2A1}) {
    // Every outcome beats the worst node and nothing beats any outcome.
    CHECK(eval_direct(*q, g, mode) == g.all_outcomes());
  }
}

TEST_CASE("profile generator validates its configuration") {
  ProfileGenConfig cfg;
  cfg.n_variables = 0;
  CHECK_THROWS_AS(gen_profile(cfg), SemanticError);
  cfg = {};
  cfg.n_stakeholders = -1;
  CHECK_THROWS_AS(gen_profile(cfg), SemanticError);
  cfg = {};
  cfg.statements_per_stakeholder = -1;
  CHECK_THROWS_AS(gen_profile(cfg), SemanticError);
  cfg = {};
  cfg.statement_mix = {0.5, 0.5, 0.5, 0.5};
  CHECK_THROWS_AS(gen_profile(cfg), SemanticError);
  cfg = {};
  cfg.statement_mix = {1.2, -0.2, 0.0, 0.0};
  CHECK_THROWS_AS(gen_profile(cfg), SemanticError);
}

TEST_CASE("a cramped statement space produces warnings, not failures") {
  ProfileGenConfig cfg;
  cfg.seed = 3;
  cfg.n_variables = 1;
  cfg.n_stakeholders = 2;
  cfg.statements_per_stakeholder = 10;
  ProfileGenResult res = gen_profile(cfg);
  CHECK_FALSE(res.warnings.empty());
  PreferenceGraph g = PreferenceGraph::from_profile(res.profile);
  for (int a : g.stakeholders())
    CHECK_FALSE(stakeholder_graph_has_cycle(g, a));
}

TEST_CASE("graph generation is deterministic and exactly sized") {
  GraphGenConfig cfg;
  cfg.seed = 11;
  cfg.n_stakeholders = 3;
  cfg.n_outcomes = 5;
  cfg.max_edges_per_stakeholder = 7;
  PreferenceGraph a = gen_graph(cfg);
  PreferenceGraph b = gen_graph(cfg);
  CHECK(print_graph_text(a) == print_graph_text(b));

  // Each stakeholder endorses exactly min(cap, n^2) distinct ordered pairs.
  std::map<int, int> incidences;
  std::set<std::pair<NodeId, NodeId>> pairs;
  for (const AnnotatedEdge& e : a.edges()) {
    CHECK(e.worse >= 0);
    CHECK(e.worse < 5);
    CHECK(e.better >= 0);
    CHECK(e.better < 5);
    CHECK(pairs.insert({e.worse, e.better}).second);  // merged, no repeats
    for (int id : e.who) ++incidences[id];
  }
  CHECK(incidences[1] == 7);
  CHECK(incidences[2] == 7);
  CHECK(incidences[3] == 7);
}

TEST_CASE("a generous cap saturates to the full pair set") {
  GraphGenConfig cfg;
  cfg.seed = 2;
  cfg.n_stakeholders = 2;
  cfg.n_outcomes = 3;
  cfg.max_edges_per_stakeholder = 50;  // far above 3*3
  PreferenceGraph g = gen_graph(cfg);
  std::map<int, int> incidences;
  for (const AnnotatedEdge& e : g.edges())
    for (int id : e.who) ++incidences[id];
  CHECK(incidences[1] == 9);
  CHECK(incidences[2] == 9);
  CHECK(g.edges().size() == 9);  // both stakeholders cover every pair
}

TEST_CASE("graph generator validates its configuration") {
  GraphGenConfig cfg;
  cfg.n_outcomes = 0;
  CHECK_THROWS_AS(gen_graph(cfg), SemanticError);
  cfg = {};
  cfg.n_stakeholders = 0;
  CHECK_THROWS_AS(gen_graph(cfg), SemanticError);
  cfg = {};
  cfg.max_edges_per_stakeholder = -3;
  CHECK_THROWS_AS(gen_graph(cfg), SemanticError);
  cfg = {};
  cfg.n_outcomes = 2000;
  cfg.max_edges_per_stakeholder = 2000000;
  CHECK_THROWS_AS(gen_graph(cfg), CapacityError);
}

TEST_CASE("generated graphs work with every engine downstream") {
  GraphGenConfig cfg;
  cfg.seed = 19;
  cfg.n_stakeholders = 3;
  cfg.n_outcomes = 8;
  cfg.max_edges_per_stakeholder = 12;
  PreferenceGraph g = gen_graph(cfg);
  StakeholderSet all = g.stakeholders();
  CHECK(all == StakeholderSet({1, 2, 3}));
  QueryPtr q = parse_query("P(tt, tt, all)", &g.schema(), &all);
  NodeSet answer = eval_direct(*q, g, SemanticsMode::W2A2);
  CHECK_FALSE(answer.contains_bottom());
  CHECK(answer.count() <= g.outcome_count());
}
