// SPDX-License-Identifier: Apache-2.0
//
// Cross-validates the three evaluation routes on random instances: the
// set-theoretic reachability engine is the reference, the two fixpoint
// engines must agree with it on every query, mode and node. Also checks the
// containment order between the four collaborative modes and the collapse of
// all five modes on singleton coalitions.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>
#include <vector>

#include "prefq/direct.hpp"
#include "prefq/gen.hpp"
#include "prefq/translate.hpp"
#include "test_util.hpp"

using namespace prefq;
using namespace prefq::test;

namespace {

const std::vector<SemanticsMode> kModes = {
    SemanticsMode::Consensus, SemanticsMode::W1A2, SemanticsMode::W1A1,
    SemanticsMode::W2A2, SemanticsMode::W2A1};

// `pref_free` restricts to boolean connectives, for the containment and
// collapse checks: a preference nested inside psi1 or psi2 changes meaning
// with the mode (and the agreement part is anti-monotone in the psi2
// targets), so those orderings only hold when the subqueries mean the same
// thing under every mode. Engine agreement needs no such restriction.
QueryPtr random_query(const PreferenceGraph& g, Rng& rng, int depth,
                      bool pref_free = false) {
  const VariableSchema& sch = g.schema();
  int cap = depth <= 0 ? 4 : (pref_free ? 7 : 10);
  int pick = static_cast<int>(rng.below(cap));
  switch (pick) {
    case 0:
      return Query::make_true();
    case 1:
      return Query::make_false();
    case 2:
    case 3: {
      int var = static_cast<int>(rng.below(sch.var_count()));
      const Variable& v = sch.var(var);
      return Query::make_prop(PropAtom{v.name, rng.pick(v.values)});
    }
    case 4:
      return Query::make_not(random_query(g, rng, depth - 1, pref_free));
    case 5:
      return Query::make_and(random_query(g, rng, depth - 1, pref_free),
                             random_query(g, rng, depth - 1, pref_free));
    case 6:
      return Query::make_or(random_query(g, rng, depth - 1, pref_free),
                            random_query(g, rng, depth - 1, pref_free));
    default: {
      std::vector<int> ids;
      for (int a : g.stakeholders())
        if (rng.chance(0.5)) ids.push_back(a);
      if (ids.empty()) ids.push_back(rng.pick(g.stakeholders().ids()));
      return Query::make_pref(random_query(g, rng, depth - 1),
                              random_query(g, rng, depth - 1),
                              StakeholderSet(ids));
    }
  }
}

NodeSet via_global(const Query& q, const PreferenceGraph& g,
                   SemanticsMode mode) {
  return eval_global(translate(q, mode).formula, g).without_bottom();
}

NodeSet via_local(const Query& q, const PreferenceGraph& g,
                  SemanticsMode mode) {
  Translation t = translate(q, mode);  // must outlive the evaluator
  LocalEvaluator local(t.formula, g);
  NodeSet out = g.empty_set();
  for (std::uint64_t n = 0; n < g.outcome_count(); ++n)
    if (local.check(static_cast<NodeId>(n))) out.insert(static_cast<NodeId>(n));
  return out;
}

void check_instance(const PreferenceGraph& g, Rng& rng, int queries_per) {
  for (int k = 0; k < queries_per; ++k) {
    QueryPtr q = random_query(g, rng, 2);
    CAPTURE(print_query(*q));
    for (SemanticsMode mode : kModes) {
      CAPTURE(to_string(mode));
      NodeSet reference = eval_direct(*q, g, mode);
      CHECK_FALSE(reference.contains_bottom());
      CHECK(names(g, via_global(*q, g, mode)) == names(g, reference));
      CHECK(names(g, via_local(*q, g, mode)) == names(g, reference));
    }
  }

  // Containment between the collaborative modes, on a preference query.
  QueryPtr psi1 = random_query(g, rng, 1, true);
  QueryPtr psi2 = random_query(g, rng, 1, true);
  std::vector<int> ids;
  for (int a : g.stakeholders())
    if (rng.chance(0.7)) ids.push_back(a);
  if (ids.empty()) ids.push_back(g.stakeholders().ids()[0]);
  QueryPtr pref = Query::make_pref(psi1, psi2, StakeholderSet(ids));
  CAPTURE(print_query(*pref));
  NodeSet w1a2 = eval_direct(*pref, g, SemanticsMode::W1A2);
  NodeSet w1a1 = eval_direct(*pref, g, SemanticsMode::W1A1);
  NodeSet w2a2 = eval_direct(*pref, g, SemanticsMode::W2A2);
  NodeSet w2a1 = eval_direct(*pref, g, SemanticsMode::W2A1);
  CHECK(w1a2.subset_of(w1a1));
  CHECK(w1a1.subset_of(w2a1));
  CHECK(w1a2.subset_of(w2a2));
  CHECK(w2a2.subset_of(w2a1));

  // On a singleton coalition all five modes agree.
  int lone = rng.pick(g.stakeholders().ids());
  QueryPtr single =
      Query::make_pref(psi1, psi2, StakeholderSet::single(lone));
  CAPTURE(print_query(*single));
  NodeSet base = eval_direct(*single, g, SemanticsMode::Consensus);
  for (SemanticsMode mode : kModes)
    CHECK(eval_direct(*single, g, mode) == base);
}

}  // namespace

TEST_CASE("engines agree on graphs induced by random profiles") {
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    ProfileGenConfig cfg;
    cfg.seed = seed;
    cfg.n_variables = 2 + static_cast<int>(seed % 4);
    cfg.n_stakeholders = 1 + static_cast<int>(seed % 4);
    cfg.statements_per_stakeholder = static_cast<int>(seed % 6);
    PreferenceGraph g =
        PreferenceGraph::from_profile(gen_profile(cfg).profile);
    CAPTURE(seed);
    Rng rng(seed * 7919);
    check_instance(g, rng, 6);
  }
}

TEST_CASE("engines agree on arbitrary cyclic graphs") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    GraphGenConfig cfg;
    cfg.seed = seed;
    cfg.n_stakeholders = 2 + static_cast<int>(seed % 3);
    cfg.n_outcomes = 4 + static_cast<int>(seed % 9);
    cfg.max_edges_per_stakeholder = 5 + static_cast<int>(seed % 26);
    PreferenceGraph g = gen_graph(cfg);
    CAPTURE(seed);
    Rng rng(seed * 104729);
    check_instance(g, rng, 5);
  }
}

TEST_CASE("engines agree on the fixture across handwritten queries") {
  PreferenceGraph g = fixture_graph();
  StakeholderSet all = g.stakeholders();
  for (const char* text : {
           "P(tt, E=noCode, {1,2})",
           "P(tt, tt, all)",
           "P(E=code, A=simple | A=complex, {2,3})",
           "P(P(tt, E=code, {1}), tt, {2}) | P(tt, ff, {3})",
           "!P(tt, noCode, {1,3}) & F=fix",
           "P(tt & !ff, !(E=code & A=simple), all)",
       }) {
    CAPTURE(text);
    QueryPtr q = parse_query(text, &g.schema(), &all);
    for (SemanticsMode mode : kModes) {
      CAPTURE(to_string(mode));
      NodeSet reference = eval_direct(*q, g, mode);
      CHECK(names(g, via_global(*q, g, mode)) == names(g, reference));
      CHECK(names(g, via_local(*q, g, mode)) == names(g, reference));
    }
  }
}

TEST_CASE("evaluation is deterministic") {
  GraphGenConfig cfg;
  cfg.seed = 5;
  cfg.n_stakeholders = 3;
  cfg.n_outcomes = 9;
  cfg.max_edges_per_stakeholder = 15;
  PreferenceGraph g = gen_graph(cfg);
  StakeholderSet all = g.stakeholders();
  QueryPtr q = parse_query("P(tt, node=o3 | node=o7, all)", &g.schema(), &all);
  for (SemanticsMode mode : kModes) {
    NodeSet first = eval_direct(*q, g, mode);
    CHECK(eval_direct(*q, g, mode) == first);
    CHECK(via_global(*q, g, mode) == first);
    CHECK(via_local(*q, g, mode) == first);
  }
}
