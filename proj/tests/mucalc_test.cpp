// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdint>
#include <string>
#include <vector>

#include "prefq/dsl.hpp"
#include "prefq/gen.hpp"
#include "prefq/mucalc.hpp"
#include "test_util.hpp"

using namespace prefq;
using namespace prefq::test;

namespace {

// Independent evaluator for fixpoint-free bodies under an explicit value for
// the single variable. Used as the oracle below; deliberately avoids the
// engine's set-at-a-time tricks and asks the graph node by node.
bool oracle_holds(const MuFormula& f, std::int32_t id, NodeId n,
                  const NodeSet& var_value, const PreferenceGraph& g) {
  const MuNode& node = f.node(id);
  switch (node.op) {
    case MuOp::True:
      return true;
    case MuOp::False:
      return false;
    case MuOp::Prop:
      return g.node_satisfies(n, f.atom_of(id));
    case MuOp::And:
      return oracle_holds(f, node.lhs, n, var_value, g) &&
             oracle_holds(f, node.rhs, n, var_value, g);
    case MuOp::Or:
      return oracle_holds(f, node.lhs, n, var_value, g) ||
             oracle_holds(f, node.rhs, n, var_value, g);
    case MuOp::DiamFwd:
    case MuOp::DiamRev: {
      EdgeDir dir =
          node.op == MuOp::DiamFwd ? EdgeDir::Forward : EdgeDir::Reverse;
      for (NodeId m : g.successors(n, f.coalition_of(id), dir))
        if (oracle_holds(f, node.lhs, m, var_value, g)) return true;
      return false;
    }
    case MuOp::Var:
      return var_value.contains(n);
    default:
      throw std::runtime_error("oracle cannot handle this operator");
  }
}

NodeSet oracle_apply(const MuFormula& f, std::int32_t body, const NodeSet& s,
                     const PreferenceGraph& g) {
  NodeSet out = g.empty_set();
  g.full_universe().for_each([&](NodeId n) {
    if (oracle_holds(f, body, n, s, g)) out.insert(n);
  });
  return out;
}

NodeSet mask_to_set(const PreferenceGraph& g, std::uint64_t mask) {
  NodeSet s = g.empty_set();
  std::uint64_t n = g.outcome_count();
  for (std::uint64_t i = 0; i < n; ++i)
    if (mask & (std::uint64_t{1} << i)) s.insert(static_cast<NodeId>(i));
  if (mask & (std::uint64_t{1} << n)) s.insert(kBottom);
  return s;
}

// Least fixpoint by brute force: intersect every subset closed under one
// application of the body.
NodeSet oracle_lfp(const MuFormula& f, std::int32_t body,
                   const PreferenceGraph& g) {
  std::uint64_t universe = g.outcome_count() + 1;
  REQUIRE(universe <= 16);
  NodeSet acc = g.full_universe();
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << universe); ++mask) {
    NodeSet s = mask_to_set(g, mask);
    if (oracle_apply(f, body, s, g).subset_of(s)) acc &= s;
  }
  return acc;
}

// Random monotone single-binder body over the abstract one-variable schema
// of a generated graph: props, the bound variable, conjunction, disjunction
// and both modalities. No negation, so monotonicity holds by construction.
std::int32_t random_body(MuFormula& f, const PreferenceGraph& g, Rng& rng,
                         int depth) {
  int pick = static_cast<int>(rng.below(depth <= 0 ? 4 : 8));
  const Variable& v = g.schema().var(0);
  switch (pick) {
    case 0:
      return f.add_true();
    case 1:
      return f.add_false();
    case 2:
      return f.add_prop(PropAtom{v.name, rng.pick(v.values)});
    case 3:
      return f.add_var("Z");
    case 4:
      return f.add_and(random_body(f, g, rng, depth - 1),
                       random_body(f, g, rng, depth - 1));
    case 5:
      return f.add_or(random_body(f, g, rng, depth - 1),
                      random_body(f, g, rng, depth - 1));
    default: {
      std::vector<int> ids;
      for (int a : g.stakeholders())
        if (rng.chance(0.5)) ids.push_back(a);
      if (ids.empty()) ids.push_back(g.stakeholders().ids()[0]);
      return f.add_diamond(StakeholderSet(ids), pick == 6,
                           random_body(f, g, rng, depth - 1));
    }
  }
}

PreferenceGraph small_graph(std::uint64_t seed, int outcomes, int edges) {
  GraphGenConfig cfg;
  cfg.seed = seed;
  cfg.n_stakeholders = 3;
  cfg.n_outcomes = outcomes;
  cfg.max_edges_per_stakeholder = edges;
  return gen_graph(cfg);
}

}  // namespace

TEST_CASE("builders reject empty coalitions") {
  MuFormula f;
  CHECK_THROWS_AS(f.add_diamond(StakeholderSet{}, false, f.add_true()),
                  SemanticError);
}

TEST_CASE("validation accepts the reachability shapes") {
  CHECK(validate_af(parse_formula("mu Z . (<{1}>r (E=code) | <{1}>r Z)"))
            .empty());
  CHECK(validate_af(parse_formula("~(mu Z . (<{1}> tt | <{1}> Z))")).empty());
  CHECK(validate_af(parse_formula(
                        "tt & mu Z0 . (<{1,2}>r tt | <{1,2}>r Z0) & "
                        "~(mu Z1 . (<{1,2}> tt | <{1,2}> Z1))"))
            .empty());
}

TEST_CASE("validation rejects broken formulas") {
  MuFormula open_var;
  open_var.set_root(open_var.add_var("Y"));
  CHECK_FALSE(validate_af(open_var).empty());
  CHECK_THROWS_AS(open_var.ensure_valid(), SemanticError);

  // Negation must only wrap closed subformulas.
  MuFormula neg;
  neg.set_root(neg.add_mu("Z", neg.add_not(neg.add_var("Z"))));
  CHECK_FALSE(validate_af(neg).empty());

  MuFormula rootless;
  rootless.add_true();
  CHECK_FALSE(validate_af(rootless).empty());
}

TEST_CASE("negation of an open subformula is diagnosed, closed is fine") {
  // ~Z directly under the binder: invalid.
  MuFormula bad;
  std::int32_t z = bad.add_var("Z");
  bad.set_root(bad.add_mu("Z", bad.add_or(bad.add_not(z), bad.add_true())));
  CHECK_FALSE(validate_af(bad).empty());

  // A closed fixpoint under negation inside another fixpoint: valid, still
  // alternation free.
  MuFormula ok = parse_formula(
      "mu Z . (<{1}>r Z | ~(mu Y . (<{2}> Y | E=code)))");
  CHECK(validate_af(ok).empty());
}

TEST_CASE("binder resolution and closedness tables") {
  MuFormula f = parse_formula("mu Z . (<{1}>r (mu Y . (<{2}>r Y | Z)) | Z)");
  f.ensure_valid();
  // Inner Y binds to the inner binder, both Z occurrences to the outer one.
  int vars_seen = 0;
  for (std::int32_t id = 0; id < f.node_count(); ++id) {
    if (f.node(id).op != MuOp::Var) continue;
    ++vars_seen;
    std::int32_t b = f.binder_of(id);
    CHECK(f.node(b).op == MuOp::Mu);
    CHECK(f.name_of(b) == f.name_of(id));
  }
  CHECK(vars_seen == 3);
  CHECK(f.is_closed(f.root()));
}

TEST_CASE("print parse round-trip on pinned strings") {
  for (const char* text : {
           "tt",
           "ff",
           "E=code",
           "p",
           "~tt",
           "tt & ff | tt",
           "tt & (ff | tt)",
           "<{1,2}> tt",
           "<{3}>r (E=noCode)",
           "mu Z . (<{1}>r (E=code) | <{1}>r Z)",
           "p & (mu Z0 . (<{1}>r q | <{1}>r Z0) & ~(mu Z1 . (<{1}> q | <{1}> Z1)))",
       }) {
    CAPTURE(text);
    CHECK(print_formula(parse_formula(text)) == text);
  }
}

TEST_CASE("parser rejects malformed formulas") {
  CHECK_THROWS_AS(parse_formula(""), ParseError);
  CHECK_THROWS_AS(parse_formula("mu Z Z"), ParseError);
  CHECK_THROWS_AS(parse_formula("<{}> tt"), ParseError);
  CHECK_THROWS_AS(parse_formula("<{0}> tt"), ParseError);
  CHECK_THROWS_AS(parse_formula("(tt"), ParseError);
  CHECK_THROWS_AS(parse_formula("tt |"), ParseError);
  CHECK_THROWS_AS(parse_formula("mu . tt"), ParseError);
}

TEST_CASE("round-trip on random formulas") {
  PreferenceGraph g = small_graph(5, 5, 8);
  Rng rng(99);
  for (int i = 0; i < 200; ++i) {
    MuFormula f;
    f.set_root(f.add_mu("Z", random_body(f, g, rng, 3)));
    REQUIRE(validate_af(f).empty());
    std::string text = print_formula(f);
    MuFormula back = parse_formula(text);
    CHECK(structurally_equal(f, back));
    CHECK(print_formula(back) == text);
  }
}

TEST_CASE("counts") {
  MuFormula f = parse_formula(
      "mu Z0 . (<{1}>r tt | <{1}>r Z0) & ~(mu Z1 . (<{1}> tt | <{1}> Z1))");
  CHECK(f.binder_count() == 2);
  CHECK(f.modal_count() == 4);
}

TEST_CASE("global evaluation of the hand-checked fixpoint") {
  PreferenceGraph g = fixture_graph();
  MuFormula f = parse_formula("mu Z . (<{1}>r (E=code) | <{1}>r Z)");
  GlobalEvalStats stats;
  NodeSet result = eval_global(f, g, {}, &stats);
  CHECK(names(g, result) ==
        names(g, nset(g, {"code,simple,noFix", "code,complex,noFix"})));
  CHECK(stats.fixpoints_evaluated == 1);
  CHECK(stats.max_iterations <= 3);
  CHECK(stats.total_iterations >= 1);
}

TEST_CASE("global evaluation base cases") {
  PreferenceGraph g = fixture_graph();
  NodeSet top = eval_global(parse_formula("tt"), g);
  CHECK(top.count() == 9);
  CHECK(top.contains_bottom());

  CHECK(eval_global(parse_formula("ff"), g).empty());
  CHECK(eval_global(parse_formula("<{1}> ff"), g).empty());

  // No label holds at the worst node.
  NodeSet code = eval_global(parse_formula("E=code"), g);
  CHECK_FALSE(code.contains_bottom());
  CHECK(code.count() == 4);

  // Negation complements within the outcomes.
  NodeSet not_code = eval_global(parse_formula("~(E=code)"), g);
  CHECK_FALSE(not_code.contains_bottom());
  CHECK((code | not_code) == g.all_outcomes());
}

TEST_CASE("modalities see the worst node's edges") {
  PreferenceGraph g = fixture_graph();

  // Every outcome has an incoming edge from the worst node, the worst node
  // has none.
  NodeSet has_pred = eval_global(parse_formula("<{2}>r tt"), g);
  CHECK(has_pred == g.all_outcomes());

  // The worst node steps forward to every outcome.
  NodeSet sees_noCode = eval_global(parse_formula("<{1}> (E=noCode)"), g);
  CHECK(sees_noCode.contains_bottom());

  NodeSet can_step = eval_global(parse_formula("<{1}> tt"), g);
  CHECK(can_step.contains_bottom());
  CHECK_FALSE(can_step.contains(nid(g, "code,simple,noFix")));
  CHECK_FALSE(can_step.contains(nid(g, "code,complex,noFix")));
  CHECK(can_step.count() == 7);
}

TEST_CASE("global evaluation matches the brute-force least fixpoint") {
  for (std::uint64_t seed : {1u, 2u, 3u, 4u}) {
    PreferenceGraph g = small_graph(seed, 5, 8);
    Rng rng(seed * 31 + 7);
    for (int rep = 0; rep < 25; ++rep) {
      MuFormula f;
      std::int32_t body = random_body(f, g, rng, 3);
      f.set_root(f.add_mu("Z", body));
      REQUIRE(validate_af(f).empty());

      NodeSet fast = eval_global(f, g);
      NodeSet slow = oracle_lfp(f, body, g);
      CAPTURE(print_formula(f));
      CHECK(fast == slow);
      // A fixpoint is stable under one more application.
      CHECK(oracle_apply(f, body, fast, g) == fast);
    }
  }
}

TEST_CASE("fixpoint iteration stays within the universe bound") {
  for (std::uint64_t seed : {10u, 11u, 12u}) {
    PreferenceGraph g = small_graph(seed, 9, 20);
    Rng rng(seed);
    for (int rep = 0; rep < 10; ++rep) {
      MuFormula f;
      f.set_root(f.add_mu("Z", random_body(f, g, rng, 3)));
      GlobalEvalStats stats;
      eval_global(f, g, {}, &stats);
      CHECK(stats.max_iterations <= g.outcome_count() + 2);
    }
  }
}

TEST_CASE("local membership matches global on the fixture") {
  PreferenceGraph g = fixture_graph();
  for (const char* text : {
           "mu Z . (<{1}>r (E=code) | <{1}>r Z)",
           "mu Z . (<{1,2}>r (E=noCode) | <{1,2}>r Z)",
           "~(mu Z . (<{2}> (E=noCode) | <{2}> Z))",
           "E=code & ~(mu Z . (<{1}> tt | <{1}> Z))",
           "tt & mu Z0 . (<{1,2}>r tt | <{1,2}>r Z0) & "
           "~(mu Z1 . (<{1,2}> tt | <{1,2}> Z1))",
       }) {
    CAPTURE(text);
    MuFormula f = parse_formula(text);
    NodeSet global = eval_global(f, g);
    LocalEvaluator shared(f, g);
    g.full_universe().for_each([&](NodeId n) {
      CHECK(shared.check(n) == global.contains(n));
      CHECK(eval_local(f, g, n) == global.contains(n));
    });
  }
}

TEST_CASE("local evaluation replays after proving an assumed-false goal") {
  // Node 1 re-enters itself through the cycle with node 0 before its truth
  // arrives through node 0's side branch, forcing an inconsistent first run.
  PreferenceGraph g = parse_graph_text(
      "graph 3 3\n"
      "0 -> 1 : {1}\n"
      "1 -> 0 : {1}\n"
      "0 -> 2 : {3}\n"
      "1 -> 2 : {2}\n");
  MuFormula f =
      parse_formula("mu Z . (node=o2 | (<{1}> Z & <{2}> Z) | <{3}> Z)");
  NodeSet global = eval_global(f, g);
  CHECK(global == g.full_universe());

  for (NodeId n : {NodeId{1}, NodeId{0}, NodeId{2}, kBottom}) {
    CAPTURE(n);
    CHECK(eval_local(f, g, n) == global.contains(n));
  }
  // Shared evaluator, worst-case query order.
  LocalEvaluator shared(f, g);
  CHECK(shared.check(1));
  CHECK(shared.check(0));
  CHECK(shared.check(2));
}

TEST_CASE("local matches global on random conjunctive formulas over cycles") {
  for (std::uint64_t seed : {21u, 22u, 23u, 24u, 25u}) {
    PreferenceGraph g = small_graph(seed, 6, 10);
    Rng rng(seed * 1009);
    for (int rep = 0; rep < 20; ++rep) {
      MuFormula f;
      f.set_root(f.add_mu("Z", random_body(f, g, rng, 3)));
      NodeSet global = eval_global(f, g);
      LocalEvaluator local(f, g);
      CAPTURE(print_formula(f));
      g.full_universe().for_each(
          [&](NodeId n) { CHECK(local.check(n) == global.contains(n)); });
    }
  }
}

TEST_CASE("monotone lower bound: one unfolding is contained in the fixpoint") {
  PreferenceGraph g = fixture_graph();
  // Substituting ff for the variable gives the first iterate.
  NodeSet once = eval_global(parse_formula("<{1}>r (E=code) | <{1}>r ff"), g);
  NodeSet lfp = eval_global(parse_formula("mu Z . (<{1}>r (E=code) | <{1}>r Z)"), g);
  CHECK(once.subset_of(lfp));
}

TEST_CASE("the local engine requires closed fixpoint subformulas") {
  PreferenceGraph g = fixture_graph();
  MuFormula f = parse_formula(
      "mu Z . (<{1}>r (mu Y . (<{1}>r Z | <{1}>r Y)) | <{1}>r Z)");
  REQUIRE(validate_af(f).empty());
  CHECK_NOTHROW(eval_global(f, g));
  CHECK_THROWS_AS(LocalEvaluator(f, g), SemanticError);
}

TEST_CASE("unknown stakeholders in modalities are rejected by both engines") {
  PreferenceGraph g = fixture_graph();
  MuFormula f = parse_formula("<{9}> tt");
  CHECK_THROWS_AS(eval_global(f, g), SemanticError);
  CHECK_THROWS_AS(LocalEvaluator(f, g), SemanticError);
}

TEST_CASE("structural equality distinguishes formulas") {
  MuFormula a = parse_formula("mu Z . (<{1}>r tt | <{1}>r Z)");
  MuFormula b = parse_formula("mu Z . (<{1}>r tt | <{1}>r Z)");
  MuFormula c = parse_formula("mu Z . (<{2}>r tt | <{2}>r Z)");
  MuFormula d = parse_formula("mu Z . (<{1}> tt | <{1}> Z)");
  CHECK(structurally_equal(a, b));
  CHECK_FALSE(structurally_equal(a, c));
  CHECK_FALSE(structurally_equal(a, d));
}
