// SPDX-License-Identifier: Apache-2.0
#include "prefq/gen.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_set>

namespace prefq {

namespace {

constexpr int kMaxAttemptsPerSlot = 50;

std::string var_name(int i) {
  if (i < 26) return std::string(1, static_cast<char>('a' + i));
  return "v" + std::to_string(i);
}

VariableSchema binary_schema(int n_variables) {
  std::vector<Variable> vars;
  vars.reserve(static_cast<std::size_t>(n_variables));
  for (int i = 0; i < n_variables; ++i) {
    std::string name = var_name(i);
    vars.push_back({name, {name + "0", name + "1"}});
  }
  return VariableSchema(std::move(vars));
}

// White/grey/black DFS over outcome indices.
bool has_cycle(const std::vector<std::vector<int>>& adj) {
  int n = static_cast<int>(adj.size());
  std::vector<std::uint8_t> color(static_cast<std::size_t>(n), 0);
  std::vector<std::pair<int, std::size_t>> stack;
  for (int start = 0; start < n; ++start) {
    if (color[static_cast<std::size_t>(start)] != 0) continue;
    stack.emplace_back(start, 0);
    color[static_cast<std::size_t>(start)] = 1;
    while (!stack.empty()) {
      auto& [node, next] = stack.back();
      const auto& out = adj[static_cast<std::size_t>(node)];
      if (next == out.size()) {
        color[static_cast<std::size_t>(node)] = 2;
        stack.pop_back();
        continue;
      }
      int to = out[next++];
      std::uint8_t c = color[static_cast<std::size_t>(to)];
      if (c == 1) return true;
      if (c == 0) {
        color[static_cast<std::size_t>(to)] = 1;
        stack.emplace_back(to, 0);
      }
    }
  }
  return false;
}

class ProfileSampler {
 public:
  ProfileSampler(const ProfileGenConfig& cfg, const VariableSchema& schema)
      : cfg_(cfg), schema_(schema), rng_(cfg.seed) {}

  PreferenceStatement sample() {
    double r = rng_.unit();
    int cat = 3;
    double acc = 0;
    for (int i = 0; i < 3; ++i) {
      acc += cfg_.statement_mix[static_cast<std::size_t>(i)];
      if (r < acc) {
        cat = i;
        break;
      }
    }
    // Conditions and relative importance need a second variable.
    if (schema_.var_count() < 2 && (cat == 1 || cat == 2)) cat = 0;
    switch (cat) {
      case 0:
        return sample_intra({}, false);
      case 1: {
        int var, pref;
        draw_comparison(var, pref);
        int cond_var = other_var(var);
        int cond_val = static_cast<int>(rng_.below(2));
        IntraStatement s;
        s.condition = PartialAssignment({{cond_var, cond_val}});
        s.var = var;
        s.preferred = pref;
        s.dispreferred = 1 - pref;
        return PreferenceStatement::intra(schema_, std::move(s));
      }
      case 2:
        return sample_intra({}, true);
      default: {
        std::uint64_t n = schema_.outcome_count();
        std::uint64_t i = rng_.below(n);
        std::uint64_t j = rng_.below(n - 1);
        if (j >= i) ++j;
        DirectStatement s;
        s.better = outcome_from_index(schema_, i);
        s.worse = outcome_from_index(schema_, j);
        return PreferenceStatement::direct(schema_, std::move(s));
      }
    }
  }

 private:
  void draw_comparison(int& var, int& pref) {
    var = static_cast<int>(rng_.below(
        static_cast<std::uint64_t>(schema_.var_count())));
    pref = static_cast<int>(rng_.below(2));
  }

  int other_var(int var) {
    int k = static_cast<int>(rng_.below(
        static_cast<std::uint64_t>(schema_.var_count() - 1)));
    return k >= var ? k + 1 : k;
  }

  PreferenceStatement sample_intra(PartialAssignment condition,
                                   bool with_less_important) {
    int var, pref;
    draw_comparison(var, pref);
    IntraStatement s;
    s.condition = std::move(condition);
    s.var = var;
    s.preferred = pref;
    s.dispreferred = 1 - pref;
    if (with_less_important) {
      for (int v = 0; v < schema_.var_count(); ++v)
        if (v != var && rng_.chance(0.5)) s.less_important.push_back(v);
      if (s.less_important.empty()) s.less_important.push_back(other_var(var));
      std::sort(s.less_important.begin(), s.less_important.end());
    }
    return PreferenceStatement::intra(schema_, std::move(s));
  }

  const ProfileGenConfig& cfg_;
  const VariableSchema& schema_;
  Rng rng_;
};

}  // namespace

ProfileGenResult gen_profile(const ProfileGenConfig& cfg) {
  if (cfg.n_variables <= 0 || cfg.n_stakeholders <= 0)
    throw SemanticError("generator counts must be positive");
  if (cfg.statements_per_stakeholder < 0)
    throw SemanticError("statements per stakeholder must not be negative");
  double mix_sum = 0;
  for (double p : cfg.statement_mix) {
    if (p < 0) throw SemanticError("statement mix proportions must not be negative");
    mix_sum += p;
  }
  if (std::abs(mix_sum - 1.0) > 1e-9)
    throw SemanticError("statement mix proportions must sum to 1");

  VariableSchema schema = binary_schema(cfg.n_variables);
  std::uint64_t n_outcomes = schema.outcome_count();  // enforces the limit

  ProfileGenResult out;
  out.profile = PreferenceProfile(schema);
  ProfileSampler sampler(cfg, schema);

  for (int a = 1; a <= cfg.n_stakeholders; ++a) {
    out.profile.add_stakeholder(a);
    std::vector<PreferenceStatement> accepted;
    std::vector<std::vector<int>> adj(n_outcomes);
    for (int slot = 0; slot < cfg.statements_per_stakeholder; ++slot) {
      bool placed = false;
      for (int attempt = 0; attempt < kMaxAttemptsPerSlot && !placed;
           ++attempt) {
        PreferenceStatement cand = sampler.sample();
        if (std::find(accepted.begin(), accepted.end(), cand) !=
            accepted.end())
          continue;
        std::vector<InducedEdge> edges =
            induced_edges_of_statement(schema, cand);
        for (const InducedEdge& e : edges)
          adj[outcome_to_index(schema, e.worse)].push_back(
              static_cast<int>(outcome_to_index(schema, e.better)));
        if (has_cycle(adj)) {
          for (const InducedEdge& e : edges)
            adj[outcome_to_index(schema, e.worse)].pop_back();
          continue;
        }
        accepted.push_back(cand);
        out.profile.add_statement(a, std::move(cand));
        placed = true;
      }
      if (!placed) {
        out.warnings.push_back(
            "stakeholder " + std::to_string(a) + " kept " +
            std::to_string(accepted.size()) + " of " +
            std::to_string(cfg.statements_per_stakeholder) +
            " statements after " + std::to_string(kMaxAttemptsPerSlot) +
            " rejected candidates per slot");
        break;
      }
    }
  }
  return out;
}

PreferenceGraph gen_graph(const GraphGenConfig& cfg) {
  if (cfg.n_stakeholders <= 0 || cfg.n_outcomes <= 0 ||
      cfg.max_edges_per_stakeholder <= 0)
    throw SemanticError("generator counts must be positive");

  std::uint64_t n = static_cast<std::uint64_t>(cfg.n_outcomes);
  std::uint64_t total_pairs = n * n;
  std::uint64_t cap = std::min(
      static_cast<std::uint64_t>(cfg.max_edges_per_stakeholder), total_pairs);
  if (cap > kDefaultMaterializeLimit)
    throw CapacityError("edge cap exceeds the materialization limit");

  std::vector<Variable> vars(1);
  vars[0].name = "node";
  for (int i = 0; i < cfg.n_outcomes; ++i)
    vars[0].values.push_back("o" + std::to_string(i));
  VariableSchema schema(std::move(vars));

  Rng rng(cfg.seed);
  std::map<std::uint64_t, StakeholderSet> merged;  // (worse * n + better)
  std::vector<int> ids;
  for (int a = 1; a <= cfg.n_stakeholders; ++a) {
    ids.push_back(a);
    if (2 * cap >= total_pairs) {
      // Dense: shuffle the full pair list and keep a prefix.
      std::vector<std::uint64_t> codes(total_pairs);
      for (std::uint64_t c = 0; c < total_pairs; ++c) codes[c] = c;
      rng.shuffle(codes);
      for (std::uint64_t k = 0; k < cap; ++k)
        merged[codes[k]].insert(a);
    } else {
      std::unordered_set<std::uint64_t> seen;
      while (seen.size() < cap) {
        std::uint64_t code = rng.below(total_pairs);
        if (seen.insert(code).second) merged[code].insert(a);
      }
    }
  }

  std::vector<AnnotatedEdge> edges;
  edges.reserve(merged.size());
  for (auto& [code, who] : merged)
    edges.push_back({static_cast<NodeId>(code / n),
                     static_cast<NodeId>(code % n), std::move(who)});
  return PreferenceGraph::from_edges(std::move(schema),
                                     StakeholderSet(std::move(ids)), edges);
}

}  // namespace prefq
