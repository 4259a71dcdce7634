// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "prefq/graph.hpp"
#include "prefq/model.hpp"

namespace prefq {

// Both generators are pure functions of their config: the pseudo-random
// algorithm is pinned (see Rng), so the same config yields the same instance
// on every platform.

struct ProfileGenConfig {
  std::uint64_t seed = 0;
  int n_variables = 5;       // binary domains a=[a0,a1], b=[b0,b1], ...
  int n_stakeholders = 4;
  int statements_per_stakeholder = 4;
  // Proportions of unconditional intra-variable, conditional intra-variable,
  // relative-importance, direct statements. Must sum to 1.
  std::array<double, 4> statement_mix = {0.4, 0.3, 0.2, 0.1};
};

struct ProfileGenResult {
  PreferenceProfile profile;
  // One entry per stakeholder that exhausted its retry budget and kept fewer
  // statements than requested.
  std::vector<std::string> warnings;
};

// Samples statements per the mix, rejecting any candidate that would create a
// directed cycle in that stakeholder's own induced graph or duplicate one of
// its statements. Retries are bounded per slot; a stakeholder that runs out
// keeps what it has. Every stakeholder's individual graph is acyclic.
ProfileGenResult gen_profile(const ProfileGenConfig& cfg);

struct GraphGenConfig {
  std::uint64_t seed = 0;
  int n_stakeholders = 10;
  int n_outcomes = 100;
  int max_edges_per_stakeholder = 200;
};

// Arbitrary annotated graph over abstract outcomes o0..o{n-1} (one synthetic
// variable holds them, so atoms still resolve). Each stakeholder draws
// distinct ordered node pairs uniformly, exactly min(cap, n^2) of them;
// parallel edges merge. Cycles are allowed: these instances need not come
// from any consistent preference relation.
PreferenceGraph gen_graph(const GraphGenConfig& cfg);

}  // namespace prefq
