// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include "prefq/graph.hpp"
#include "prefq/model.hpp"

namespace prefq {

// Profile files: a variables block followed by stakeholder blocks.
//
//   variables { E: code, noCode; A: simple, complex; F: fix, noFix; }
//   stakeholder 1 {
//     E=code > E=noCode;
//     if E=code: F=noFix > F=fix;
//     A=simple > A=complex over F;
//     outcome (E=noCode, A=simple, F=noFix) > (E=code, A=complex, F=noFix);
//   }
//
// 'if c:' guards a statement, 'over' lists the less important variables, and
// 'outcome (...) > (...)' orders two complete outcomes. '#' starts a line
// comment. parse_profile(print_profile(p)) reproduces p exactly.
PreferenceProfile parse_profile(const std::string& text);
std::string print_profile(const PreferenceProfile& profile);

// Explicit graph files: a header, then one edge per line with 0-based
// outcome indices. The worst node and its edges are implicit.
//
//   graph 2 3
//   0 -> 1 : {1}
//   2 -> 0 : {1,2}
//
// Stakeholder ids run 1..n_stakeholders. Repeated pairs merge their
// annotations. parse_graph_text(print_graph_text(g)) reproduces g.
PreferenceGraph parse_graph_text(const std::string& text);
std::string print_graph_text(const PreferenceGraph& graph);

}  // namespace prefq
