// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>
#include <string>
#include <vector>

#include "prefq/model.hpp"

namespace prefq {

// The five regimes for reading a preference query: consensus, or the four
// combinations of who must witness the improvement (some stakeholder alone,
// or the coalition chaining steps) with who must concede no deterioration
// (every stakeholder alone, or the coalition).
enum class SemanticsMode { Consensus, W1A2, W1A1, W2A2, W2A1 };

const char* to_string(SemanticsMode m);                 // "cs", "w1a2", ...
SemanticsMode semantics_from_string(std::string_view);  // throws ParseError

struct Query;
using QueryPtr = std::shared_ptr<const Query>;

// Query over outcomes: boolean combinations of value atoms plus the
// preference operator P(psi1, psi2, A), which selects the psi1-outcomes that
// improve on some psi2-outcome without being improved upon, read under the
// evaluation's semantics mode.
struct Query {
  enum class Kind { True, False, Prop, Not, And, Or, Pref };

  Kind kind = Kind::True;
  PropAtom prop;            // Prop
  QueryPtr lhs;             // Not(child), And/Or(left), Pref(psi1)
  QueryPtr rhs;             // And/Or(right), Pref(psi2)
  StakeholderSet coalition; // Pref, never empty

  static QueryPtr make_true();
  static QueryPtr make_false();
  static QueryPtr make_prop(PropAtom atom);
  static QueryPtr make_not(QueryPtr child);
  static QueryPtr make_and(QueryPtr l, QueryPtr r);
  static QueryPtr make_or(QueryPtr l, QueryPtr r);
  static QueryPtr make_pref(QueryPtr psi1, QueryPtr psi2, StakeholderSet a);
};

bool structurally_equal(const Query& a, const Query& b);

// Maximum depth of nested preference operators; 0 for preference-free
// queries.
int nesting_depth(const Query& q);

// Parses the query grammar:
//
//   expr  := term ('|' term)*
//   term  := factor ('&' factor)*
//   factor:= '!' factor | 'tt' | 'ff' | prop
//          | 'P' '(' expr ',' expr ',' coalition ')' | '(' expr ')'
//   prop  := IDENT '=' IDENT | IDENT
//   coalition := '{' INT (',' INT)* '}' | 'all'
//
// '#' starts a line comment. With a schema, qualified atoms are checked and
// bare value names are resolved against it (they must be unique across all
// domains); without one, atoms stay unresolved until evaluation. The 'all'
// keyword needs the stakeholder set of the profile in scope.
QueryPtr parse_query(const std::string& text,
                     const VariableSchema* schema = nullptr,
                     const StakeholderSet* all_stakeholders = nullptr);

// Prints with minimal parentheses under '!' > '&' > '|'. parse of the result
// reproduces the tree.
std::string print_query(const Query& q);

// Checks every atom against the schema and every coalition against the
// stakeholder set; throws SemanticError on the first violation.
void validate_query(const Query& q, const VariableSchema& schema,
                    const StakeholderSet& stakeholders);

}  // namespace prefq
