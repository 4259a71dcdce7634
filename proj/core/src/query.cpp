// SPDX-License-Identifier: Apache-2.0
#include "prefq/query.hpp"

#include <algorithm>

#include "lexer.hpp"

namespace prefq {

using internal::Lexer;
using internal::Tok;

const char* to_string(SemanticsMode m) {
  switch (m) {
    case SemanticsMode::Consensus: return "cs";
    case SemanticsMode::W1A2: return "w1a2";
    case SemanticsMode::W1A1: return "w1a1";
    case SemanticsMode::W2A2: return "w2a2";
    case SemanticsMode::W2A1: return "w2a1";
  }
  return "?";
}

SemanticsMode semantics_from_string(std::string_view s) {
  if (s == "cs") return SemanticsMode::Consensus;
  if (s == "w1a2") return SemanticsMode::W1A2;
  if (s == "w1a1") return SemanticsMode::W1A1;
  if (s == "w2a2") return SemanticsMode::W2A2;
  if (s == "w2a1") return SemanticsMode::W2A1;
  throw ParseError("unknown semantics '" + std::string(s) +
                       "' (expected cs, w1a2, w1a1, w2a2 or w2a1)",
                   {});
}

QueryPtr Query::make_true() {
  auto q = std::make_shared<Query>();
  q->kind = Kind::True;
  return q;
}

QueryPtr Query::make_false() {
  auto q = std::make_shared<Query>();
  q->kind = Kind::False;
  return q;
}

QueryPtr Query::make_prop(PropAtom atom) {
  auto q = std::make_shared<Query>();
  q->kind = Kind::Prop;
  q->prop = std::move(atom);
  return q;
}

QueryPtr Query::make_not(QueryPtr child) {
  auto q = std::make_shared<Query>();
  q->kind = Kind::Not;
  q->lhs = std::move(child);
  return q;
}

QueryPtr Query::make_and(QueryPtr l, QueryPtr r) {
  auto q = std::make_shared<Query>();
  q->kind = Kind::And;
  q->lhs = std::move(l);
  q->rhs = std::move(r);
  return q;
}

QueryPtr Query::make_or(QueryPtr l, QueryPtr r) {
  auto q = std::make_shared<Query>();
  q->kind = Kind::Or;
  q->lhs = std::move(l);
  q->rhs = std::move(r);
  return q;
}

QueryPtr Query::make_pref(QueryPtr psi1, QueryPtr psi2, StakeholderSet a) {
  if (a.empty()) throw SemanticError("preference operator with empty coalition");
  auto q = std::make_shared<Query>();
  q->kind = Kind::Pref;
  q->lhs = std::move(psi1);
  q->rhs = std::move(psi2);
  q->coalition = std::move(a);
  return q;
}

bool structurally_equal(const Query& a, const Query& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Query::Kind::True:
    case Query::Kind::False:
      return true;
    case Query::Kind::Prop:
      return a.prop == b.prop;
    case Query::Kind::Not:
      return structurally_equal(*a.lhs, *b.lhs);
    case Query::Kind::And:
    case Query::Kind::Or:
      return structurally_equal(*a.lhs, *b.lhs) &&
             structurally_equal(*a.rhs, *b.rhs);
    case Query::Kind::Pref:
      return a.coalition == b.coalition &&
             structurally_equal(*a.lhs, *b.lhs) &&
             structurally_equal(*a.rhs, *b.rhs);
  }
  return false;
}

int nesting_depth(const Query& q) {
  switch (q.kind) {
    case Query::Kind::True:
    case Query::Kind::False:
    case Query::Kind::Prop:
      return 0;
    case Query::Kind::Not:
      return nesting_depth(*q.lhs);
    case Query::Kind::And:
    case Query::Kind::Or:
      return std::max(nesting_depth(*q.lhs), nesting_depth(*q.rhs));
    case Query::Kind::Pref:
      return 1 + std::max(nesting_depth(*q.lhs), nesting_depth(*q.rhs));
  }
  return 0;
}

namespace {

class QueryParser {
 public:
  QueryParser(const std::string& text, const VariableSchema* schema,
              const StakeholderSet* all)
      : lex_(text), schema_(schema), all_(all) {}

  QueryPtr parse() {
    QueryPtr q = expr();
    lex_.expect_end();
    return q;
  }

 private:
  QueryPtr expr() {
    QueryPtr q = term();
    while (lex_.accept(Tok::Pipe)) q = Query::make_or(q, term());
    return q;
  }

  QueryPtr term() {
    QueryPtr q = factor();
    while (lex_.accept(Tok::Amp)) q = Query::make_and(q, factor());
    return q;
  }

  QueryPtr factor() {
    SourcePos pos = lex_.pos();
    if (lex_.accept(Tok::Bang)) return Query::make_not(factor());
    if (lex_.accept(Tok::LParen)) {
      QueryPtr q = expr();
      lex_.expect(Tok::RParen, "')'");
      return q;
    }
    if (lex_.kind() != Tok::Ident)
      throw ParseError("expected a query", pos);
    if (lex_.is_ident("tt")) {
      lex_.advance();
      return Query::make_true();
    }
    if (lex_.is_ident("ff")) {
      lex_.advance();
      return Query::make_false();
    }
    if (lex_.is_ident("P")) {
      lex_.advance();
      lex_.expect(Tok::LParen, "'(' after P");
      QueryPtr psi1 = expr();
      lex_.expect(Tok::Comma, "','");
      QueryPtr psi2 = expr();
      lex_.expect(Tok::Comma, "','");
      StakeholderSet a = coalition(pos);
      lex_.expect(Tok::RParen, "')'");
      return Query::make_pref(psi1, psi2, std::move(a));
    }
    return prop(pos);
  }

  QueryPtr prop(SourcePos pos) {
    std::string first = lex_.expect_ident("a proposition");
    if (lex_.accept(Tok::Eq)) {
      std::string value = lex_.expect_ident("a value name");
      PropAtom atom{first, value};
      if (schema_) check_resolved(atom, pos);
      return Query::make_prop(std::move(atom));
    }
    // Bare value name.
    if (!schema_) return Query::make_prop(PropAtom{"", first});
    auto hit = schema_->resolve_unique_value(first);
    if (!hit) {
      int occurrences = 0;
      for (int v = 0; v < schema_->var_count(); ++v)
        if (schema_->value_index(v, first) >= 0) ++occurrences;
      if (occurrences == 0)
        throw ParseError("unknown value '" + first + "'", pos);
      throw ParseError("value '" + first +
                           "' occurs in several domains; qualify it as variable=value",
                       pos);
    }
    return Query::make_prop(PropAtom{schema_->var(hit->first).name, first});
  }

  void check_resolved(const PropAtom& atom, SourcePos pos) {
    int var = schema_->var_index(atom.variable);
    if (var < 0)
      throw ParseError("unknown variable '" + atom.variable + "'", pos);
    if (schema_->value_index(var, atom.value) < 0)
      throw ParseError("unknown value '" + atom.value + "' for variable '" +
                           atom.variable + "'",
                       pos);
  }

  StakeholderSet coalition(SourcePos pref_pos) {
    if (lex_.is_ident("all")) {
      if (!all_)
        throw ParseError(
            "'all' needs a profile in scope to name its stakeholders",
            lex_.pos());
      lex_.advance();
      if (all_->empty())
        throw ParseError("'all' expands to an empty coalition", pref_pos);
      return *all_;
    }
    SourcePos pos = lex_.pos();
    lex_.expect(Tok::LBrace, "'{' or 'all'");
    std::vector<int> ids;
    do {
      long long id = lex_.expect_int("a stakeholder id");
      if (id <= 0)
        throw ParseError("stakeholder ids must be positive", pos);
      ids.push_back(static_cast<int>(id));
    } while (lex_.accept(Tok::Comma));
    lex_.expect(Tok::RBrace, "'}'");
    return StakeholderSet(std::move(ids));
  }

  Lexer lex_;
  const VariableSchema* schema_;
  const StakeholderSet* all_;
};

int precedence(Query::Kind k) {
  switch (k) {
    case Query::Kind::Or: return 1;
    case Query::Kind::And: return 2;
    case Query::Kind::Not: return 3;
    default: return 4;  // atoms and P(...) never need parentheses
  }
}

void print_rec(const Query& q, int parent_prec, std::string& out) {
  int prec = precedence(q.kind);
  bool parens = prec < parent_prec;
  if (parens) out += '(';
  switch (q.kind) {
    case Query::Kind::True: out += "tt"; break;
    case Query::Kind::False: out += "ff"; break;
    case Query::Kind::Prop:
      if (q.prop.resolved()) {
        out += q.prop.variable;
        out += '=';
      }
      out += q.prop.value;
      break;
    case Query::Kind::Not:
      out += '!';
      print_rec(*q.lhs, precedence(Query::Kind::Not), out);
      break;
    case Query::Kind::And:
      print_rec(*q.lhs, prec, out);
      out += " & ";
      print_rec(*q.rhs, prec + 1, out);
      break;
    case Query::Kind::Or:
      print_rec(*q.lhs, prec, out);
      out += " | ";
      print_rec(*q.rhs, prec + 1, out);
      break;
    case Query::Kind::Pref:
      out += "P(";
      print_rec(*q.lhs, 0, out);
      out += ", ";
      print_rec(*q.rhs, 0, out);
      out += ", ";
      out += q.coalition.to_string();
      out += ')';
      break;
  }
  if (parens) out += ')';
}

}  // namespace

QueryPtr parse_query(const std::string& text, const VariableSchema* schema,
                     const StakeholderSet* all_stakeholders) {
  return QueryParser(text, schema, all_stakeholders).parse();
}

std::string print_query(const Query& q) {
  std::string out;
  print_rec(q, 0, out);
  return out;
}

void validate_query(const Query& q, const VariableSchema& schema,
                    const StakeholderSet& stakeholders) {
  switch (q.kind) {
    case Query::Kind::True:
    case Query::Kind::False:
      return;
    case Query::Kind::Prop: {
      if (!q.prop.resolved()) {
        if (!schema.resolve_unique_value(q.prop.value))
          throw SemanticError("cannot resolve bare value '" + q.prop.value +
                              "' against the schema");
        return;
      }
      int var = schema.var_index(q.prop.variable);
      if (var < 0)
        throw SemanticError("unknown variable '" + q.prop.variable + "'");
      if (schema.value_index(var, q.prop.value) < 0)
        throw SemanticError("unknown value '" + q.prop.value +
                            "' for variable '" + q.prop.variable + "'");
      return;
    }
    case Query::Kind::Not:
      validate_query(*q.lhs, schema, stakeholders);
      return;
    case Query::Kind::And:
    case Query::Kind::Or:
      validate_query(*q.lhs, schema, stakeholders);
      validate_query(*q.rhs, schema, stakeholders);
      return;
    case Query::Kind::Pref:
      if (q.coalition.empty())
        throw SemanticError("preference operator with empty coalition");
      for (int id : q.coalition)
        if (!stakeholders.contains(id))
          throw SemanticError("unknown stakeholder " + std::to_string(id) +
                              " in coalition " + q.coalition.to_string());
      validate_query(*q.lhs, schema, stakeholders);
      validate_query(*q.rhs, schema, stakeholders);
      return;
  }
}

}  // namespace prefq
