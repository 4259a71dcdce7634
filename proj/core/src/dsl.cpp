// SPDX-License-Identifier: Apache-2.0
#include "prefq/dsl.hpp"

#include <algorithm>
#include <utility>

#include "lexer.hpp"

namespace prefq {

using internal::Lexer;
using internal::Tok;

namespace {

class ProfileParser {
 public:
  explicit ProfileParser(const std::string& text) : lex_(text) {}

  PreferenceProfile parse() {
    SourcePos pos = lex_.pos();
    if (!lex_.is_ident("variables"))
      throw ParseError("expected a 'variables' block", pos);
    lex_.advance();
    lex_.expect(Tok::LBrace, "'{'");
    std::vector<Variable> vars;
    while (!lex_.accept(Tok::RBrace)) {
      Variable v;
      v.name = lex_.expect_ident("a variable name");
      lex_.expect(Tok::Colon, "':'");
      do {
        v.values.push_back(lex_.expect_ident("a value name"));
      } while (lex_.accept(Tok::Comma));
      lex_.expect(Tok::Semi, "';'");
      vars.push_back(std::move(v));
    }
    try {
      schema_ = VariableSchema(std::move(vars));
    } catch (const SemanticError& e) {
      throw ParseError(e.what(), pos);
    }
    PreferenceProfile profile(schema_);

    while (lex_.kind() != Tok::End) {
      pos = lex_.pos();
      if (!lex_.is_ident("stakeholder"))
        throw ParseError("expected a 'stakeholder' block", pos);
      lex_.advance();
      pos = lex_.pos();
      long long id = lex_.expect_int("a stakeholder id");
      if (id <= 0) throw ParseError("stakeholder ids must be positive", pos);
      profile.add_stakeholder(static_cast<int>(id));
      lex_.expect(Tok::LBrace, "'{'");
      while (!lex_.accept(Tok::RBrace))
        profile.add_statement(static_cast<int>(id), statement());
    }
    return profile;
  }

 private:
  int var_of(const std::string& name, SourcePos pos) const {
    int v = schema_.var_index(name);
    if (v < 0) throw ParseError("unknown variable '" + name + "'", pos);
    return v;
  }

  int value_of(int var, const std::string& name, SourcePos pos) const {
    int val = schema_.value_index(var, name);
    if (val < 0)
      throw ParseError("unknown value '" + name + "' for variable '" +
                           schema_.var(var).name + "'",
                       pos);
    return val;
  }

  std::pair<int, int> assignment() {
    SourcePos pos = lex_.pos();
    int var = var_of(lex_.expect_ident("a variable name"), pos);
    lex_.expect(Tok::Eq, "'='");
    pos = lex_.pos();
    int val = value_of(var, lex_.expect_ident("a value name"), pos);
    return {var, val};
  }

  PreferenceStatement statement() {
    SourcePos stmt_pos = lex_.pos();
    try {
      if (lex_.is_ident("outcome")) return direct_statement();
      return intra_statement();
    } catch (const SemanticError& e) {
      // Factory validation has no source position; attach the statement's.
      throw ParseError(e.what(), stmt_pos);
    }
  }

  PreferenceStatement direct_statement() {
    lex_.advance();
    DirectStatement s;
    s.better = outcome_literal();
    lex_.expect(Tok::Gt, "'>'");
    s.worse = outcome_literal();
    lex_.expect(Tok::Semi, "';'");
    return PreferenceStatement::direct(schema_, std::move(s));
  }

  Outcome outcome_literal() {
    SourcePos pos = lex_.pos();
    lex_.expect(Tok::LParen, "'('");
    Outcome o(static_cast<std::size_t>(schema_.var_count()), -1);
    do {
      SourcePos apos = lex_.pos();
      auto [var, val] = assignment();
      if (o[static_cast<std::size_t>(var)] >= 0)
        throw ParseError("variable '" + schema_.var(var).name +
                             "' assigned twice in an outcome",
                         apos);
      o[static_cast<std::size_t>(var)] = val;
    } while (lex_.accept(Tok::Comma));
    lex_.expect(Tok::RParen, "')'");
    for (int v = 0; v < schema_.var_count(); ++v)
      if (o[static_cast<std::size_t>(v)] < 0)
        throw ParseError(
            "outcome leaves variable '" + schema_.var(v).name + "' unassigned",
            pos);
    return o;
  }

  PreferenceStatement intra_statement() {
    IntraStatement s;
    if (lex_.is_ident("if")) {
      lex_.advance();
      std::vector<std::pair<int, int>> bindings;
      do {
        SourcePos apos = lex_.pos();
        auto [var, val] = assignment();
        for (const auto& b : bindings)
          if (b.first == var)
            throw ParseError("variable '" + schema_.var(var).name +
                                 "' conditioned twice",
                             apos);
        bindings.emplace_back(var, val);
      } while (lex_.accept(Tok::Comma));
      lex_.expect(Tok::Colon, "':'");
      s.condition = PartialAssignment(std::move(bindings));
    }
    auto [var, pref] = assignment();
    lex_.expect(Tok::Gt, "'>'");
    SourcePos rhs_pos = lex_.pos();
    auto [var2, disp] = assignment();
    if (var2 != var)
      throw ParseError("both sides must compare variable '" +
                           schema_.var(var).name + "'",
                       rhs_pos);
    s.var = var;
    s.preferred = pref;
    s.dispreferred = disp;
    if (lex_.is_ident("over")) {
      lex_.advance();
      do {
        SourcePos vpos = lex_.pos();
        s.less_important.push_back(
            var_of(lex_.expect_ident("a variable name"), vpos));
      } while (lex_.accept(Tok::Comma));
      std::sort(s.less_important.begin(), s.less_important.end());
    }
    lex_.expect(Tok::Semi, "';'");
    return PreferenceStatement::intra(schema_, std::move(s));
  }

  Lexer lex_;
  VariableSchema schema_;
};

// "(E=noCode, A=simple, F=noFix)": the parser reads assignments, not the
// bare tuple form used for displaying answers.
void print_outcome_literal(const VariableSchema& schema, const Outcome& o,
                           std::string& out) {
  out += '(';
  for (int v = 0; v < schema.var_count(); ++v) {
    if (v) out += ", ";
    out += schema.var(v).name;
    out += '=';
    out += schema.var(v).values[static_cast<std::size_t>(
        o[static_cast<std::size_t>(v)])];
  }
  out += ')';
}

void print_statement(const VariableSchema& schema,
                     const PreferenceStatement& s, std::string& out) {
  if (s.kind() == PreferenceStatement::Kind::Direct) {
    out += "outcome ";
    print_outcome_literal(schema, s.direct().better, out);
    out += " > ";
    print_outcome_literal(schema, s.direct().worse, out);
    out += ";";
    return;
  }
  const IntraStatement& st = s.intra();
  if (!st.condition.empty()) {
    out += "if ";
    bool first = true;
    for (const auto& [var, val] : st.condition.bindings()) {
      if (!first) out += ", ";
      first = false;
      out += schema.var(var).name;
      out += '=';
      out += schema.var(var).values[static_cast<std::size_t>(val)];
    }
    out += ": ";
  }
  const Variable& v = schema.var(st.var);
  out += v.name;
  out += '=';
  out += v.values[static_cast<std::size_t>(st.preferred)];
  out += " > ";
  out += v.name;
  out += '=';
  out += v.values[static_cast<std::size_t>(st.dispreferred)];
  if (!st.less_important.empty()) {
    out += " over ";
    bool first = true;
    for (int y : st.less_important) {
      if (!first) out += ", ";
      first = false;
      out += schema.var(y).name;
    }
  }
  out += ";";
}

}  // namespace

PreferenceProfile parse_profile(const std::string& text) {
  return ProfileParser(text).parse();
}

std::string print_profile(const PreferenceProfile& profile) {
  const VariableSchema& schema = profile.schema();
  std::string out = "variables {\n";
  for (const Variable& v : schema.vars()) {
    out += "  ";
    out += v.name;
    out += ": ";
    for (std::size_t i = 0; i < v.values.size(); ++i) {
      if (i) out += ", ";
      out += v.values[i];
    }
    out += ";\n";
  }
  out += "}\n";
  for (const auto& [id, statements] : profile.statements()) {
    out += "\nstakeholder ";
    out += std::to_string(id);
    out += " {\n";
    for (const PreferenceStatement& s : statements) {
      out += "  ";
      print_statement(schema, s, out);
      out += "\n";
    }
    out += "}\n";
  }
  return out;
}

// (outcome "(code,simple,fix)" prints without variable names; outcome
// literals in profile files name every variable, so the two forms differ on
// purpose: files are the readable form, outcome_to_string the compact one.)

PreferenceGraph parse_graph_text(const std::string& text) {
  Lexer lex(text);
  SourcePos pos = lex.pos();
  if (!lex.is_ident("graph")) throw ParseError("expected 'graph' header", pos);
  lex.advance();
  pos = lex.pos();
  long long n_stakeholders = lex.expect_int("the stakeholder count");
  if (n_stakeholders <= 0)
    throw ParseError("stakeholder count must be positive", pos);
  pos = lex.pos();
  long long n_outcomes = lex.expect_int("the outcome count");
  if (n_outcomes <= 0) throw ParseError("outcome count must be positive", pos);

  std::vector<AnnotatedEdge> edges;
  while (lex.kind() != Tok::End) {
    AnnotatedEdge e;
    pos = lex.pos();
    long long from = lex.expect_int("an outcome index");
    if (from >= n_outcomes)
      throw ParseError("outcome index out of range", pos);
    lex.expect(Tok::Arrow, "'->'");
    pos = lex.pos();
    long long to = lex.expect_int("an outcome index");
    if (to >= n_outcomes) throw ParseError("outcome index out of range", pos);
    lex.expect(Tok::Colon, "':'");
    lex.expect(Tok::LBrace, "'{'");
    std::vector<int> ids;
    do {
      pos = lex.pos();
      long long id = lex.expect_int("a stakeholder id");
      if (id <= 0 || id > n_stakeholders)
        throw ParseError("stakeholder id out of range", pos);
      ids.push_back(static_cast<int>(id));
    } while (lex.accept(Tok::Comma));
    lex.expect(Tok::RBrace, "'}'");
    e.worse = static_cast<NodeId>(from);
    e.better = static_cast<NodeId>(to);
    e.who = StakeholderSet(std::move(ids));
    edges.push_back(std::move(e));
  }

  Variable node;
  node.name = "node";
  for (long long i = 0; i < n_outcomes; ++i)
    node.values.push_back("o" + std::to_string(i));
  std::vector<int> all;
  for (int a = 1; a <= static_cast<int>(n_stakeholders); ++a) all.push_back(a);
  return PreferenceGraph::from_edges(VariableSchema({std::move(node)}),
                                     StakeholderSet(std::move(all)), edges);
}

std::string print_graph_text(const PreferenceGraph& graph) {
  std::vector<AnnotatedEdge> edges = graph.edges();
  std::sort(edges.begin(), edges.end(),
            [](const AnnotatedEdge& a, const AnnotatedEdge& b) {
              return a.worse != b.worse ? a.worse < b.worse
                                        : a.better < b.better;
            });
  std::string out = "graph ";
  const auto& ids = graph.stakeholders().ids();
  out += std::to_string(ids.empty() ? 0 : ids.back());
  out += ' ';
  out += std::to_string(graph.outcome_count());
  out += '\n';
  for (const AnnotatedEdge& e : edges) {
    out += std::to_string(e.worse);
    out += " -> ";
    out += std::to_string(e.better);
    out += " : ";
    out += e.who.to_string();
    out += '\n';
  }
  return out;
}

}  // namespace prefq
