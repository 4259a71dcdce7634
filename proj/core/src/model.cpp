// SPDX-License-Identifier: Apache-2.0
#include "prefq/model.hpp"

#include <algorithm>
#include <cctype>
#include <set>

namespace prefq {

namespace {

bool valid_identifier(std::string_view s) {
  if (s.empty()) return false;
  if (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_')
    return false;
  for (char c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  return true;
}

void check_outcome(const VariableSchema& schema, const Outcome& o,
                   const char* what) {
  if (static_cast<int>(o.size()) != schema.var_count())
    throw SemanticError(std::string(what) + ": expected " +
                        std::to_string(schema.var_count()) + " values, got " +
                        std::to_string(o.size()));
  for (int i = 0; i < schema.var_count(); ++i) {
    int v = o[static_cast<std::size_t>(i)];
    if (v < 0 || v >= static_cast<int>(schema.var(i).values.size()))
      throw SemanticError(std::string(what) + ": value out of range for '" +
                          schema.var(i).name + "'");
  }
}

}  // namespace

VariableSchema::VariableSchema(std::vector<Variable> vars)
    : vars_(std::move(vars)) {
  if (vars_.empty()) throw SemanticError("schema declares no variables");
  std::set<std::string_view> names;
  for (const Variable& v : vars_) {
    if (!valid_identifier(v.name))
      throw SemanticError("invalid variable name '" + v.name + "'");
    if (!names.insert(v.name).second)
      throw SemanticError("duplicate variable '" + v.name + "'");
    if (v.values.empty())
      throw SemanticError("variable '" + v.name + "' has an empty domain");
    std::set<std::string_view> vals;
    for (const std::string& val : v.values) {
      if (!valid_identifier(val))
        throw SemanticError("invalid value name '" + val + "' for variable '" +
                            v.name + "'");
      if (!vals.insert(val).second)
        throw SemanticError("duplicate value '" + val + "' for variable '" +
                            v.name + "'");
    }
  }
}

int VariableSchema::var_index(std::string_view name) const {
  for (std::size_t i = 0; i < vars_.size(); ++i)
    if (vars_[i].name == name) return static_cast<int>(i);
  return -1;
}

int VariableSchema::value_index(int var, std::string_view value) const {
  if (var < 0 || var >= var_count()) return -1;
  const auto& values = vars_[static_cast<std::size_t>(var)].values;
  for (std::size_t i = 0; i < values.size(); ++i)
    if (values[i] == value) return static_cast<int>(i);
  return -1;
}

std::optional<std::pair<int, int>> VariableSchema::resolve_unique_value(
    std::string_view value) const {
  std::optional<std::pair<int, int>> found;
  for (int v = 0; v < var_count(); ++v) {
    int idx = value_index(v, value);
    if (idx < 0) continue;
    if (found) return std::nullopt;  // ambiguous
    found = {v, idx};
  }
  return found;
}

std::uint64_t VariableSchema::outcome_count(std::uint64_t limit) const {
  std::uint64_t n = 1;
  for (const Variable& v : vars_) {
    std::uint64_t d = v.values.size();
    if (n > limit / d)
      throw CapacityError("outcome space exceeds the materialization limit of " +
                          std::to_string(limit) + " outcomes");
    n *= d;
  }
  return n;
}

std::uint64_t outcome_to_index(const VariableSchema& schema, const Outcome& o) {
  check_outcome(schema, o, "outcome");
  std::uint64_t idx = 0;
  for (int i = 0; i < schema.var_count(); ++i)
    idx = idx * schema.var(i).values.size() +
          static_cast<std::uint64_t>(o[static_cast<std::size_t>(i)]);
  return idx;
}

Outcome outcome_from_index(const VariableSchema& schema, std::uint64_t index) {
  Outcome o(static_cast<std::size_t>(schema.var_count()));
  for (int i = schema.var_count() - 1; i >= 0; --i) {
    std::uint64_t d = schema.var(i).values.size();
    o[static_cast<std::size_t>(i)] = static_cast<int>(index % d);
    index /= d;
  }
  if (index != 0) throw SemanticError("outcome index out of range");
  return o;
}

std::vector<Outcome> outcome_space(const VariableSchema& schema,
                                   std::uint64_t limit) {
  std::uint64_t n = schema.outcome_count(limit);
  std::vector<Outcome> out;
  out.reserve(static_cast<std::size_t>(n));
  for (std::uint64_t i = 0; i < n; ++i)
    out.push_back(outcome_from_index(schema, i));
  return out;
}

std::string outcome_to_string(const VariableSchema& schema, const Outcome& o) {
  check_outcome(schema, o, "outcome");
  std::string s = "(";
  for (int i = 0; i < schema.var_count(); ++i) {
    if (i) s += ',';
    s += schema.var(i).values[static_cast<std::size_t>(
        o[static_cast<std::size_t>(i)])];
  }
  s += ')';
  return s;
}

PartialAssignment::PartialAssignment(std::vector<std::pair<int, int>> bindings)
    : bindings_(std::move(bindings)) {
  std::sort(bindings_.begin(), bindings_.end());
  for (std::size_t i = 1; i < bindings_.size(); ++i)
    if (bindings_[i].first == bindings_[i - 1].first)
      throw SemanticError("condition binds a variable twice");
}

bool PartialAssignment::binds(int var) const {
  return std::any_of(bindings_.begin(), bindings_.end(),
                     [var](const auto& b) { return b.first == var; });
}

bool satisfies(const Outcome& o, const PartialAssignment& c) {
  for (const auto& [var, val] : c.bindings()) {
    if (var < 0 || static_cast<std::size_t>(var) >= o.size())
      throw SemanticError("condition variable out of range");
    if (o[static_cast<std::size_t>(var)] != val) return false;
  }
  return true;
}

PreferenceStatement PreferenceStatement::intra(const VariableSchema& schema,
                                               IntraStatement s) {
  if (s.var < 0 || s.var >= schema.var_count())
    throw SemanticError("preference statement names an unknown variable");
  const Variable& v = schema.var(s.var);
  auto check_value = [&](int val) {
    if (val < 0 || val >= static_cast<int>(v.values.size()))
      throw SemanticError("preference statement uses a value outside the domain of '" +
                          v.name + "'");
  };
  check_value(s.preferred);
  check_value(s.dispreferred);
  if (s.preferred == s.dispreferred)
    throw SemanticError("preference statement must compare two distinct values of '" +
                        v.name + "'");
  for (const auto& [cv, cval] : s.condition.bindings()) {
    if (cv < 0 || cv >= schema.var_count())
      throw SemanticError("condition names an unknown variable");
    if (cv == s.var)
      throw SemanticError("condition must not bind the compared variable '" +
                          v.name + "'");
    if (cval < 0 ||
        cval >= static_cast<int>(schema.var(cv).values.size()))
      throw SemanticError("condition uses a value outside the domain of '" +
                          schema.var(cv).name + "'");
  }
  std::sort(s.less_important.begin(), s.less_important.end());
  s.less_important.erase(
      std::unique(s.less_important.begin(), s.less_important.end()),
      s.less_important.end());
  for (int y : s.less_important) {
    if (y < 0 || y >= schema.var_count())
      throw SemanticError("less important set names an unknown variable");
    if (y == s.var)
      throw SemanticError("less important set must not contain the compared variable '" +
                          v.name + "'");
    if (s.condition.binds(y))
      throw SemanticError("less important set must not contain the conditioned variable '" +
                          schema.var(y).name + "'");
  }
  PreferenceStatement out;
  out.kind_ = Kind::Intra;
  out.intra_ = std::move(s);
  return out;
}

PreferenceStatement PreferenceStatement::direct(const VariableSchema& schema,
                                                DirectStatement s) {
  check_outcome(schema, s.better, "direct preference");
  check_outcome(schema, s.worse, "direct preference");
  if (s.better == s.worse)
    throw SemanticError("direct preference must compare two distinct outcomes");
  PreferenceStatement out;
  out.kind_ = Kind::Direct;
  out.direct_ = std::move(s);
  return out;
}

void PreferenceProfile::add_stakeholder(int id) {
  if (id <= 0) throw SemanticError("stakeholder ids must be positive");
  by_stakeholder_[id];
}

void PreferenceProfile::add_statement(int stakeholder, PreferenceStatement s) {
  if (stakeholder <= 0)
    throw SemanticError("stakeholder ids must be positive");
  auto& list = by_stakeholder_[stakeholder];
  if (std::find(list.begin(), list.end(), s) != list.end()) return;
  list.push_back(std::move(s));
}

StakeholderSet PreferenceProfile::stakeholders() const {
  std::vector<int> ids;
  ids.reserve(by_stakeholder_.size());
  for (const auto& [id, _] : by_stakeholder_) ids.push_back(id);
  return StakeholderSet(std::move(ids));
}

std::size_t PreferenceProfile::statement_count() const {
  std::size_t n = 0;
  for (const auto& [_, list] : by_stakeholder_) n += list.size();
  return n;
}

}  // namespace prefq
