// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "prefq/common.hpp"

namespace prefq {

struct Variable {
  std::string name;
  std::vector<std::string> values;

  friend bool operator==(const Variable&, const Variable&) = default;
};

// Finite multi-valued variables in a fixed declaration order. The declaration
// order is canonical: outcomes are tuples in this order and the outcome index
// treats the first variable as the most significant digit.
class VariableSchema {
 public:
  VariableSchema() = default;
  explicit VariableSchema(std::vector<Variable> vars);

  int var_count() const { return static_cast<int>(vars_.size()); }
  const Variable& var(int i) const { return vars_[static_cast<std::size_t>(i)]; }
  const std::vector<Variable>& vars() const { return vars_; }

  // -1 when absent.
  int var_index(std::string_view name) const;
  int value_index(int var, std::string_view value) const;

  // Resolves a bare value name against all domains. Fails unless the value
  // occurs in exactly one domain.
  std::optional<std::pair<int, int>> resolve_unique_value(
      std::string_view value) const;

  // Number of complete assignments; throws CapacityError above the limit.
  std::uint64_t outcome_count(
      std::uint64_t limit = kDefaultMaterializeLimit) const;

  friend bool operator==(const VariableSchema&, const VariableSchema&) = default;

 private:
  std::vector<Variable> vars_;
};

// Complete assignment, one value index per schema variable.
using Outcome = std::vector<int>;

// Position of an outcome in the canonical enumeration.
std::uint64_t outcome_to_index(const VariableSchema& schema, const Outcome& o);
Outcome outcome_from_index(const VariableSchema& schema, std::uint64_t index);

// All outcomes in canonical order. Throws CapacityError above the limit.
std::vector<Outcome> outcome_space(
    const VariableSchema& schema,
    std::uint64_t limit = kDefaultMaterializeLimit);

// "(code,simple,noFix)"
std::string outcome_to_string(const VariableSchema& schema, const Outcome& o);

// Partial assignment with each variable bound at most once, kept sorted by
// variable index.
class PartialAssignment {
 public:
  PartialAssignment() = default;
  explicit PartialAssignment(std::vector<std::pair<int, int>> bindings);

  bool empty() const { return bindings_.empty(); }
  std::size_t size() const { return bindings_.size(); }
  const std::vector<std::pair<int, int>>& bindings() const { return bindings_; }
  bool binds(int var) const;

  friend bool operator==(const PartialAssignment&,
                         const PartialAssignment&) = default;

 private:
  std::vector<std::pair<int, int>> bindings_;  // (var, value), sorted by var
};

bool satisfies(const Outcome& o, const PartialAssignment& c);

// A propositional atom "variable = value". Atoms parsed without a schema in
// scope keep variable empty and carry only the value name; they are resolved
// against the schema of the graph they are eventually evaluated on.
struct PropAtom {
  std::string variable;
  std::string value;

  bool resolved() const { return !variable.empty(); }
  friend bool operator==(const PropAtom&, const PropAtom&) = default;
};

// One conditional preference of a single stakeholder for values of one
// variable, with an optional set of less important variables that may change
// freely alongside it.
struct IntraStatement {
  PartialAssignment condition;   // never binds var
  int var = -1;
  int preferred = -1;
  int dispreferred = -1;         // != preferred
  std::vector<int> less_important;  // sorted, excludes var and condition vars

  friend bool operator==(const IntraStatement&, const IntraStatement&) = default;
};

// One preference between two fully specified outcomes.
struct DirectStatement {
  Outcome better;
  Outcome worse;  // != better

  friend bool operator==(const DirectStatement&, const DirectStatement&) = default;
};

class PreferenceStatement {
 public:
  enum class Kind { Intra, Direct };

  static PreferenceStatement intra(const VariableSchema& schema,
                                   IntraStatement s);
  static PreferenceStatement direct(const VariableSchema& schema,
                                    DirectStatement s);

  Kind kind() const { return kind_; }
  const IntraStatement& intra() const { return intra_; }
  const DirectStatement& direct() const { return direct_; }

  friend bool operator==(const PreferenceStatement&,
                         const PreferenceStatement&) = default;

 private:
  PreferenceStatement() = default;
  Kind kind_ = Kind::Intra;
  IntraStatement intra_;
  DirectStatement direct_;
};

// Statements grouped by stakeholder. Stakeholder ids are positive and
// iterate in ascending order. Duplicate statements are dropped on insert.
class PreferenceProfile {
 public:
  PreferenceProfile() = default;
  explicit PreferenceProfile(VariableSchema schema)
      : schema_(std::move(schema)) {}

  const VariableSchema& schema() const { return schema_; }

  // Registers the stakeholder even if it ends up with no statements.
  void add_stakeholder(int id);
  void add_statement(int stakeholder, PreferenceStatement s);

  StakeholderSet stakeholders() const;
  const std::map<int, std::vector<PreferenceStatement>>& statements() const {
    return by_stakeholder_;
  }
  std::size_t statement_count() const;

 private:
  VariableSchema schema_;
  std::map<int, std::vector<PreferenceStatement>> by_stakeholder_;
};

}  // namespace prefq
