#pragma once

#include "tdt/errors.hpp"
#include "tdt/rational.hpp"
#include "tdt/teset.hpp"

#include <compare>
#include <span>
#include <string>
#include <vector>

namespace tdt {

// Antichain of basic actions, kept sorted by action index. Produced by
// ActionModel::merge; leaves of a tree carry one of these.
struct CompoundAction {
  std::vector<int> members;
  friend auto operator<=>(const CompoundAction&, const CompoundAction&) = default;
};

// Basic recovery actions with a strict "weaker than" order and positive
// costs, cost strictly monotone along the order.
struct BasicActionModel {
  std::vector<std::string> names;
  std::vector<Rational> costs;
  std::vector<std::pair<int, int>> declared_order;  // (weaker, stronger)
  std::vector<std::vector<bool>> below;             // transitive closure of declared_order

  void compute_closure();
  bool precedes(int weaker, int stronger) const {
    return below[static_cast<size_t>(weaker)][static_cast<size_t>(stronger)];
  }
  int action_index(std::string_view name) const;
};

struct CompoundCostOverride {
  CompoundAction set;
  Rational cost;
};

// Extended model: compound-action costs, declared overrides first, default
// sum-of-members otherwise.
struct ActionModel {
  BasicActionModel base;
  std::vector<CompoundCostOverride> overrides;

  int size() const { return static_cast<int>(base.names.size()); }
  const std::string& name(int a) const { return base.names[static_cast<size_t>(a)]; }
  int action_index(std::string_view n) const { return base.action_index(n); }
  const Rational& cost(int a) const { return base.costs[static_cast<size_t>(a)]; }
  bool precedes(int weaker, int stronger) const { return base.precedes(weaker, stronger); }

  // Drops every action dominated by a stronger one in the set.
  CompoundAction merge(std::span<const int> actions) const;

  // Strict compound order: a != b and every member of a is in b or below some
  // member of b.
  bool ext_precedes(const CompoundAction& a, const CompoundAction& b) const;

  Rational compound_cost(const CompoundAction& a) const;
  std::string compound_name(const CompoundAction& a) const;  // "{b, c}"
};

// merge of the subset members' declared actions.
CompoundAction act_of_set(const TeSet& ts, std::span<const int> subset, const ActionModel& model);

ValidationReport validate_model(const ActionModel& model);

// Additionally checks the te-set's action column: unknown actions, and
// compound-cost monotonicity over every compound reachable from the column.
ValidationReport validate_model(const ActionModel& model, const TeSet& ts);

}  // namespace tdt
