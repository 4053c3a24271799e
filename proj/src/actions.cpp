#include "tdt/actions.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace tdt {

void BasicActionModel::compute_closure() {
  size_t n = names.size();
  below.assign(n, std::vector<bool>(n, false));
  for (auto [w, s] : declared_order) {
    below[static_cast<size_t>(w)][static_cast<size_t>(s)] = true;
  }
  for (size_t k = 0; k < n; ++k) {
    for (size_t i = 0; i < n; ++i) {
      if (!below[i][k]) continue;
      for (size_t j = 0; j < n; ++j) {
        if (below[k][j]) below[i][j] = true;
      }
    }
  }
}

int BasicActionModel::action_index(std::string_view name) const {
  for (size_t i = 0; i < names.size(); ++i) {
    if (names[i] == name) return static_cast<int>(i);
  }
  return -1;
}

CompoundAction ActionModel::merge(std::span<const int> actions) const {
  if (actions.empty()) {
    throw Error(Errc::empty_subset, "merge of an empty action set");
  }
  std::set<int> distinct;
  for (int a : actions) {
    if (a < 0 || a >= size()) {
      throw Error(Errc::validation, "unknown action index in merge");
    }
    distinct.insert(a);
  }
  CompoundAction out;
  for (int a : distinct) {
    bool dominated = false;
    for (int b : distinct) {
      if (a != b && precedes(a, b)) {
        dominated = true;
        break;
      }
    }
    if (!dominated) out.members.push_back(a);
  }
  return out;
}

bool ActionModel::ext_precedes(const CompoundAction& a, const CompoundAction& b) const {
  if (a == b) return false;
  for (int x : a.members) {
    bool covered = std::binary_search(b.members.begin(), b.members.end(), x);
    if (!covered) {
      for (int y : b.members) {
        if (precedes(x, y)) {
          covered = true;
          break;
        }
      }
    }
    if (!covered) return false;
  }
  return true;
}

Rational ActionModel::compound_cost(const CompoundAction& a) const {
  if (a.members.empty()) {
    throw Error(Errc::empty_subset, "cost of an empty compound action");
  }
  if (a.members.size() == 1) return cost(a.members[0]);
  for (const CompoundCostOverride& ov : overrides) {
    if (ov.set == a) return ov.cost;
  }
  Rational sum = 0;
  for (int x : a.members) sum += cost(x);
  return sum;
}

std::string ActionModel::compound_name(const CompoundAction& a) const {
  std::string out = "{";
  for (size_t i = 0; i < a.members.size(); ++i) {
    if (i) out += ", ";
    out += name(a.members[i]);
  }
  return out + "}";
}

CompoundAction act_of_set(const TeSet& ts, std::span<const int> subset, const ActionModel& model) {
  if (subset.empty()) {
    throw Error(Errc::empty_subset, "act_of_set on an empty subset");
  }
  std::vector<int> acts;
  acts.reserve(subset.size());
  for (int sit : subset) {
    int a = model.action_index(ts.situations[static_cast<size_t>(sit)].action);
    if (a < 0) {
      throw Error(Errc::validation, "situation '" + ts.situations[static_cast<size_t>(sit)].name +
                                        "' uses undeclared action '" +
                                        ts.situations[static_cast<size_t>(sit)].action + "'");
    }
    acts.push_back(a);
  }
  return model.merge(acts);
}

namespace {

bool is_antichain(const ActionModel& model, const CompoundAction& a) {
  for (int x : a.members) {
    for (int y : a.members) {
      if (x != y && model.precedes(x, y)) return false;
    }
  }
  return true;
}

void check_compound_family(const ActionModel& model, const std::set<CompoundAction>& family,
                           ValidationReport& report) {
  for (const CompoundAction& a : family) {
    Rational c = model.compound_cost(a);
    Rational max = model.cost(a.members[0]);
    Rational sum = 0;
    for (int x : a.members) {
      max = std::max(max, model.cost(x));
      sum += model.cost(x);
    }
    if (c < max) {
      report.error("compound_costs", "compound cost of " + model.compound_name(a) +
                                         " is below its most expensive member");
    }
    if (c > sum) {
      report.error("compound_costs", "compound cost of " + model.compound_name(a) +
                                         " exceeds the sum of member costs");
    }
  }
  for (const CompoundAction& a : family) {
    for (const CompoundAction& b : family) {
      if (model.ext_precedes(a, b) && !(model.compound_cost(a) < model.compound_cost(b))) {
        report.error("compound_costs", "compound cost not strictly monotone: " +
                                           model.compound_name(a) + " precedes " +
                                           model.compound_name(b));
      }
    }
  }
}

std::set<CompoundAction> declared_and_singletons(const ActionModel& model) {
  std::set<CompoundAction> family;
  for (int a = 0; a < model.size(); ++a) {
    family.insert(CompoundAction{{a}});
  }
  for (const CompoundCostOverride& ov : model.overrides) {
    family.insert(ov.set);
  }
  return family;
}

}  // namespace

ValidationReport validate_model(const ActionModel& model) {
  ValidationReport report;
  const BasicActionModel& b = model.base;
  {
    std::set<std::string> seen;
    for (const std::string& n : b.names) {
      if (n.empty()) report.error("actions", "empty action name");
      if (!seen.insert(n).second) report.error("actions", "duplicate action '" + n + "'");
    }
  }
  for (size_t i = 0; i < b.costs.size(); ++i) {
    if (!(b.costs[i] > 0)) {
      report.error("actions[" + b.names[i] + "].cost", "cost must be positive");
    }
  }
  for (auto [w, s] : b.declared_order) {
    if (w == s) {
      report.error("order", "reflexive pair on '" + b.names[static_cast<size_t>(w)] + "'");
    }
  }
  if (b.below.size() != b.names.size()) {
    report.error("order", "transitive closure not computed");
    return report;
  }
  for (size_t i = 0; i < b.names.size(); ++i) {
    if (b.below[i][i]) {
      report.error("order", "cycle through '" + b.names[i] + "'; the order must be strict");
    }
  }
  if (!report.ok()) return report;
  for (int i = 0; i < model.size(); ++i) {
    for (int j = 0; j < model.size(); ++j) {
      if (b.precedes(i, j) && !(b.costs[static_cast<size_t>(i)] < b.costs[static_cast<size_t>(j)])) {
        report.error("actions", "cost not strictly monotone: '" + b.names[static_cast<size_t>(i)] +
                                    "' is weaker than '" + b.names[static_cast<size_t>(j)] + "'");
      }
    }
  }
  {
    std::set<CompoundAction> seen;
    for (const CompoundCostOverride& ov : model.overrides) {
      if (ov.set.members.empty()) {
        report.error("compound_costs", "empty compound action");
        continue;
      }
      if (!is_antichain(model, ov.set)) {
        report.error("compound_costs", model.compound_name(ov.set) +
                                           " is not a compound action (contains a dominated member)");
      }
      if (!seen.insert(ov.set).second) {
        report.error("compound_costs", "duplicate entry for " + model.compound_name(ov.set));
      }
      if (ov.set.members.size() == 1 && ov.cost != model.cost(ov.set.members[0])) {
        report.error("compound_costs", "singleton " + model.compound_name(ov.set) +
                                           " must cost the same as the basic action");
      }
    }
  }
  if (report.ok()) {
    check_compound_family(model, declared_and_singletons(model), report);
  }
  return report;
}

ValidationReport validate_model(const ActionModel& model, const TeSet& ts) {
  ValidationReport report = validate_model(model);
  std::set<int> column;
  for (const FaultSituation& sit : ts.situations) {
    int a = model.action_index(sit.action);
    if (a < 0) {
      report.error("situations[" + sit.name + "].action",
                   "action '" + sit.action + "' is not declared in the model");
    } else {
      column.insert(a);
    }
  }
  if (!report.ok()) return report;

  std::set<CompoundAction> family = declared_and_singletons(model);
  std::vector<int> pool(column.begin(), column.end());
  if (pool.size() <= 16) {
    // Every merge reachable from the action column.
    for (uint32_t mask = 1; mask < (1u << pool.size()); ++mask) {
      std::vector<int> subset;
      for (size_t i = 0; i < pool.size(); ++i) {
        if (mask & (1u << i)) subset.push_back(pool[i]);
      }
      family.insert(model.merge(subset));
    }
  } else {
    report.warn("compound_costs",
                "too many distinct actions in the column; exhaustive compound check skipped");
  }
  check_compound_family(model, family, report);
  return report;
}

}  // namespace tdt
