#include "tdt/tdtree.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace tdt {

std::vector<const TreeNode*> TemporalDecisionTree::nodes() const {
  std::vector<const TreeNode*> out;
  std::function<void(const TreeNode*)> walk = [&](const TreeNode* n) {
    out.push_back(n);
    for (const auto& [value, child] : n->edges) {
      (void)value;
      walk(child.get());
    }
  };
  if (root_) walk(root_.get());
  return out;
}

std::vector<const TreeNode*> TemporalDecisionTree::leaves() const {
  std::vector<const TreeNode*> out;
  for (const TreeNode* n : nodes()) {
    if (n->is_leaf()) out.push_back(n);
  }
  return out;
}

ValidationReport check_structure(const TemporalDecisionTree& tree, const TeSet& ts,
                                 const ActionModel& model) {
  ValidationReport report;
  if (tree.empty()) {
    report.error("tree", "empty tree");
    return report;
  }
  std::function<void(const TreeNode*, int, std::string)> walk = [&](const TreeNode* n,
                                                                    int min_time,
                                                                    std::string path) {
    if (n->is_leaf()) {
      if (n->action.members.empty()) {
        report.error(path, "leaf carries no action");
      }
      for (int a : n->action.members) {
        if (a < 0 || a >= model.size()) report.error(path, "leaf references an unknown action");
      }
      if (!n->edges.empty()) report.error(path, "leaf has outgoing edges");
      return;
    }
    if (n->sensor < 0 || n->sensor >= static_cast<int>(ts.sensors.size())) {
      report.error(path, "test references an unknown sensor");
      return;
    }
    if (n->time < 0 || n->time >= ts.axis.size()) {
      report.error(path, "test references an unknown time label");
      return;
    }
    if (n->time < min_time) {
      report.error(path, "time label decreases along the path");
    }
    if (n->edges.empty()) {
      report.error(path, "inner node has no children");
    }
    std::set<int> seen;
    for (const auto& [value, child] : n->edges) {
      if (value < 0 || value >= static_cast<int>(ts.alphabet.size())) {
        report.error(path, "edge references an unknown value");
        continue;
      }
      if (!seen.insert(value).second) {
        report.error(path, "duplicate edge value '" + ts.alphabet[static_cast<size_t>(value)] + "'");
      }
      walk(child.get(), n->time, path + "/" + ts.alphabet[static_cast<size_t>(value)]);
    }
  };
  walk(tree.root(), 0, "root");
  return report;
}

ExamplesMap examples_map(const TemporalDecisionTree& tree, const TeSet& ts) {
  ExamplesMap map;
  if (tree.empty()) return map;
  std::function<void(const TreeNode*, const SituationSet&)> walk = [&](const TreeNode* n,
                                                                       const SituationSet& subset) {
    map.at[n] = subset;
    if (n->is_leaf()) return;
    if (n->sensor < 0 || n->sensor >= static_cast<int>(ts.sensors.size()) || n->time < 0 ||
        n->time >= ts.axis.size()) {
      throw Error(Errc::validation, "tree node references an unknown sensor or time label");
    }
    std::map<int, SituationSet> groups;
    for (int sit : subset) {
      auto v = ts.value_at(sit, {n->sensor, n->time});
      if (!v) {
        // Past this member's deadline; surfaces as a compatibility failure.
        map.unrouted.push_back({sit, n});
        continue;
      }
      groups[*v].push_back(sit);
    }
    for (const auto& [value, child] : n->edges) {
      auto it = groups.find(value);
      if (it == groups.end()) {
        walk(child.get(), {});
      } else {
        walk(child.get(), it->second);
        groups.erase(it);
      }
    }
    for (const auto& [value, members] : groups) {
      (void)value;
      for (int sit : members) map.unrouted.push_back({sit, n});
    }
  };
  walk(tree.root(), ts.all_situations());
  return map;
}

SituationSet examples_at(const TemporalDecisionTree& tree, const TreeNode* node, const TeSet& ts) {
  ExamplesMap map = examples_map(tree, ts);
  auto it = map.at.find(node);
  if (it == map.at.end()) {
    throw Error(Errc::bad_precondition, "node does not belong to the tree");
  }
  return it->second;
}

CompatibilityReport is_compatible(const TemporalDecisionTree& tree, const TeSet& ts,
                                  const ActionModel& model) {
  CompatibilityReport out;
  ValidationReport structure = check_structure(tree, ts, model);
  if (!structure.ok()) {
    for (const ValidationIssue& e : structure.errors) {
      out.diagnostics.push_back(e.field + ": " + e.message);
    }
    return out;
  }
  ExamplesMap map = examples_map(tree, ts);
  for (auto [sit, node] : map.unrouted) {
    out.diagnostics.push_back("situation '" + ts.situations[static_cast<size_t>(sit)].name +
                              "' has no edge to follow at " +
                              ts.observation_name({node->sensor, node->time}));
  }
  std::function<void(const TreeNode*, std::string)> walk = [&](const TreeNode* n, std::string path) {
    const SituationSet& subset = map.at[n];
    if (n->is_leaf()) {
      if (subset.empty()) {
        out.diagnostics.push_back(path + ": leaf reached by no situation");
        return;
      }
      CompoundAction expected = act_of_set(ts, subset, model);
      if (!(n->action == expected)) {
        out.diagnostics.push_back(path + ": leaf action " + model.compound_name(n->action) +
                                  " differs from the merged action " +
                                  model.compound_name(expected));
      }
      return;
    }
    if (!subset.empty() && n->time > global_deadline(ts, subset)) {
      out.diagnostics.push_back(path + ": test " + ts.observation_name({n->sensor, n->time}) +
                                " is past the deadline " +
                                format_rational(ts.axis[global_deadline(ts, subset)]) +
                                " of its example set");
    }
    for (const auto& [value, child] : n->edges) {
      walk(child.get(), path + "/" + ts.alphabet[static_cast<size_t>(value)]);
    }
  };
  walk(tree.root(), "root");
  out.compatible = out.diagnostics.empty();
  return out;
}

namespace {

void require_compatible(const TemporalDecisionTree& tree, const TeSet& ts,
                        const ActionModel& model) {
  CompatibilityReport rep = is_compatible(tree, ts, model);
  if (!rep.compatible) {
    std::string msg = "tree is not compatible with the example set";
    if (!rep.diagnostics.empty()) msg += ": " + rep.diagnostics.front();
    throw Error(Errc::incompatibility, msg);
  }
}

Rational node_cost(const TreeNode* n, const ExamplesMap& map, const TeSet& ts,
                   const ActionModel& model) {
  if (n->is_leaf()) return model.compound_cost(n->action);
  const SituationSet& here = map.at.at(n);
  Rational total = 0;
  for (const auto& [value, child] : n->edges) {
    (void)value;
    const SituationSet& sub = map.at.at(child.get());
    if (sub.empty()) continue;
    Rational weight = subset_probability(ts, sub, here);
    if (weight == 0) continue;  // zero-prior branch contributes nothing
    total += weight * node_cost(child.get(), map, ts, model);
  }
  return total;
}

}  // namespace

Rational expected_cost_recursive(const TemporalDecisionTree& tree, const TeSet& ts,
                                 const ActionModel& model) {
  ExamplesMap map = examples_map(tree, ts);
  return node_cost(tree.root(), map, ts, model);
}

Rational expected_cost_leaf_sum(const TemporalDecisionTree& tree, const TeSet& ts,
                                const ActionModel& model) {
  ExamplesMap map = examples_map(tree, ts);
  SituationSet all = ts.all_situations();
  Rational total = 0;
  for (const TreeNode* l : tree.leaves()) {
    const SituationSet& sub = map.at.at(l);
    if (sub.empty()) continue;
    total += model.compound_cost(l->action) * subset_probability(ts, sub, all);
  }
  return total;
}

Rational expected_cost(const TemporalDecisionTree& tree, const TeSet& ts,
                       const ActionModel& model) {
  require_compatible(tree, ts, model);
  Rational recursive = expected_cost_recursive(tree, ts, model);
  Rational leaf_sum = expected_cost_leaf_sum(tree, ts, model);
  if (recursive != leaf_sum) {
    throw Error(Errc::mismatch, "expected-cost routes disagree: " + format_rational(recursive) +
                                    " vs " + format_rational(leaf_sum));
  }
  return leaf_sum;
}

Discrimination more_discriminating(const TemporalDecisionTree& t, const TemporalDecisionTree& u,
                                   const TeSet& ts, const ActionModel& model) {
  require_compatible(t, ts, model);
  require_compatible(u, ts, model);
  bool t_strict = false;
  bool u_strict = false;
  for (int sit = 0; sit < ts.size(); ++sit) {
    const CompoundAction& at = leaf_of(t, sit, ts)->action;
    const CompoundAction& au = leaf_of(u, sit, ts)->action;
    if (at == au) continue;
    if (model.ext_precedes(at, au)) {
      t_strict = true;
    } else if (model.ext_precedes(au, at)) {
      u_strict = true;
    } else {
      return Discrimination::incomparable;
    }
  }
  if (t_strict && u_strict) return Discrimination::incomparable;
  if (t_strict) return Discrimination::more;
  if (u_strict) return Discrimination::less;
  return Discrimination::equal;
}

const TreeNode* leaf_of(const TemporalDecisionTree& tree, int sit, const TeSet& ts) {
  const TreeNode* n = tree.root();
  while (!n->is_leaf()) {
    int v = ts.value(sit, {n->sensor, n->time});
    const TreeNode* next = nullptr;
    for (const auto& [value, child] : n->edges) {
      if (value == v) {
        next = child.get();
        break;
      }
    }
    if (!next) {
      throw Error(Errc::incompatibility,
                  "situation '" + ts.situations[static_cast<size_t>(sit)].name +
                      "' falls off the tree at " + ts.observation_name({n->sensor, n->time}));
    }
    n = next;
  }
  return n;
}

bool structural_equal(const TemporalDecisionTree& a, const TemporalDecisionTree& b) {
  std::function<bool(const TreeNode*, const TreeNode*)> eq = [&](const TreeNode* x,
                                                                 const TreeNode* y) {
    if (x->is_leaf() != y->is_leaf()) return false;
    if (x->is_leaf()) return x->action == y->action;
    if (x->sensor != y->sensor || x->time != y->time) return false;
    if (x->edges.size() != y->edges.size()) return false;
    for (const auto& [value, child] : x->edges) {
      const TreeNode* match = nullptr;
      for (const auto& [v2, c2] : y->edges) {
        if (v2 == value) {
          match = c2.get();
          break;
        }
      }
      if (!match || !eq(child.get(), match)) return false;
    }
    return true;
  };
  if (a.empty() || b.empty()) return a.empty() == b.empty();
  return eq(a.root(), b.root());
}

}  // namespace tdt
