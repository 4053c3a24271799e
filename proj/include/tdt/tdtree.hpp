#pragma once

#include "tdt/actions.hpp"
#include "tdt/teset.hpp"

#include <memory>
#include <unordered_map>
#include <vector>

namespace tdt {

// Inner nodes test one sensor at one time label; an edge exists per value
// actually seen while building. Leaves carry a compound recovery action.
// Time labels never decrease from root to leaf.
struct TreeNode {
  int sensor = -1;  // -1 marks a leaf
  int time = -1;    // axis index; meaningful for inner nodes only
  CompoundAction action;
  std::vector<std::pair<int, std::unique_ptr<TreeNode>>> edges;  // (value, child), value ascending

  bool is_leaf() const { return sensor < 0; }

  static std::unique_ptr<TreeNode> make_leaf(CompoundAction a) {
    auto n = std::make_unique<TreeNode>();
    n->action = std::move(a);
    return n;
  }
  static std::unique_ptr<TreeNode> make_test(int sensor, int time) {
    auto n = std::make_unique<TreeNode>();
    n->sensor = sensor;
    n->time = time;
    return n;
  }
};

class TemporalDecisionTree {
 public:
  TemporalDecisionTree() = default;
  explicit TemporalDecisionTree(std::unique_ptr<TreeNode> root) : root_(std::move(root)) {}

  const TreeNode* root() const { return root_.get(); }
  bool empty() const { return root_ == nullptr; }
  std::vector<const TreeNode*> nodes() const;   // preorder
  std::vector<const TreeNode*> leaves() const;  // left to right
  int node_count() const { return static_cast<int>(nodes().size()); }

 private:
  std::unique_ptr<TreeNode> root_;
};

// Definition-level structure checks: distinct edge values, inner nodes have
// children, labels in range, time labels non-decreasing along paths.
ValidationReport check_structure(const TemporalDecisionTree& tree, const TeSet& ts,
                                 const ActionModel& model);

struct ExamplesMap {
  std::unordered_map<const TreeNode*, SituationSet> at;
  // (situation, node) pairs where the observed value had no outgoing edge.
  std::vector<std::pair<int, const TreeNode*>> unrouted;
};

// Subset of situations that reach each node when the te-set is run through
// the tree. Throws on dangling sensor/time references.
ExamplesMap examples_map(const TemporalDecisionTree& tree, const TeSet& ts);
SituationSet examples_at(const TemporalDecisionTree& tree, const TreeNode* node, const TeSet& ts);

struct CompatibilityReport {
  bool compatible = false;
  std::vector<std::string> diagnostics;
};

// Definition of fitness between tree and te-set: every inner node tests
// within its example set's global deadline and every leaf carries the merge
// of its example set's actions.
CompatibilityReport is_compatible(const TemporalDecisionTree& tree, const TeSet& ts,
                                  const ActionModel& model);

// Both cost routes; expected_cost checks they agree and returns the value.
Rational expected_cost_recursive(const TemporalDecisionTree& tree, const TeSet& ts,
                                 const ActionModel& model);
Rational expected_cost_leaf_sum(const TemporalDecisionTree& tree, const TeSet& ts,
                                const ActionModel& model);
Rational expected_cost(const TemporalDecisionTree& tree, const TeSet& ts, const ActionModel& model);

enum class Discrimination { more, equal, less, incomparable };

Discrimination more_discriminating(const TemporalDecisionTree& t, const TemporalDecisionTree& u,
                                   const TeSet& ts, const ActionModel& model);

// The unique leaf whose example set contains the situation.
const TreeNode* leaf_of(const TemporalDecisionTree& tree, int sit, const TeSet& ts);

// Shape, labels, time labels, edge values and leaf actions all equal.
bool structural_equal(const TemporalDecisionTree& a, const TemporalDecisionTree& b);

}  // namespace tdt
