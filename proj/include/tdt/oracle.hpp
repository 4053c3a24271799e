#pragma once

#include "tdt/actions.hpp"
#include "tdt/tdtree.hpp"
#include "tdt/teset.hpp"

#include <optional>
#include <span>
#include <vector>

namespace tdt {

// Whether readings at exactly the binding deadline count when comparing two
// situations. `inclusive` matches the tree-building rules (tests at the
// deadline are allowed); `strict` is available for comparison.
enum class DeadlineBoundary { inclusive, strict };

struct IndistOptions {
  DeadlineBoundary boundary = DeadlineBoundary::inclusive;
  // Observations available for discrimination; full grid when absent.
  std::optional<std::vector<Observation>> observations;
};

// Readings agree on every available observation up to the pair's binding
// deadline.
bool pairwise_indistinguishable(const TeSet& ts, int a, int b, const IndistOptions& opts = {});

// Transitive closure of the pairwise relation, as connected components.
std::vector<SituationSet> indist_classes(const TeSet& ts, const IndistOptions& opts = {});
std::vector<SituationSet> indist_classes_of(const TeSet& ts, std::span<const int> subset,
                                            const IndistOptions& opts = {});

// Minimum achievable expected cost of the example set: merged-action cost per
// indistinguishability class, probability weighted.
Rational teset_expected_cost(const TeSet& ts, const ActionModel& model,
                             const IndistOptions& opts = {});
Rational teset_expected_cost_of(const TeSet& ts, const ActionModel& model,
                                std::span<const int> subset, const IndistOptions& opts = {});

// Reference tree that tests every observation in (time, sensor-name) order
// and stops a branch when the next observation would overrun its deadline.
// Its leaf partition equals the indistinguishability classes and its expected
// cost equals the example-set cost.
TemporalDecisionTree canonical_tree(const TeSet& ts, const ActionModel& model);

struct BruteLimits {
  int max_situations = 5;
  int max_sensors = 3;
  int max_labels = 4;
};

struct BruteResult {
  Rational min_cost;
  TemporalDecisionTree witness;
};

// Exhaustive minimum over all compatible trees, memoized on
// (subset, earliest usable label). Desk-scale only; enforces the limits.
BruteResult brute_force_min_cost(const TeSet& ts, const ActionModel& model,
                                 const BruteLimits& limits = {});

}  // namespace tdt
