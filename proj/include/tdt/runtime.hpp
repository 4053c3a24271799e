#pragma once

#include "tdt/actions.hpp"
#include "tdt/tdtree.hpp"
#include "tdt/teset.hpp"

#include <optional>
#include <vector>

namespace tdt {

// Time-stamped sensor readings, strictly increasing in time. Values are
// alphabet indices; a sensor missing from a snapshot is unobserved.
struct Snapshot {
  Rational time;
  std::vector<std::optional<int>> values;  // indexed by sensor
};

struct SnapshotStream {
  std::vector<Snapshot> snapshots;

  const Snapshot* at(const Rational& time) const;
};

SnapshotStream stream_from_situation(const TeSet& ts, int sit);

struct SimulationReport {
  std::string situation;  // empty when replaying a bare trace
  CompoundAction action;
  Rational decision_time{0};
  std::optional<bool> deadline_met;
  std::vector<std::pair<const TreeNode*, int>> path;  // (inner node, observed value)
};

// Walks the tree over the stream: waits for each node's time label, reads the
// tested sensor, follows the matching edge. Time only moves forward; with a
// positive latency the next read must be at least latency_k after the last.
// A value with no outgoing edge raises a missing-edge error whose message
// suggests the subtree's merged action as a fallback; the executor never acts
// on its own.
SimulationReport run_tree(const TemporalDecisionTree& tree, const TeSet& ts,
                          const SnapshotStream& stream, const ActionModel& model,
                          const Rational& latency_k = Rational(0));

// One report per situation, with deadline compliance filled in.
std::vector<SimulationReport> simulate_all(const TemporalDecisionTree& tree, const TeSet& ts,
                                           const ActionModel& model,
                                           const Rational& latency_k = Rational(0));

}  // namespace tdt
