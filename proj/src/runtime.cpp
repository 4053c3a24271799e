#include "tdt/runtime.hpp"

#include <functional>
#include <set>

namespace tdt {

const Snapshot* SnapshotStream::at(const Rational& time) const {
  for (const Snapshot& s : snapshots) {
    if (s.time == time) return &s;
  }
  return nullptr;
}

SnapshotStream stream_from_situation(const TeSet& ts, int sit) {
  const FaultSituation& row = ts.situations[static_cast<size_t>(sit)];
  SnapshotStream stream;
  for (int t = 0; t <= row.deadline; ++t) {
    Snapshot snap;
    snap.time = ts.axis[t];
    snap.values.resize(ts.sensors.size());
    for (size_t s = 0; s < ts.sensors.size(); ++s) {
      snap.values[s] = row.readings[s][static_cast<size_t>(t)];
    }
    stream.snapshots.push_back(std::move(snap));
  }
  return stream;
}

namespace {

// Merge of every action reachable below the node; the fallback suggestion
// when execution falls off the tree.
CompoundAction subtree_merged_action(const TreeNode* node, const ActionModel& model) {
  std::set<int> pool;
  std::function<void(const TreeNode*)> walk = [&](const TreeNode* n) {
    if (n->is_leaf()) {
      pool.insert(n->action.members.begin(), n->action.members.end());
      return;
    }
    for (const auto& [value, child] : n->edges) {
      (void)value;
      walk(child.get());
    }
  };
  walk(node);
  std::vector<int> all(pool.begin(), pool.end());
  return model.merge(all);
}

}  // namespace

SimulationReport run_tree(const TemporalDecisionTree& tree, const TeSet& ts,
                          const SnapshotStream& stream, const ActionModel& model,
                          const Rational& latency_k) {
  if (tree.empty()) {
    throw Error(Errc::bad_precondition, "cannot run an empty tree");
  }
  SimulationReport report;
  const TreeNode* node = tree.root();
  std::optional<Rational> earliest_next;
  while (!node->is_leaf()) {
    const Rational& when = ts.axis[node->time];
    if (earliest_next && when < *earliest_next) {
      throw Error(Errc::bad_precondition,
                  "tree asks to read " + ts.observation_name({node->sensor, node->time}) +
                      " before the agent can move on (earliest " +
                      format_rational(*earliest_next) + ")");
    }
    const Snapshot* snap = stream.at(when);
    if (!snap) {
      throw Error(Errc::missing_snapshot,
                  "stream has no snapshot at time " + format_rational(when));
    }
    std::optional<int> observed = snap->values[static_cast<size_t>(node->sensor)];
    if (!observed) {
      throw Error(Errc::missing_snapshot,
                  "snapshot at time " + format_rational(when) + " does not cover sensor '" +
                      ts.sensors[static_cast<size_t>(node->sensor)] + "'");
    }
    const TreeNode* next = nullptr;
    for (const auto& [value, child] : node->edges) {
      if (value == *observed) {
        next = child.get();
        break;
      }
    }
    if (!next) {
      throw Error(Errc::missing_edge,
                  "no edge for value '" + ts.alphabet[static_cast<size_t>(*observed)] + "' at " +
                      ts.observation_name({node->sensor, node->time}) + "; fallback suggestion: " +
                      model.compound_name(subtree_merged_action(node, model)));
    }
    report.path.push_back({node, *observed});
    report.decision_time = when;
    earliest_next = when + latency_k;
    node = next;
  }
  report.action = node->action;
  if (report.path.empty()) report.decision_time = Rational(0);
  return report;
}

std::vector<SimulationReport> simulate_all(const TemporalDecisionTree& tree, const TeSet& ts,
                                           const ActionModel& model, const Rational& latency_k) {
  std::vector<SimulationReport> reports;
  reports.reserve(static_cast<size_t>(ts.size()));
  for (int sit = 0; sit < ts.size(); ++sit) {
    SnapshotStream stream = stream_from_situation(ts, sit);
    SimulationReport report = run_tree(tree, ts, stream, model, latency_k);
    report.situation = ts.situations[static_cast<size_t>(sit)].name;
    report.deadline_met =
        report.decision_time <= ts.axis[ts.situations[static_cast<size_t>(sit)].deadline];
    reports.push_back(std::move(report));
  }
  return reports;
}

}  // namespace tdt
