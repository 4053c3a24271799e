#include "tdt/oracle.hpp"

#include <algorithm>
#include <functional>
#include <map>

namespace tdt {

namespace {

std::vector<Observation> observation_pool(const TeSet& ts, const IndistOptions& opts) {
  std::vector<Observation> pool = opts.observations ? *opts.observations : ts.all_observations();
  std::sort(pool.begin(), pool.end(), obs_time_order);
  return pool;
}

bool indistinguishable_in(const TeSet& ts, int a, int b, std::span<const Observation> pool,
                          DeadlineBoundary boundary) {
  int binding = std::min(ts.situations[static_cast<size_t>(a)].deadline,
                         ts.situations[static_cast<size_t>(b)].deadline);
  for (Observation o : pool) {
    if (o.time > binding) break;  // pool sorted by time
    if (boundary == DeadlineBoundary::strict && o.time == binding) continue;
    if (ts.value(a, o) != ts.value(b, o)) return false;
  }
  return true;
}

std::vector<SituationSet> classes_of(const TeSet& ts, std::span<const int> subset,
                                     const IndistOptions& opts) {
  std::vector<Observation> pool = observation_pool(ts, opts);
  std::vector<int> members(subset.begin(), subset.end());
  std::vector<int> parent(members.size());
  for (size_t i = 0; i < parent.size(); ++i) parent[i] = static_cast<int>(i);
  std::function<int(int)> find = [&](int x) {
    while (parent[static_cast<size_t>(x)] != x) {
      parent[static_cast<size_t>(x)] = parent[static_cast<size_t>(parent[static_cast<size_t>(x)])];
      x = parent[static_cast<size_t>(x)];
    }
    return x;
  };
  for (size_t i = 0; i < members.size(); ++i) {
    for (size_t j = i + 1; j < members.size(); ++j) {
      if (indistinguishable_in(ts, members[i], members[j], pool, opts.boundary)) {
        parent[find(static_cast<int>(i))] = find(static_cast<int>(j));
      }
    }
  }
  std::map<int, SituationSet> grouped;
  for (size_t i = 0; i < members.size(); ++i) {
    grouped[find(static_cast<int>(i))].push_back(members[i]);
  }
  std::vector<SituationSet> out;
  for (auto& [root, cls] : grouped) {
    (void)root;
    std::sort(cls.begin(), cls.end());
    out.push_back(std::move(cls));
  }
  std::sort(out.begin(), out.end(),
            [](const SituationSet& a, const SituationSet& b) { return a.front() < b.front(); });
  return out;
}

}  // namespace

bool pairwise_indistinguishable(const TeSet& ts, int a, int b, const IndistOptions& opts) {
  std::vector<Observation> pool = observation_pool(ts, opts);
  return indistinguishable_in(ts, a, b, pool, opts.boundary);
}

std::vector<SituationSet> indist_classes(const TeSet& ts, const IndistOptions& opts) {
  return classes_of(ts, ts.all_situations(), opts);
}

std::vector<SituationSet> indist_classes_of(const TeSet& ts, std::span<const int> subset,
                                            const IndistOptions& opts) {
  return classes_of(ts, subset, opts);
}

Rational teset_expected_cost(const TeSet& ts, const ActionModel& model,
                             const IndistOptions& opts) {
  return teset_expected_cost_of(ts, model, ts.all_situations(), opts);
}

Rational teset_expected_cost_of(const TeSet& ts, const ActionModel& model,
                                std::span<const int> subset, const IndistOptions& opts) {
  Rational total = 0;
  for (const SituationSet& cls : classes_of(ts, subset, opts)) {
    total += model.compound_cost(act_of_set(ts, cls, model)) *
             subset_probability(ts, cls, subset);
  }
  return total;
}

TemporalDecisionTree canonical_tree(const TeSet& ts, const ActionModel& model) {
  std::vector<Observation> order = ts.all_observations();
  std::sort(order.begin(), order.end(), [&](Observation a, Observation b) {
    if (a.time != b.time) return a.time < b.time;
    return ts.sensors[static_cast<size_t>(a.sensor)] < ts.sensors[static_cast<size_t>(b.sensor)];
  });
  std::function<std::unique_ptr<TreeNode>(const SituationSet&, size_t)> grow =
      [&](const SituationSet& subset, size_t level) -> std::unique_ptr<TreeNode> {
    if (level == order.size() ||
        global_deadline(ts, subset) < order[level].time) {
      return TreeNode::make_leaf(act_of_set(ts, subset, model));
    }
    Observation o = order[level];
    auto node = TreeNode::make_test(o.sensor, o.time);
    for (auto& [value, members] : split_by_observation(ts, subset, o)) {
      node->edges.emplace_back(value, grow(members, level + 1));
    }
    return node;
  };
  return TemporalDecisionTree(grow(ts.all_situations(), 0));
}

namespace {

struct BruteSearch {
  const TeSet& ts;
  const ActionModel& model;
  std::vector<Observation> grid;  // sorted by (time, sensor)

  struct Entry {
    Rational cost;
    std::optional<Observation> choice;  // nullopt = stop with a leaf
  };
  std::map<std::pair<uint32_t, int>, Entry> memo;

  static uint32_t mask_of(const SituationSet& subset) {
    uint32_t m = 0;
    for (int sit : subset) m |= 1u << sit;
    return m;
  }

  const Entry& best(const SituationSet& subset, int floor) {
    auto key = std::make_pair(mask_of(subset), floor);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;

    Entry entry{model.compound_cost(act_of_set(ts, subset, model)), std::nullopt};
    int deadline = global_deadline(ts, subset);
    for (Observation o : grid) {
      if (o.time < floor || o.time > deadline) continue;
      auto groups = split_by_observation(ts, subset, o);
      if (groups.size() < 2) continue;
      Rational total = 0;
      for (auto& [value, members] : groups) {
        (void)value;
        total += subset_probability(ts, members, subset) * best(members, o.time).cost;
      }
      if (total < entry.cost) {
        entry.cost = total;
        entry.choice = o;
      }
    }
    return memo.emplace(key, std::move(entry)).first->second;
  }

  std::unique_ptr<TreeNode> rebuild(const SituationSet& subset, int floor) {
    const Entry& entry = best(subset, floor);
    if (!entry.choice) {
      return TreeNode::make_leaf(act_of_set(ts, subset, model));
    }
    Observation o = *entry.choice;
    auto node = TreeNode::make_test(o.sensor, o.time);
    for (auto& [value, members] : split_by_observation(ts, subset, o)) {
      node->edges.emplace_back(value, rebuild(members, o.time));
    }
    return node;
  }
};

}  // namespace

BruteResult brute_force_min_cost(const TeSet& ts, const ActionModel& model,
                                 const BruteLimits& limits) {
  if (ts.size() > limits.max_situations ||
      static_cast<int>(ts.sensors.size()) > limits.max_sensors ||
      ts.axis.size() > limits.max_labels) {
    throw Error(Errc::limits, "instance exceeds the exhaustive-search limits (" +
                                  std::to_string(limits.max_situations) + " situations, " +
                                  std::to_string(limits.max_sensors) + " sensors, " +
                                  std::to_string(limits.max_labels) + " labels)");
  }
  BruteSearch search{ts, model, ts.all_observations(), {}};
  std::sort(search.grid.begin(), search.grid.end(), obs_time_order);
  SituationSet all = ts.all_situations();
  Rational min_cost = search.best(all, 0).cost;
  return {min_cost, TemporalDecisionTree(search.rebuild(all, 0))};
}

}  // namespace tdt
