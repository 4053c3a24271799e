#include "tdt/synth.hpp"

#include "tdt/oracle.hpp"

#include <algorithm>
#include <cmath>

namespace tdt {

double entropy(std::span<const double> dist) {
  double sum = 0;
  for (double p : dist) {
    if (p < 0) {
      throw Error(Errc::bad_distribution, "negative weight in distribution");
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw Error(Errc::bad_distribution, "distribution does not sum to 1");
  }
  double e = 0;
  for (double p : dist) {
    if (p > 0) e -= p * std::log2(p);
  }
  return e;
}

double set_entropy(const TeSet& ts, std::span<const int> subset) {
  if (subset.empty()) {
    throw Error(Errc::empty_subset, "entropy of an empty subset");
  }
  std::map<std::string, Rational> by_action;
  Rational total = 0;
  for (int sit : subset) {
    by_action[ts.situations[static_cast<size_t>(sit)].action] += ts.prior(sit);
    total += ts.prior(sit);
  }
  if (total == 0) {
    throw Error(Errc::bad_distribution, "subset has zero probability");
  }
  std::vector<double> dist;
  dist.reserve(by_action.size());
  for (const auto& [action, weight] : by_action) {
    (void)action;
    dist.push_back(to_double(weight / total));
  }
  return entropy(dist);
}

double observation_entropy(const TeSet& ts, std::span<const int> subset, Observation obs) {
  if (obs.time > global_deadline(ts, subset)) {
    throw Error(Errc::bad_precondition,
                "observation " + ts.observation_name(obs) + " is past the subset's deadline");
  }
  auto groups = split_by_observation(ts, subset, obs);
  double e = 0;
  for (const auto& [value, members] : groups) {
    (void)value;
    Rational weight = subset_probability(ts, members, subset);
    if (weight == 0) continue;
    e += to_double(weight) * set_entropy(ts, members);
  }
  return e;
}

Observation id3_choose_test(const TeSet& ts, std::span<const int> subset,
                            std::span<const Observation> candidates) {
  if (candidates.empty()) {
    throw Error(Errc::empty_subset, "no candidate observations to choose from");
  }
  std::vector<Observation> order(candidates.begin(), candidates.end());
  std::sort(order.begin(), order.end(), obs_time_order);
  Observation best = order.front();
  double best_entropy = observation_entropy(ts, subset, best);
  for (size_t i = 1; i < order.size(); ++i) {
    double e = observation_entropy(ts, subset, order[i]);
    // Strict improvement beyond rounding noise; ties keep the earlier label.
    if (e < best_entropy - 1e-12) {
      best = order[i];
      best_entropy = e;
    }
  }
  return best;
}

std::vector<Observation> useful_observations(const TeSet& ts, std::span<const int> subset,
                                             std::span<const Observation> within) {
  std::vector<Observation> out;
  for (Observation o : within) {
    auto first = ts.value_at(subset.empty() ? 0 : subset[0], o);
    bool discriminates = false;
    for (int sit : subset) {
      if (ts.value_at(sit, o) != first) {
        discriminates = true;
        break;
      }
    }
    if (discriminates) out.push_back(o);
  }
  std::sort(out.begin(), out.end(), obs_time_order);
  return out;
}

namespace {

// Splits each block on the observed value; sub-blocks inherit
// max(parent tag, observation time).
std::vector<ExtendedPartition::Block> refine(const TeSet& ts,
                                             std::vector<ExtendedPartition::Block> blocks,
                                             Observation obs) {
  std::vector<ExtendedPartition::Block> out;
  for (ExtendedPartition::Block& block : blocks) {
    int tag = std::max(block.tag, obs.time);
    std::map<int, SituationSet> groups;
    for (int sit : block.members) {
      groups[ts.value(sit, obs)].push_back(sit);
    }
    if (groups.size() == 1) {
      block.tag = tag;
      out.push_back(std::move(block));
    } else {
      for (auto& [value, members] : groups) {
        (void)value;
        out.push_back({std::move(members), tag});
      }
    }
  }
  return out;
}

void sort_blocks(std::vector<ExtendedPartition::Block>& blocks) {
  std::sort(blocks.begin(), blocks.end(),
            [](const ExtendedPartition::Block& a, const ExtendedPartition::Block& b) {
              return a.members.front() < b.members.front();
            });
}

}  // namespace

ExtendedPartition quotient_step(const TeSet& ts, const ExtendedPartition& partition,
                                std::span<const Observation> obs, int tlabel) {
  std::vector<Observation> sorted(obs.begin(), obs.end());
  std::sort(sorted.begin(), sorted.end(), obs_time_order);

  std::vector<ExtendedPartition::Block> part = partition.blocks;
  for (Observation o : sorted) {
    if (o.time == tlabel) part = refine(ts, std::move(part), o);
  }
  std::vector<ExtendedPartition::Block> final_blocks;
  while (!part.empty()) {
    std::vector<ExtendedPartition::Block> tmp;
    for (ExtendedPartition::Block& block : part) {
      int newdl = global_deadline(ts, block.members);
      if (newdl > block.tag) {
        std::vector<ExtendedPartition::Block> single;
        single.push_back(std::move(block));
        for (Observation o : sorted) {
          if (o.time > single.front().tag && o.time <= newdl) {
            single = refine(ts, std::move(single), o);
          }
        }
        for (ExtendedPartition::Block& sub : single) {
          sub.tag = newdl;
          tmp.push_back(std::move(sub));
        }
      } else {
        final_blocks.push_back(std::move(block));
      }
    }
    part = std::move(tmp);
  }
  sort_blocks(final_blocks);
  return {std::move(final_blocks)};
}

Rational partition_cost(const TeSet& ts, const ActionModel& model,
                        const ExtendedPartition& partition, std::span<const int> subset) {
  Rational total = 0;
  for (const ExtendedPartition::Block& block : partition.blocks) {
    total +=
        model.compound_cost(act_of_set(ts, block.members, model)) *
        subset_probability(ts, block.members, subset);
  }
  return total;
}

SafeObsScan find_safe_obs(const TeSet& ts, const ActionModel& model, std::span<const int> subset,
                          std::span<const Observation> candidates) {
  if (candidates.empty()) {
    throw Error(Errc::empty_subset, "no candidate observations");
  }
  SafeObsScan out;
  out.t_up = global_deadline(ts, subset);
  out.t_low = candidates[0].time;
  for (Observation o : candidates) out.t_low = std::min(out.t_low, o.time);
  out.t_max = out.t_up;

  // Cost of the undiscriminated single-block partition.
  Rational cost = model.compound_cost(act_of_set(ts, subset, model));
  ExtendedPartition part;
  part.blocks.push_back({SituationSet(subset.begin(), subset.end()), out.t_up});
  for (int t = out.t_up; t >= out.t_low; --t) {
    part = quotient_step(ts, part, candidates, t);
    Rational newcost = partition_cost(ts, model, part, subset);
    out.scan_costs.push_back({t, newcost});
    if (newcost < cost) {
      cost = newcost;
      out.t_max = t;
    }
  }
  for (Observation o : candidates) {
    if (o.time <= out.t_max) out.safe.push_back(o);
  }
  std::sort(out.safe.begin(), out.safe.end(), obs_time_order);
  return out;
}

namespace {

struct Builder {
  const TeSet& ts;
  const ActionModel& model;
  const BuildOptions& opts;

  bool single_action(const SituationSet& subset) const {
    const std::string& first = ts.situations[static_cast<size_t>(subset[0])].action;
    for (int sit : subset) {
      if (ts.situations[static_cast<size_t>(sit)].action != first) return false;
    }
    return true;
  }

  std::unique_ptr<TreeNode> leaf(const SituationSet& subset, BuildCallRecord* rec,
                                 const char* reason) const {
    CompoundAction action = act_of_set(ts, subset, model);
    if (rec) {
      rec->leaf = true;
      rec->leaf_reason = reason;
      rec->leaf_action = model.compound_name(action);
    }
    return TreeNode::make_leaf(std::move(action));
  }

  std::unique_ptr<TreeNode> build(const SituationSet& subset, const std::vector<Observation>& obs) {
    BuildCallRecord* rec = nullptr;
    if (opts.trace) {
      opts.trace->calls.emplace_back();
      rec = &opts.trace->calls.back();
      for (int sit : subset) rec->subset.push_back(ts.situations[static_cast<size_t>(sit)].name);
    }
    if (single_action(subset)) {
      return leaf(subset, rec, "single action");
    }
    int deadline = global_deadline(ts, subset);
    std::vector<Observation> useful = useful_observations(ts, subset, obs);
    std::vector<Observation> valid;
    for (Observation o : useful) {
      if (o.time <= deadline) valid.push_back(o);
    }
    if (rec) {
      rec->deadline = ts.axis[deadline];
      rec->useful_count = static_cast<int>(useful.size());
      rec->valid_count = static_cast<int>(valid.size());
    }
    if (valid.empty()) {
      return leaf(subset, rec, "no valid observations");
    }

    Observation chosen{};
    switch (opts.strategy) {
      case Strategy::id3_naive:
        record_entropies(rec, subset, valid);
        chosen = id3_choose_test(ts, subset, valid);
        break;
      case Strategy::id3_safe: {
        SafeObsScan scan = find_safe_obs(ts, model, subset, useful);
        if (rec) {
          rec->t_max = ts.axis[scan.t_max];
          for (auto& [label, c] : scan.scan_costs) rec->scan.push_back({ts.axis[label], c});
        }
        record_entropies(rec, subset, scan.safe);
        chosen = id3_choose_test(ts, subset, scan.safe);
        break;
      }
      case Strategy::custom: {
        if (!opts.custom_choose) {
          throw Error(Errc::bad_precondition, "custom strategy without a chooser");
        }
        chosen = opts.custom_choose(ts, subset, valid);
        if (std::find(valid.begin(), valid.end(), chosen) == valid.end()) {
          throw Error(Errc::bad_precondition, "custom chooser returned a non-candidate");
        }
        break;
      }
    }
    if (rec) rec->chosen = chosen;

    const Rational next_floor = ts.axis[chosen.time] + opts.latency_k;
    std::vector<Observation> obs_update;
    for (Observation o : useful) {
      if (ts.axis[o.time] >= next_floor) obs_update.push_back(o);
    }

    if (opts.debug_assertions && opts.strategy == Strategy::id3_safe && opts.latency_k == 0) {
      // Discarding past observations must not raise the example-set cost.
      Rational before = teset_expected_cost_of(ts, model, subset, IndistOptions{.observations = obs});
      Rational after =
          teset_expected_cost_of(ts, model, subset, IndistOptions{.observations = obs_update});
      if (before != after) {
        throw Error(Errc::mismatch,
                    "safe selection raised the example-set cost from " + format_rational(before) +
                        " to " + format_rational(after));
      }
    }

    auto node = TreeNode::make_test(chosen.sensor, chosen.time);
    for (auto& [value, members] : split_by_observation(ts, subset, chosen)) {
      node->edges.emplace_back(value, build(members, obs_update));
    }
    return node;
  }

  void record_entropies(BuildCallRecord* rec, const SituationSet& subset,
                        std::span<const Observation> candidates) const {
    if (!rec) return;
    for (Observation o : candidates) {
      rec->candidate_entropies.push_back({o, observation_entropy(ts, subset, o)});
    }
  }
};

}  // namespace

TemporalDecisionTree build_temporal_tree(const TeSet& ts, const ActionModel& model,
                                         const BuildOptions& opts) {
  if (ts.situations.empty()) {
    throw Error(Errc::validation, "cannot build a tree from an empty example set");
  }
  Builder builder{ts, model, opts};
  return TemporalDecisionTree(builder.build(ts.all_situations(), ts.all_observations()));
}

std::vector<std::pair<int, TemporalDecisionTree>> build_forest(const TeSet& ts,
                                                               const ActionModel& model,
                                                               const BuildOptions& opts) {
  std::map<std::string, int> by_name;
  for (size_t s = 0; s < ts.sensors.size(); ++s) by_name[ts.sensors[s]] = static_cast<int>(s);

  std::map<std::string, SituationSet> groups;
  for (int sit = 0; sit < ts.size(); ++sit) {
    const FaultSituation& row = ts.situations[static_cast<size_t>(sit)];
    std::string detector;
    for (const auto& [name, idx] : by_name) {
      if (row.readings[static_cast<size_t>(idx)][0] != ts.nominal) {
        detector = name;
        break;
      }
    }
    if (detector.empty()) {
      throw Error(Errc::validation, "situation '" + row.name +
                                        "' shows no deviating sensor at the first time label; "
                                        "it has no detecting tree");
    }
    groups[detector].push_back(sit);
  }
  Builder builder{ts, model, opts};
  std::vector<std::pair<int, TemporalDecisionTree>> forest;
  for (auto& [name, members] : groups) {
    forest.emplace_back(by_name[name],
                        TemporalDecisionTree(builder.build(members, ts.all_observations())));
  }
  return forest;
}

}  // namespace tdt
