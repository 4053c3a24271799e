#pragma once

#include "tdt/actions.hpp"
#include "tdt/tdtree.hpp"
#include "tdt/teset.hpp"

#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace tdt {

double entropy(std::span<const double> dist);

// Entropy of the basic-action distribution over the subset, prior-weighted.
double set_entropy(const TeSet& ts, std::span<const int> subset);

// Probability-weighted average of the branch entropies after splitting on
// obs. Requires obs.time <= global_deadline(subset).
double observation_entropy(const TeSet& ts, std::span<const int> subset, Observation obs);

// Minimum-entropy candidate; ties go to the earliest time label, then to
// sensor declaration order.
Observation id3_choose_test(const TeSet& ts, std::span<const int> subset,
                            std::span<const Observation> candidates);

// Observations in `within` that take at least two distinct values on the
// subset. A reading missing past a situation's deadline compares as its own
// pseudo-value (distinct from every declared value, equal to itself).
std::vector<Observation> useful_observations(const TeSet& ts, std::span<const int> subset,
                                             std::span<const Observation> within);

// Partition blocks tagged with the highest time label used to build them.
struct ExtendedPartition {
  struct Block {
    SituationSet members;
    int tag = 0;  // axis index
  };
  std::vector<Block> blocks;
};

// One backward-scan step: refine every block by the observations of `obs` at
// exactly `tlabel`, then repeatedly re-split blocks whose global deadline
// moved past their tag, using observations from the same set.
ExtendedPartition quotient_step(const TeSet& ts, const ExtendedPartition& partition,
                                std::span<const Observation> obs, int tlabel);

// Expected cost of a partition of `subset`: merged-action cost per block,
// weighted by block probability within the subset.
Rational partition_cost(const TeSet& ts, const ActionModel& model,
                        const ExtendedPartition& partition, std::span<const int> subset);

struct SafeObsScan {
  std::vector<Observation> safe;  // candidates with time <= t_max, in scan order
  int t_max = 0;                  // axis index of the latest safe label
  int t_low = 0;
  int t_up = 0;
  std::vector<std::pair<int, Rational>> scan_costs;  // (label, cost), labels descending
};

// Backward scan over time labels from the subset's global deadline down to
// the earliest candidate label; t_max is the last label at which the running
// partition cost strictly decreased. Candidates must be the useful
// observations, not pre-filtered by deadline.
SafeObsScan find_safe_obs(const TeSet& ts, const ActionModel& model, std::span<const int> subset,
                          std::span<const Observation> candidates);

enum class Strategy { id3_safe, id3_naive, custom };

// Per-call record used by the report command and the tests.
struct BuildCallRecord {
  std::vector<std::string> subset;
  std::optional<Rational> deadline;
  int useful_count = 0;
  int valid_count = 0;
  bool leaf = false;
  std::string leaf_reason;
  std::string leaf_action;
  std::optional<Rational> t_max;
  std::vector<std::pair<Rational, Rational>> scan;              // (label, partition cost)
  std::vector<std::pair<Observation, double>> candidate_entropies;  // selector input
  std::optional<Observation> chosen;
};

struct BuildTrace {
  std::vector<BuildCallRecord> calls;
};

using ChooseHook =
    std::function<Observation(const TeSet&, std::span<const int>, std::span<const Observation>)>;

struct BuildOptions {
  Strategy strategy = Strategy::id3_safe;
  Rational latency_k = Rational(0);
  bool debug_assertions = false;
  ChooseHook custom_choose;  // consulted when strategy == custom; gets the valid observations
  BuildTrace* trace = nullptr;
};

TemporalDecisionTree build_temporal_tree(const TeSet& ts, const ActionModel& model,
                                         const BuildOptions& opts = {});

// One tree per detecting sensor: situations grouped by the lexicographically
// first sensor deviating from nominal at the first time label.
std::vector<std::pair<int, TemporalDecisionTree>> build_forest(const TeSet& ts,
                                                               const ActionModel& model,
                                                               const BuildOptions& opts = {});

}  // namespace tdt
