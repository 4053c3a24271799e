#pragma once

#include "tdt/errors.hpp"
#include "tdt/rational.hpp"

#include <compare>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace tdt {

// A subset of situations, as sorted indices into TeSet::situations.
using SituationSet = std::vector<int>;

// A (sensor, time label) probe. Both fields are indices into the owning
// te-set's declaration tables.
struct Observation {
  int sensor = 0;
  int time = 0;
  friend auto operator<=>(const Observation&, const Observation&) = default;
};

// Scan order used by the selectors: earliest time label first, then sensor
// declaration order.
inline bool obs_time_order(Observation a, Observation b) {
  return a.time != b.time ? a.time < b.time : a.sensor < b.sensor;
}

// Strictly ascending, non-empty sequence of non-negative time values.
class TimeAxis {
 public:
  TimeAxis() : labels_{Rational(0)} {}
  explicit TimeAxis(std::vector<Rational> labels);

  int size() const { return static_cast<int>(labels_.size()); }
  const Rational& operator[](int i) const { return labels_[static_cast<size_t>(i)]; }
  const std::vector<Rational>& labels() const { return labels_; }
  std::optional<int> index_of(const Rational& value) const;

 private:
  std::vector<Rational> labels_;
};

// One row of the example table. Readings are prefix sequences: sensor values
// exist exactly for labels up to and including the deadline; absence encodes
// "undefined past the deadline".
struct FaultSituation {
  std::string name;
  std::string action;
  int deadline = 0;  // axis index
  std::optional<Rational> declared_prior;
  std::vector<std::vector<int>> readings;  // [sensor][label index 0..deadline]
};

struct TeSet {
  std::vector<std::string> sensors;
  TimeAxis axis;
  std::vector<std::string> alphabet;
  int nominal = 0;  // alphabet index of the normal reading
  std::vector<FaultSituation> situations;
  std::vector<Rational> priors;  // resolved; see resolve_priors()

  int size() const { return static_cast<int>(situations.size()); }
  int sensor_index(std::string_view name) const;
  int value_index(std::string_view name) const;
  int situation_index(std::string_view name) const;

  // Reading lookup; nullopt when the observation lies past the situation's
  // deadline.
  std::optional<int> value_at(int sit, Observation obs) const;

  // Throwing variant of value_at (undefined-reading error past the deadline).
  int value(int sit, Observation obs) const;

  const Rational& prior(int sit) const;
  SituationSet all_situations() const;
  std::vector<Observation> all_observations() const;  // full sensor x label grid

  // Fills `priors` from the declared column, or uniformly when absent. Does
  // not validate; call validate() first on untrusted input.
  void resolve_priors();

  std::string observation_name(Observation obs) const;
};

ValidationReport validate(const TeSet& ts);

// min over the subset's deadlines, as an axis index.
int global_deadline(const TeSet& ts, std::span<const int> subset);

// Groups the subset by the value observed at `obs`; keys ascend in alphabet
// declaration order. Requires obs.time <= global_deadline(subset).
std::map<int, SituationSet> split_by_observation(const TeSet& ts, std::span<const int> subset,
                                                 Observation obs);

Rational subset_probability(const TeSet& ts, std::span<const int> subset,
                            std::span<const int> within);
Rational situation_probability(const TeSet& ts, int sit, std::span<const int> within);

}  // namespace tdt
