#include "tdt/teset.hpp"

#include <algorithm>
#include <set>

namespace tdt {

TimeAxis::TimeAxis(std::vector<Rational> labels) : labels_(std::move(labels)) {
  if (labels_.empty()) {
    throw Error(Errc::validation, "time axis must be non-empty");
  }
  for (size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i] < 0) {
      throw Error(Errc::validation, "time labels must be non-negative");
    }
    if (i > 0 && !(labels_[i - 1] < labels_[i])) {
      throw Error(Errc::validation, "time labels must be strictly increasing");
    }
  }
}

std::optional<int> TimeAxis::index_of(const Rational& value) const {
  for (size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i] == value) return static_cast<int>(i);
  }
  return std::nullopt;
}

namespace {
int find_name(const std::vector<std::string>& names, std::string_view name) {
  for (size_t i = 0; i < names.size(); ++i) {
    if (names[i] == name) return static_cast<int>(i);
  }
  return -1;
}
}  // namespace

int TeSet::sensor_index(std::string_view name) const { return find_name(sensors, name); }
int TeSet::value_index(std::string_view name) const { return find_name(alphabet, name); }

int TeSet::situation_index(std::string_view name) const {
  for (size_t i = 0; i < situations.size(); ++i) {
    if (situations[i].name == name) return static_cast<int>(i);
  }
  return -1;
}

std::optional<int> TeSet::value_at(int sit, Observation obs) const {
  const FaultSituation& s = situations[static_cast<size_t>(sit)];
  if (obs.time > s.deadline) return std::nullopt;
  return s.readings[static_cast<size_t>(obs.sensor)][static_cast<size_t>(obs.time)];
}

int TeSet::value(int sit, Observation obs) const {
  auto v = value_at(sit, obs);
  if (!v) {
    throw Error(Errc::undefined_reading,
                "no reading for situation '" + situations[static_cast<size_t>(sit)].name +
                    "' at " + observation_name(obs) + " (past deadline " +
                    format_rational(axis[situations[static_cast<size_t>(sit)].deadline]) + ")");
  }
  return *v;
}

const Rational& TeSet::prior(int sit) const {
  if (priors.size() != situations.size()) {
    throw Error(Errc::bad_precondition, "priors not resolved; call resolve_priors()");
  }
  return priors[static_cast<size_t>(sit)];
}

SituationSet TeSet::all_situations() const {
  SituationSet all(situations.size());
  for (size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
  return all;
}

std::vector<Observation> TeSet::all_observations() const {
  std::vector<Observation> grid;
  grid.reserve(sensors.size() * static_cast<size_t>(axis.size()));
  for (int t = 0; t < axis.size(); ++t) {
    for (int s = 0; s < static_cast<int>(sensors.size()); ++s) {
      grid.push_back({s, t});
    }
  }
  return grid;
}

void TeSet::resolve_priors() {
  priors.clear();
  priors.reserve(situations.size());
  bool any_declared = std::any_of(situations.begin(), situations.end(),
                                  [](const FaultSituation& s) { return s.declared_prior.has_value(); });
  if (!any_declared) {
    Rational uniform = Rational(1) / Rational(static_cast<int>(situations.size()));
    priors.assign(situations.size(), uniform);
    return;
  }
  Rational sum = 0;
  for (const FaultSituation& s : situations) {
    priors.push_back(s.declared_prior.value_or(Rational(0)));
    sum += priors.back();
  }
  // Normalize away sub-tolerance drift so downstream arithmetic stays exact.
  if (sum != 0) {
    for (Rational& p : priors) p /= sum;
  }
}

std::string TeSet::observation_name(Observation obs) const {
  return sensors[static_cast<size_t>(obs.sensor)] + "@" + format_rational(axis[obs.time]);
}

ValidationReport validate(const TeSet& ts) {
  ValidationReport report;
  if (ts.situations.empty()) {
    report.error("situations", "at least one fault situation is required");
  }
  if (ts.alphabet.empty()) {
    report.error("values", "value alphabet must be non-empty");
  }
  {
    std::set<std::string> seen;
    for (const std::string& s : ts.sensors) {
      if (!seen.insert(s).second) report.error("sensors", "duplicate sensor '" + s + "'");
    }
  }
  {
    std::set<std::string> seen;
    for (const std::string& v : ts.alphabet) {
      if (!seen.insert(v).second) report.error("values", "duplicate value '" + v + "'");
    }
  }
  if (ts.nominal < 0 || ts.nominal >= static_cast<int>(ts.alphabet.size())) {
    report.error("nominal", "nominal value is not in the alphabet");
  }

  std::set<std::string> names;
  bool any_prior = false;
  bool all_prior = true;
  Rational prior_sum = 0;
  for (size_t i = 0; i < ts.situations.size(); ++i) {
    const FaultSituation& sit = ts.situations[i];
    const std::string where = "situations[" + sit.name + "]";
    if (!names.insert(sit.name).second) {
      report.error(where, "duplicate situation name");
    }
    if (sit.deadline < 0 || sit.deadline >= ts.axis.size()) {
      report.error(where + ".deadline", "deadline is not a declared time label");
      continue;
    }
    if (sit.declared_prior) {
      any_prior = true;
      prior_sum += *sit.declared_prior;
      if (*sit.declared_prior < 0) report.error(where + ".prob", "prior must be non-negative");
    } else {
      all_prior = false;
    }
    if (sit.readings.size() != ts.sensors.size()) {
      report.error(where + ".readings", "readings must cover every declared sensor");
      continue;
    }
    size_t expected_len = static_cast<size_t>(sit.deadline) + 1;
    for (size_t s = 0; s < sit.readings.size(); ++s) {
      const std::string sensor_where = where + ".readings." + ts.sensors[s];
      if (sit.readings[s].size() > expected_len) {
        report.error(sensor_where, "readings extend past the deadline " +
                                       format_rational(ts.axis[sit.deadline]));
      } else if (sit.readings[s].size() < expected_len) {
        report.error(sensor_where, "readings missing up to the deadline");
      }
      for (int v : sit.readings[s]) {
        if (v < 0 || v >= static_cast<int>(ts.alphabet.size())) {
          report.error(sensor_where, "reading value is not in the alphabet");
          break;
        }
      }
    }
    // Detection alignment: time 0 is anchored at the first deviating snapshot.
    bool deviates = false;
    for (size_t s = 0; s < sit.readings.size() && !deviates; ++s) {
      if (!sit.readings[s].empty() && sit.readings[s][0] != ts.nominal) deviates = true;
    }
    if (!deviates && !ts.sensors.empty()) {
      report.warn(where, "all sensors read the nominal value at time " +
                             format_rational(ts.axis[0]) +
                             "; detection time looks misaligned");
    }
  }
  if (any_prior) {
    if (!all_prior) {
      report.error("situations", "either every situation declares prob or none does");
    } else {
      Rational drift = prior_sum - 1;
      if (drift < 0) drift = -drift;
      if (drift > Rational(1, 1000000000)) {
        report.error("situations", "priors do not sum to 1 (got " + format_rational(prior_sum) + ")");
      }
    }
  }
  return report;
}

int global_deadline(const TeSet& ts, std::span<const int> subset) {
  if (subset.empty()) {
    throw Error(Errc::empty_subset, "global deadline of an empty subset");
  }
  int dl = ts.situations[static_cast<size_t>(subset[0])].deadline;
  for (int sit : subset) {
    dl = std::min(dl, ts.situations[static_cast<size_t>(sit)].deadline);
  }
  return dl;
}

std::map<int, SituationSet> split_by_observation(const TeSet& ts, std::span<const int> subset,
                                                 Observation obs) {
  if (obs.time > global_deadline(ts, subset)) {
    throw Error(Errc::bad_precondition,
                "cannot split on " + ts.observation_name(obs) +
                    ": past the subset's global deadline");
  }
  std::map<int, SituationSet> groups;
  for (int sit : subset) {
    groups[ts.value(sit, obs)].push_back(sit);
  }
  return groups;
}

Rational subset_probability(const TeSet& ts, std::span<const int> subset,
                            std::span<const int> within) {
  if (!std::includes(within.begin(), within.end(), subset.begin(), subset.end())) {
    throw Error(Errc::bad_precondition, "subset is not contained in the reference set");
  }
  Rational denom = 0;
  for (int sit : within) denom += ts.prior(sit);
  if (denom == 0) {
    throw Error(Errc::bad_distribution, "reference set has zero probability");
  }
  Rational num = 0;
  for (int sit : subset) num += ts.prior(sit);
  return num / denom;
}

Rational situation_probability(const TeSet& ts, int sit, std::span<const int> within) {
  int single[1] = {sit};
  return subset_probability(ts, single, within);
}

}  // namespace tdt
