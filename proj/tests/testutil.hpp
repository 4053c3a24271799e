#pragma once

#include "tdt/actions.hpp"
#include "tdt/gen.hpp"
#include "tdt/io.hpp"
#include "tdt/oracle.hpp"
#include "tdt/runtime.hpp"
#include "tdt/synth.hpp"
#include "tdt/tdtree.hpp"
#include "tdt/teset.hpp"

#include <filesystem>
#include <initializer_list>
#include <string>

namespace tdt::test {

inline std::filesystem::path fixture(const std::string& name) {
  return std::filesystem::path(TDT_FIXTURE_DIR) / name;
}

struct Golden {
  TeSet teset;
  ActionModel model;
};

inline Golden load_golden(const std::string& teset_name, const std::string& actions_name) {
  io::LoadedTeSet ts = io::load_teset(fixture(teset_name));
  io::LoadedModel model = io::load_action_model(fixture(actions_name));
  if (!ts.teset || !model.model) {
    throw Error(Errc::validation, "fixture load failed: " + teset_name);
  }
  return {std::move(*ts.teset), std::move(*model.model)};
}

// The 8-situation, 3-sensor reference instance and its action model.
inline const Golden& pressure() {
  static Golden g = load_golden("pressure.teset.json", "pressure.actions.json");
  return g;
}

// The 4-situation, single-sensor instance that trips the naive selector.
inline const Golden& single_sensor() {
  static Golden g = load_golden("single_sensor.teset.json", "single_sensor.actions.json");
  return g;
}

inline SituationSet sits(const TeSet& ts, std::initializer_list<const char*> names) {
  SituationSet out;
  for (const char* name : names) {
    int idx = ts.situation_index(name);
    if (idx < 0) throw Error(Errc::validation, std::string("unknown situation ") + name);
    out.push_back(idx);
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline Observation obs(const TeSet& ts, const char* sensor, int64_t time) {
  int s = ts.sensor_index(sensor);
  auto t = ts.axis.index_of(Rational(time));
  if (s < 0 || !t) throw Error(Errc::validation, "unknown observation in test");
  return {s, *t};
}

inline CompoundAction acts(const ActionModel& model, std::initializer_list<const char*> names) {
  std::vector<int> members;
  for (const char* name : names) members.push_back(model.action_index(name));
  std::sort(members.begin(), members.end());
  return CompoundAction{members};
}

// Leaf partition of a tree as sorted situation-name sets.
inline std::vector<SituationSet> leaf_partition(const TemporalDecisionTree& tree, const TeSet& ts) {
  ExamplesMap map = examples_map(tree, ts);
  std::vector<SituationSet> out;
  for (const TreeNode* l : tree.leaves()) out.push_back(map.at.at(l));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace tdt::test
