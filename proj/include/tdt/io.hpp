#pragma once

#include "tdt/actions.hpp"
#include "tdt/runtime.hpp"
#include "tdt/tdtree.hpp"
#include "tdt/teset.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <string>

namespace tdt::io {

using json = nlohmann::json;

// Loaders collect every problem into the report; the object is only present
// when there are no errors. Unknown keys are rejected.
struct LoadedTeSet {
  std::optional<TeSet> teset;
  ValidationReport report;
};
LoadedTeSet parse_teset(const json& doc);
LoadedTeSet load_teset(const std::filesystem::path& path);
json teset_to_json(const TeSet& ts);

struct LoadedModel {
  std::optional<ActionModel> model;
  ValidationReport report;
};
LoadedModel parse_action_model(const json& doc);
LoadedModel load_action_model(const std::filesystem::path& path);
json action_model_to_json(const ActionModel& model);

// Trees are stored with sensor/value/action names and numeric time labels;
// loading binds them against a te-set and action model. Structural problems
// throw a validation error.
TemporalDecisionTree parse_tree(const json& doc, const TeSet& ts, const ActionModel& model);
TemporalDecisionTree load_tree(const std::filesystem::path& path, const TeSet& ts,
                               const ActionModel& model);
json tree_to_json(const TemporalDecisionTree& tree, const TeSet& ts, const ActionModel& model);
std::string tree_to_dot(const TemporalDecisionTree& tree, const TeSet& ts,
                        const ActionModel& model);

SnapshotStream parse_trace(const json& doc, const TeSet& ts);
SnapshotStream load_trace(const std::filesystem::path& path, const TeSet& ts);

json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace tdt::io
