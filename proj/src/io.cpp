#include "tdt/io.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace tdt::io {

namespace {

void expect_keys(const json& obj, std::initializer_list<const char*> allowed,
                 const std::string& where, ValidationReport& report) {
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    if (std::find_if(allowed.begin(), allowed.end(),
                     [&](const char* k) { return key == k; }) == allowed.end()) {
      report.error(where, "unknown key '" + key + "'");
    }
  }
}

std::optional<Rational> parse_number(const json& v) {
  if (v.is_number_integer()) return Rational(v.get<int64_t>());
  if (v.is_number_unsigned()) return Rational(v.get<uint64_t>());
  if (v.is_number_float()) return rational_from_double(v.get<double>());
  return std::nullopt;
}

json rational_to_json(const Rational& r) {
  BigInt num = boost::multiprecision::numerator(r);
  if (boost::multiprecision::denominator(r) == 1 &&
      num >= std::numeric_limits<int64_t>::min() && num <= std::numeric_limits<int64_t>::max()) {
    return num.convert_to<int64_t>();
  }
  return to_double(r);
}

}  // namespace

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(Errc::validation, "cannot open '" + path.string() + "'");
  }
  json doc = json::parse(in, nullptr, false);
  if (doc.is_discarded()) {
    throw Error(Errc::validation, "'" + path.string() + "' is not well-formed JSON");
  }
  return doc;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) {
    throw Error(Errc::validation, "cannot write '" + path.string() + "'");
  }
  out << text;
}

LoadedTeSet parse_teset(const json& doc) {
  LoadedTeSet out;
  ValidationReport& report = out.report;
  if (!doc.is_object()) {
    report.error("document", "te-set file must be a JSON object");
    return out;
  }
  expect_keys(doc, {"time_labels", "sensors", "values", "nominal", "situations"}, "document",
              report);
  TeSet ts;

  if (!doc.contains("time_labels") || !doc["time_labels"].is_array() ||
      doc["time_labels"].empty()) {
    report.error("time_labels", "required non-empty array of numbers");
  } else {
    std::vector<Rational> labels;
    for (const json& v : doc["time_labels"]) {
      auto r = parse_number(v);
      if (!r) {
        report.error("time_labels", "entries must be numbers");
        break;
      }
      labels.push_back(*r);
    }
    if (report.ok()) {
      try {
        ts.axis = TimeAxis(std::move(labels));
      } catch (const Error& e) {
        report.error("time_labels", e.what());
      }
    }
  }
  if (doc.contains("sensors") && doc["sensors"].is_array()) {
    for (const json& v : doc["sensors"]) {
      if (!v.is_string()) {
        report.error("sensors", "entries must be strings");
        break;
      }
      ts.sensors.push_back(v.get<std::string>());
    }
  } else {
    report.error("sensors", "required array of strings");
  }
  if (doc.contains("values") && doc["values"].is_array()) {
    for (const json& v : doc["values"]) {
      if (!v.is_string()) {
        report.error("values", "entries must be strings");
        break;
      }
      ts.alphabet.push_back(v.get<std::string>());
    }
  } else {
    report.error("values", "required array of strings");
  }
  if (doc.contains("nominal") && doc["nominal"].is_string()) {
    ts.nominal = ts.value_index(doc["nominal"].get<std::string>());
    if (ts.nominal < 0) report.error("nominal", "not one of the declared values");
  } else {
    report.error("nominal", "required string");
  }
  if (!doc.contains("situations") || !doc["situations"].is_array()) {
    report.error("situations", "required array");
    return out;
  }
  for (const json& row : doc["situations"]) {
    FaultSituation sit;
    std::string where = "situations[" + std::to_string(ts.situations.size()) + "]";
    if (!row.is_object()) {
      report.error(where, "must be an object");
      continue;
    }
    expect_keys(row, {"name", "action", "deadline", "prob", "readings"}, where, report);
    if (row.contains("name") && row["name"].is_string()) {
      sit.name = row["name"].get<std::string>();
      where = "situations[" + sit.name + "]";
    } else {
      report.error(where, "missing name");
    }
    if (row.contains("action") && row["action"].is_string()) {
      sit.action = row["action"].get<std::string>();
    } else {
      report.error(where, "missing action");
    }
    if (row.contains("deadline")) {
      auto r = parse_number(row["deadline"]);
      std::optional<int> idx = r ? ts.axis.index_of(*r) : std::nullopt;
      if (!idx) {
        report.error(where + ".deadline", "deadline is not a declared time label");
        continue;
      }
      sit.deadline = *idx;
    } else {
      report.error(where, "missing deadline");
      continue;
    }
    if (row.contains("prob")) {
      auto r = parse_number(row["prob"]);
      if (!r) {
        report.error(where + ".prob", "must be a number");
      } else {
        sit.declared_prior = *r;
      }
    }
    sit.readings.assign(ts.sensors.size(), {});
    if (!row.contains("readings") || !row["readings"].is_object()) {
      report.error(where, "missing readings");
      continue;
    }
    for (const auto& [sensor, cells] : row["readings"].items()) {
      int s = ts.sensor_index(sensor);
      if (s < 0) {
        report.error(where + ".readings", "unknown sensor '" + sensor + "'");
        continue;
      }
      if (!cells.is_array()) {
        report.error(where + ".readings." + sensor, "must be an array of values");
        continue;
      }
      for (const json& cell : cells) {
        int v = cell.is_string() ? ts.value_index(cell.get<std::string>()) : -1;
        if (v < 0) {
          report.error(where + ".readings." + sensor,
                       "value " + cell.dump() + " is not in the alphabet");
          v = 0;  // keep shape; the error already fails the load
        }
        sit.readings[static_cast<size_t>(s)].push_back(v);
      }
    }
    ts.situations.push_back(std::move(sit));
  }
  if (!report.ok()) return out;
  report.merge(validate(ts));
  if (!report.ok()) return out;
  ts.resolve_priors();
  out.teset = std::move(ts);
  return out;
}

LoadedTeSet load_teset(const std::filesystem::path& path) {
  return parse_teset(read_json_file(path));
}

json teset_to_json(const TeSet& ts) {
  json doc;
  doc["time_labels"] = json::array();
  for (const Rational& t : ts.axis.labels()) doc["time_labels"].push_back(rational_to_json(t));
  doc["sensors"] = ts.sensors;
  doc["values"] = ts.alphabet;
  doc["nominal"] = ts.alphabet[static_cast<size_t>(ts.nominal)];
  doc["situations"] = json::array();
  for (const FaultSituation& sit : ts.situations) {
    json row;
    row["name"] = sit.name;
    row["action"] = sit.action;
    row["deadline"] = rational_to_json(ts.axis[sit.deadline]);
    if (sit.declared_prior) row["prob"] = rational_to_json(*sit.declared_prior);
    json readings = json::object();
    for (size_t s = 0; s < ts.sensors.size(); ++s) {
      json cells = json::array();
      for (int v : sit.readings[s]) cells.push_back(ts.alphabet[static_cast<size_t>(v)]);
      readings[ts.sensors[s]] = std::move(cells);
    }
    row["readings"] = std::move(readings);
    doc["situations"].push_back(std::move(row));
  }
  return doc;
}

LoadedModel parse_action_model(const json& doc) {
  LoadedModel out;
  ValidationReport& report = out.report;
  if (!doc.is_object()) {
    report.error("document", "action-model file must be a JSON object");
    return out;
  }
  expect_keys(doc, {"actions", "order", "compound_costs"}, "document", report);
  ActionModel model;
  if (!doc.contains("actions") || !doc["actions"].is_array() || doc["actions"].empty()) {
    report.error("actions", "required non-empty array");
    return out;
  }
  for (const json& entry : doc["actions"]) {
    if (!entry.is_object() || !entry.contains("name") || !entry.contains("cost")) {
      report.error("actions", "entries must be {name, cost}");
      continue;
    }
    expect_keys(entry, {"name", "cost"}, "actions", report);
    auto cost = parse_number(entry["cost"]);
    if (!entry["name"].is_string() || !cost) {
      report.error("actions", "entries must be {name: string, cost: number}");
      continue;
    }
    model.base.names.push_back(entry["name"].get<std::string>());
    model.base.costs.push_back(*cost);
  }
  if (doc.contains("order")) {
    if (!doc["order"].is_array()) {
      report.error("order", "must be an array of [weaker, stronger] pairs");
    } else {
      for (const json& pair : doc["order"]) {
        if (!pair.is_array() || pair.size() != 2 || !pair[0].is_string() || !pair[1].is_string()) {
          report.error("order", "entries must be [weaker, stronger] name pairs");
          continue;
        }
        int w = model.action_index(pair[0].get<std::string>());
        int s = model.action_index(pair[1].get<std::string>());
        if (w < 0 || s < 0) {
          report.error("order", "unknown action in pair " + pair.dump());
          continue;
        }
        model.base.declared_order.push_back({w, s});
      }
    }
  }
  if (doc.contains("compound_costs")) {
    if (!doc["compound_costs"].is_array()) {
      report.error("compound_costs", "must be an array");
    } else {
      for (const json& entry : doc["compound_costs"]) {
        if (!entry.is_object() || !entry.contains("set") || !entry.contains("cost") ||
            !entry["set"].is_array()) {
          report.error("compound_costs", "entries must be {set, cost}");
          continue;
        }
        expect_keys(entry, {"set", "cost"}, "compound_costs", report);
        auto cost = parse_number(entry["cost"]);
        if (!cost) {
          report.error("compound_costs", "cost must be a number");
          continue;
        }
        CompoundCostOverride ov;
        ov.cost = *cost;
        bool bad = false;
        for (const json& name : entry["set"]) {
          int a = name.is_string() ? model.action_index(name.get<std::string>()) : -1;
          if (a < 0) {
            report.error("compound_costs", "unknown action in set " + entry["set"].dump());
            bad = true;
            break;
          }
          ov.set.members.push_back(a);
        }
        if (bad) continue;
        std::sort(ov.set.members.begin(), ov.set.members.end());
        ov.set.members.erase(std::unique(ov.set.members.begin(), ov.set.members.end()),
                             ov.set.members.end());
        model.overrides.push_back(std::move(ov));
      }
    }
  }
  if (!report.ok()) return out;
  model.base.compute_closure();
  report.merge(validate_model(model));
  if (!report.ok()) return out;
  out.model = std::move(model);
  return out;
}

LoadedModel load_action_model(const std::filesystem::path& path) {
  return parse_action_model(read_json_file(path));
}

json action_model_to_json(const ActionModel& model) {
  json doc;
  doc["actions"] = json::array();
  for (int a = 0; a < model.size(); ++a) {
    doc["actions"].push_back({{"name", model.name(a)}, {"cost", rational_to_json(model.cost(a))}});
  }
  doc["order"] = json::array();
  for (auto [w, s] : model.base.declared_order) {
    doc["order"].push_back({model.name(w), model.name(s)});
  }
  if (!model.overrides.empty()) {
    doc["compound_costs"] = json::array();
    for (const CompoundCostOverride& ov : model.overrides) {
      json names = json::array();
      for (int a : ov.set.members) names.push_back(model.name(a));
      doc["compound_costs"].push_back({{"set", names}, {"cost", rational_to_json(ov.cost)}});
    }
  }
  return doc;
}

namespace {

std::unique_ptr<TreeNode> parse_node(const json& doc, const TeSet& ts, const ActionModel& model,
                                     const std::string& where) {
  if (!doc.is_object() || !doc.contains("kind") || !doc["kind"].is_string()) {
    throw Error(Errc::validation, where + ": node must be an object with a 'kind'");
  }
  std::string kind = doc["kind"].get<std::string>();
  ValidationReport keys;
  if (kind == "leaf") {
    expect_keys(doc, {"kind", "actions"}, where, keys);
    if (!keys.ok()) throw Error(Errc::validation, where + ": " + keys.errors.front().message);
    if (!doc.contains("actions") || !doc["actions"].is_array() || doc["actions"].empty()) {
      throw Error(Errc::validation, where + ": leaf needs a non-empty 'actions' array");
    }
    CompoundAction action;
    for (const json& name : doc["actions"]) {
      int a = name.is_string() ? model.action_index(name.get<std::string>()) : -1;
      if (a < 0) {
        throw Error(Errc::validation, where + ": unknown action " + name.dump());
      }
      action.members.push_back(a);
    }
    std::sort(action.members.begin(), action.members.end());
    action.members.erase(std::unique(action.members.begin(), action.members.end()),
                         action.members.end());
    return TreeNode::make_leaf(std::move(action));
  }
  if (kind != "test") {
    throw Error(Errc::validation, where + ": unknown node kind '" + kind + "'");
  }
  expect_keys(doc, {"kind", "sensor", "time", "children"}, where, keys);
  if (!keys.ok()) throw Error(Errc::validation, where + ": " + keys.errors.front().message);
  if (!doc.contains("sensor") || !doc["sensor"].is_string() || !doc.contains("time") ||
      !doc.contains("children") || !doc["children"].is_object()) {
    throw Error(Errc::validation, where + ": test node needs sensor, time and children");
  }
  int sensor = ts.sensor_index(doc["sensor"].get<std::string>());
  if (sensor < 0) {
    throw Error(Errc::validation,
                where + ": unknown sensor '" + doc["sensor"].get<std::string>() + "'");
  }
  auto t = parse_number(doc["time"]);
  std::optional<int> time = t ? ts.axis.index_of(*t) : std::nullopt;
  if (!time) {
    throw Error(Errc::validation, where + ": time " + doc["time"].dump() +
                                      " is not a declared time label");
  }
  auto node = TreeNode::make_test(sensor, *time);
  for (const auto& [value_name, child] : doc["children"].items()) {
    int value = ts.value_index(value_name);
    if (value < 0) {
      throw Error(Errc::validation, where + ": unknown edge value '" + value_name + "'");
    }
    node->edges.emplace_back(value, parse_node(child, ts, model, where + "/" + value_name));
  }
  std::sort(node->edges.begin(), node->edges.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  return node;
}

json node_to_json(const TreeNode* node, const TeSet& ts, const ActionModel& model) {
  json doc;
  if (node->is_leaf()) {
    doc["kind"] = "leaf";
    std::vector<std::string> names;
    for (int a : node->action.members) names.push_back(model.name(a));
    std::sort(names.begin(), names.end());
    doc["actions"] = names;
    return doc;
  }
  doc["kind"] = "test";
  doc["sensor"] = ts.sensors[static_cast<size_t>(node->sensor)];
  doc["time"] = rational_to_json(ts.axis[node->time]);
  json children = json::object();
  for (const auto& [value, child] : node->edges) {
    children[ts.alphabet[static_cast<size_t>(value)]] = node_to_json(child.get(), ts, model);
  }
  doc["children"] = std::move(children);
  return doc;
}

}  // namespace

TemporalDecisionTree parse_tree(const json& doc, const TeSet& ts, const ActionModel& model) {
  TemporalDecisionTree tree(parse_node(doc, ts, model, "root"));
  ValidationReport structure = check_structure(tree, ts, model);
  if (!structure.ok()) {
    throw Error(Errc::validation,
                structure.errors.front().field + ": " + structure.errors.front().message);
  }
  return tree;
}

TemporalDecisionTree load_tree(const std::filesystem::path& path, const TeSet& ts,
                               const ActionModel& model) {
  return parse_tree(read_json_file(path), ts, model);
}

json tree_to_json(const TemporalDecisionTree& tree, const TeSet& ts, const ActionModel& model) {
  if (tree.empty()) {
    throw Error(Errc::bad_precondition, "cannot export an empty tree");
  }
  return node_to_json(tree.root(), ts, model);
}

std::string tree_to_dot(const TemporalDecisionTree& tree, const TeSet& ts,
                        const ActionModel& model) {
  std::ostringstream out;
  out << "digraph tdt {\n";
  int counter = 0;
  std::function<int(const TreeNode*)> emit = [&](const TreeNode* n) -> int {
    int id = counter++;
    if (n->is_leaf()) {
      out << "  n" << id << " [shape=box, label=\"" << model.compound_name(n->action) << "\"];\n";
      return id;
    }
    out << "  n" << id << " [label=\"" << ts.sensors[static_cast<size_t>(n->sensor)] << " @ "
        << format_rational(ts.axis[n->time]) << "\"];\n";
    for (const auto& [value, child] : n->edges) {
      int cid = emit(child.get());
      out << "  n" << id << " -> n" << cid << " [label=\""
          << ts.alphabet[static_cast<size_t>(value)] << "\"];\n";
    }
    return id;
  };
  emit(tree.root());
  out << "}\n";
  return out.str();
}

SnapshotStream parse_trace(const json& doc, const TeSet& ts) {
  if (!doc.is_array()) {
    throw Error(Errc::validation, "trace file must be a JSON array of snapshots");
  }
  SnapshotStream stream;
  ValidationReport keys;
  for (const json& entry : doc) {
    std::string where = "snapshots[" + std::to_string(stream.snapshots.size()) + "]";
    if (!entry.is_object() || !entry.contains("time") || !entry.contains("readings") ||
        !entry["readings"].is_object()) {
      throw Error(Errc::validation, where + ": snapshots are {time, readings}");
    }
    expect_keys(entry, {"time", "readings"}, where, keys);
    if (!keys.ok()) throw Error(Errc::validation, where + ": " + keys.errors.front().message);
    auto t = parse_number(entry["time"]);
    if (!t) {
      throw Error(Errc::validation, where + ": time must be a number");
    }
    Snapshot snap;
    snap.time = *t;
    if (!stream.snapshots.empty() && !(stream.snapshots.back().time < snap.time)) {
      throw Error(Errc::validation, where + ": snapshot times must be strictly increasing");
    }
    snap.values.resize(ts.sensors.size());
    for (const auto& [sensor, value] : entry["readings"].items()) {
      int s = ts.sensor_index(sensor);
      if (s < 0) {
        throw Error(Errc::validation, where + ": unknown sensor '" + sensor + "'");
      }
      int v = value.is_string() ? ts.value_index(value.get<std::string>()) : -1;
      if (v < 0) {
        throw Error(Errc::validation, where + ": value " + value.dump() + " is not in the alphabet");
      }
      snap.values[static_cast<size_t>(s)] = v;
    }
    stream.snapshots.push_back(std::move(snap));
  }
  return stream;
}

SnapshotStream load_trace(const std::filesystem::path& path, const TeSet& ts) {
  return parse_trace(read_json_file(path), ts);
}

}  // namespace tdt::io
