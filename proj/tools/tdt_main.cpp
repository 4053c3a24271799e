#include "tdt/gen.hpp"
#include "tdt/io.hpp"
#include "tdt/oracle.hpp"
#include "tdt/runtime.hpp"
#include "tdt/synth.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <random>

namespace {

using namespace tdt;

constexpr int kExitValidation = 2;
constexpr int kExitIncompatible = 3;
constexpr int kExitLimits = 4;
constexpr int kExitMismatch = 5;

int exit_code_for(const Error& e) {
  switch (e.code()) {
    case Errc::incompatibility:
    case Errc::missing_edge:
    case Errc::missing_snapshot:
      return kExitIncompatible;
    case Errc::limits:
      return kExitLimits;
    case Errc::mismatch:
      return kExitMismatch;
    default:
      return kExitValidation;
  }
}

void print_issues(const ValidationReport& report) {
  for (const ValidationIssue& e : report.errors) {
    std::cerr << "error: " << e.field << ": " << e.message << "\n";
  }
  for (const ValidationIssue& w : report.warnings) {
    std::cerr << "warning: " << w.field << ": " << w.message << "\n";
  }
}

struct Inputs {
  TeSet teset;
  ActionModel model;
};

// Loads and cross-validates both input files; exits with status 2 on any error.
Inputs load_inputs(const std::string& teset_path, const std::string& actions_path) {
  io::LoadedTeSet ts = io::load_teset(teset_path);
  print_issues(ts.report);
  if (!ts.teset) {
    std::exit(kExitValidation);
  }
  io::LoadedModel model = io::load_action_model(actions_path);
  print_issues(model.report);
  if (!model.model) {
    std::exit(kExitValidation);
  }
  ValidationReport cross = validate_model(*model.model, *ts.teset);
  print_issues(cross);
  if (!cross.ok()) {
    std::exit(kExitValidation);
  }
  return {std::move(*ts.teset), std::move(*model.model)};
}

std::string cost_str(const Rational& r) { return format_rational(r); }

std::string entropy_str(double e) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", e);
  return buf;
}

struct CommonOpts {
  std::string strategy = "id3-safe";
  double latency_k = 0.0;
  std::string boundary = "inclusive";
  bool debug_assert = false;
};

BuildOptions build_options(const CommonOpts& common) {
  BuildOptions opts;
  opts.strategy = common.strategy == "id3-naive" ? Strategy::id3_naive : Strategy::id3_safe;
  opts.latency_k = rational_from_double(common.latency_k);
  opts.debug_assertions = common.debug_assert;
  return opts;
}

IndistOptions boundary_options(const CommonOpts& common) {
  IndistOptions opts;
  opts.boundary = common.boundary == "strict" ? DeadlineBoundary::strict
                                              : DeadlineBoundary::inclusive;
  return opts;
}

void add_common_flags(CLI::App* cmd, CommonOpts& common) {
  cmd->add_option("--strategy", common.strategy, "Observation selector")
      ->check(CLI::IsMember({"id3-safe", "id3-naive"}));
  cmd->add_option("--latency-k", common.latency_k, "Agent latency between reads")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--deadline-boundary", common.boundary,
                  "Indistinguishability boundary for cost cross-checks")
      ->check(CLI::IsMember({"inclusive", "strict"}));
  cmd->add_flag("--debug-assert", common.debug_assert,
                "Check per-call cost preservation while building");
}

int cmd_build(const std::string& teset_path, const std::string& actions_path,
              const CommonOpts& common, const std::string& out_path, const std::string& dot_path,
              bool forest) {
  Inputs in = load_inputs(teset_path, actions_path);
  BuildOptions opts = build_options(common);
  Rational set_cost = teset_expected_cost(in.teset, in.model, boundary_options(common));

  if (forest) {
    auto trees = build_forest(in.teset, in.model, opts);
    io::json doc;
    doc["kind"] = "forest";
    doc["trees"] = io::json::object();
    for (const auto& [sensor, tree] : trees) {
      doc["trees"][in.teset.sensors[static_cast<size_t>(sensor)]] =
          io::tree_to_json(tree, in.teset, in.model);
      std::cout << "detector " << in.teset.sensors[static_cast<size_t>(sensor)] << ": "
                << tree.node_count() << " nodes, cost "
                << cost_str(expected_cost(tree, in.teset, in.model)) << "\n";
    }
    if (!out_path.empty()) {
      io::write_text_file(out_path, doc.dump(2) + "\n");
    } else {
      std::cout << doc.dump(2) << "\n";
    }
    return 0;
  }

  TemporalDecisionTree tree = build_temporal_tree(in.teset, in.model, opts);
  Rational tree_cost = expected_cost(tree, in.teset, in.model);
  std::cout << "tree: " << tree.node_count() << " nodes, " << tree.leaves().size()
            << " leaves; expected cost " << cost_str(tree_cost) << "; example-set cost "
            << cost_str(set_cost) << "\n";
  if (tree_cost > set_cost) {
    std::cout << "warning: tree cost exceeds the example-set cost by "
              << cost_str(tree_cost - set_cost)
              << "; the selector discarded discriminating observations\n";
  }
  io::json doc = io::tree_to_json(tree, in.teset, in.model);
  if (!out_path.empty()) {
    io::write_text_file(out_path, doc.dump(2) + "\n");
  } else {
    std::cout << doc.dump(2) << "\n";
  }
  if (!dot_path.empty()) {
    io::write_text_file(dot_path, io::tree_to_dot(tree, in.teset, in.model));
  }
  return 0;
}

int cmd_cost(const std::string& tree_path, const std::string& teset_path,
             const std::string& actions_path, const CommonOpts& common) {
  Inputs in = load_inputs(teset_path, actions_path);
  TemporalDecisionTree tree = io::load_tree(tree_path, in.teset, in.model);
  CompatibilityReport compat = is_compatible(tree, in.teset, in.model);
  if (!compat.compatible) {
    for (const std::string& d : compat.diagnostics) std::cerr << "incompatible: " << d << "\n";
    return kExitIncompatible;
  }
  Rational tree_cost = expected_cost(tree, in.teset, in.model);
  Rational set_cost = teset_expected_cost(in.teset, in.model, boundary_options(common));
  std::cout << "tree cost:        " << cost_str(tree_cost) << "\n";
  std::cout << "example-set cost: " << cost_str(set_cost) << "\n";
  std::cout << "difference:       " << cost_str(tree_cost - set_cost) << "\n";
  return 0;
}

int verify_one(const TeSet& ts, const ActionModel& model, const CommonOpts& common, bool no_brute,
               const BruteLimits& limits, const std::string& label) {
  BuildOptions opts = build_options(common);
  opts.strategy = Strategy::id3_safe;
  TemporalDecisionTree tree = build_temporal_tree(ts, model, opts);
  Rational tree_cost = expected_cost(tree, ts, model);
  Rational set_cost = teset_expected_cost(ts, model, boundary_options(common));
  if (tree_cost != set_cost) {
    std::cerr << label << ": built tree costs " << cost_str(tree_cost)
              << " but the example set costs " << cost_str(set_cost) << "\n";
    std::cerr << io::tree_to_json(tree, ts, model).dump(2) << "\n";
    return kExitMismatch;
  }
  if (no_brute) {
    std::cout << label << ": tree cost = example-set cost = " << cost_str(set_cost)
              << " (exhaustive check skipped)\n";
    return 0;
  }
  BruteResult brute = brute_force_min_cost(ts, model, limits);
  if (brute.min_cost != set_cost) {
    std::cerr << label << ": exhaustive minimum " << cost_str(brute.min_cost)
              << " differs from the example-set cost " << cost_str(set_cost) << "; witness:\n";
    std::cerr << io::tree_to_json(brute.witness, ts, model).dump(2) << "\n";
    return kExitMismatch;
  }
  std::cout << label << ": tree cost = example-set cost = exhaustive minimum = "
            << cost_str(set_cost) << "\n";
  return 0;
}

int cmd_verify(const std::string& teset_path, const std::string& actions_path,
               const CommonOpts& common, bool no_brute, const BruteLimits& limits, int random_cases,
               uint64_t seed) {
  if (random_cases > 0) {
    std::mt19937_64 rng(seed);
    for (int i = 0; i < random_cases; ++i) {
      GenParams params = random_small_params(rng, rng());
      GenCase gen = generate_case(params);
      int rc = verify_one(gen.teset, gen.model, common, no_brute, limits,
                          "case " + std::to_string(i));
      if (rc != 0) return rc;
    }
    std::cout << random_cases << " random cases verified\n";
    return 0;
  }
  Inputs in = load_inputs(teset_path, actions_path);
  return verify_one(in.teset, in.model, common, no_brute, limits, teset_path);
}

int cmd_simulate(const std::string& tree_path, const std::string& teset_path,
                 const std::string& actions_path, const CommonOpts& common,
                 const std::string& trace_path) {
  Inputs in = load_inputs(teset_path, actions_path);
  TemporalDecisionTree tree = io::load_tree(tree_path, in.teset, in.model);
  Rational k = rational_from_double(common.latency_k);

  if (!trace_path.empty()) {
    SnapshotStream stream = io::load_trace(trace_path, in.teset);
    SimulationReport report = run_tree(tree, in.teset, stream, in.model, k);
    std::cout << "action " << in.model.compound_name(report.action) << " at time "
              << cost_str(report.decision_time) << "\n";
    return 0;
  }
  CompatibilityReport compat = is_compatible(tree, in.teset, in.model);
  if (!compat.compatible) {
    for (const std::string& d : compat.diagnostics) std::cerr << "incompatible: " << d << "\n";
    return kExitIncompatible;
  }
  bool all_met = true;
  std::printf("%-12s %-12s %-10s %s\n", "situation", "action", "time", "deadline");
  for (const SimulationReport& r : simulate_all(tree, in.teset, in.model, k)) {
    bool met = r.deadline_met.value_or(true);
    all_met = all_met && met;
    std::printf("%-12s %-12s %-10s %s\n", r.situation.c_str(),
                in.model.compound_name(r.action).c_str(), cost_str(r.decision_time).c_str(),
                met ? "met" : "MISSED");
  }
  if (!all_met) {
    std::cerr << "error: some situations miss their deadline\n";
    return 1;
  }
  return 0;
}

int cmd_report(const std::string& teset_path, const std::string& actions_path,
               const CommonOpts& common) {
  Inputs in = load_inputs(teset_path, actions_path);
  BuildOptions opts = build_options(common);
  BuildTrace trace;
  opts.trace = &trace;
  TemporalDecisionTree tree = build_temporal_tree(in.teset, in.model, opts);
  for (size_t i = 0; i < trace.calls.size(); ++i) {
    const BuildCallRecord& call = trace.calls[i];
    std::cout << "call " << i << ": {";
    for (size_t j = 0; j < call.subset.size(); ++j) {
      std::cout << (j ? ", " : "") << call.subset[j];
    }
    std::cout << "}\n";
    if (call.deadline) {
      std::cout << "  deadline " << cost_str(*call.deadline) << "; useful " << call.useful_count
                << ", valid " << call.valid_count << "\n";
    }
    if (!call.scan.empty()) {
      std::cout << "  scan:";
      for (const auto& [label, cost] : call.scan) {
        std::cout << " t=" << cost_str(label) << " cost " << cost_str(cost) << " |";
      }
      std::cout << " t_max = " << cost_str(*call.t_max) << "\n";
    }
    for (const auto& [obs, e] : call.candidate_entropies) {
      std::cout << "    " << in.teset.observation_name(obs) << "  " << entropy_str(e) << "\n";
    }
    if (call.leaf) {
      std::cout << "  leaf: " << call.leaf_action << " (" << call.leaf_reason << ")\n";
    } else if (call.chosen) {
      std::cout << "  chosen: " << in.teset.observation_name(*call.chosen) << "\n";
    }
  }
  std::cout << "tree cost " << cost_str(expected_cost(tree, in.teset, in.model)) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Compiles temporal example sets into deadline-aware decision trees"};
  app.require_subcommand(1);

  CommonOpts common;
  std::string teset_path;
  std::string actions_path;
  std::string tree_path;
  std::string out_path;
  std::string dot_path;
  std::string trace_path;
  bool forest = false;
  bool no_brute = false;
  int random_cases = 0;
  uint64_t seed = 0;
  BruteLimits limits;

  CLI::App* build = app.add_subcommand("build", "Compile a te-set into a temporal decision tree");
  build->add_option("teset", teset_path, "te-set file")->required();
  build->add_option("actions", actions_path, "action-model file")->required();
  build->add_option("--out", out_path, "tree output file (stdout when omitted)");
  build->add_option("--dot", dot_path, "graph-visualization output file");
  build->add_flag("--forest", forest, "one tree per detecting sensor");
  add_common_flags(build, common);

  CLI::App* cost = app.add_subcommand("cost", "Compare a tree's cost with the te-set's cost");
  cost->add_option("tree", tree_path, "tree file")->required();
  cost->add_option("teset", teset_path, "te-set file")->required();
  cost->add_option("actions", actions_path, "action-model file")->required();
  add_common_flags(cost, common);

  CLI::App* verify = app.add_subcommand("verify", "Cross-check optimality against the oracle");
  verify->add_option("teset", teset_path, "te-set file");
  verify->add_option("actions", actions_path, "action-model file");
  verify->add_flag("--no-brute", no_brute, "skip the exhaustive search");
  verify->add_option("--random", random_cases, "verify N random small cases instead of files");
  verify->add_option("--seed", seed, "seed for --random");
  verify->add_option("--max-situations", limits.max_situations, "exhaustive-search limit");
  verify->add_option("--max-sensors", limits.max_sensors, "exhaustive-search limit");
  verify->add_option("--max-labels", limits.max_labels, "exhaustive-search limit");
  add_common_flags(verify, common);

  CLI::App* simulate = app.add_subcommand("simulate", "Replay a tree against situations or a trace");
  simulate->add_option("tree", tree_path, "tree file")->required();
  simulate->add_option("teset", teset_path, "te-set file")->required();
  simulate->add_option("actions", actions_path, "action-model file")->required();
  simulate->add_option("--trace", trace_path, "replay this snapshot trace instead of the rows");
  add_common_flags(simulate, common);

  CLI::App* report = app.add_subcommand("report", "Per-call diagnostics of a build");
  report->add_option("teset", teset_path, "te-set file")->required();
  report->add_option("actions", actions_path, "action-model file")->required();
  add_common_flags(report, common);

  CLI11_PARSE(app, argc, argv);

  try {
    if (build->parsed()) {
      return cmd_build(teset_path, actions_path, common, out_path, dot_path, forest);
    }
    if (cost->parsed()) {
      return cmd_cost(tree_path, teset_path, actions_path, common);
    }
    if (verify->parsed()) {
      if (random_cases <= 0 && (teset_path.empty() || actions_path.empty())) {
        std::cerr << "error: verify needs either input files or --random N\n";
        return kExitValidation;
      }
      return cmd_verify(teset_path, actions_path, common, no_brute, limits, random_cases, seed);
    }
    if (simulate->parsed()) {
      return cmd_simulate(tree_path, teset_path, actions_path, common, trace_path);
    }
    if (report->parsed()) {
      return cmd_report(teset_path, actions_path, common);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
