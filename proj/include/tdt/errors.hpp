#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace tdt {

enum class Errc {
  validation,        // malformed or inconsistent input
  incompatibility,   // tree does not fit the example set / action model
  limits,            // instance too large for the exhaustive oracle
  mismatch,          // optimality cross-check failed
  undefined_reading, // access past a situation's deadline
  empty_subset,
  bad_distribution,
  bad_precondition,
  missing_edge,      // executed value has no outgoing edge
  missing_snapshot,  // stream lacks a required time / sensor
};

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

struct ValidationIssue {
  std::string field;
  std::string message;
};

struct ValidationReport {
  std::vector<ValidationIssue> errors;
  std::vector<ValidationIssue> warnings;

  bool ok() const { return errors.empty(); }
  void error(std::string field, std::string message) {
    errors.push_back({std::move(field), std::move(message)});
  }
  void warn(std::string field, std::string message) {
    warnings.push_back({std::move(field), std::move(message)});
  }
  void merge(const ValidationReport& other) {
    errors.insert(errors.end(), other.errors.begin(), other.errors.end());
    warnings.insert(warnings.end(), other.warnings.begin(), other.warnings.end());
  }
};

}  // namespace tdt
