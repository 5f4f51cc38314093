// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "bertini/density.hpp"
#include "bertini/dvr.hpp"
#include "bertini/errors.hpp"

namespace bertini {

/// Malformed or inconsistent experiment configuration (exit code 2).
class ConfigError : public DomainError {
 public:
  using DomainError::DomainError;
};

/// The schema shipped in schema/experiment.schema.json, compiled in.
const nlohmann::json& experiment_schema();

/// Violations of `schema` by `doc`, as "<json pointer>: message". Supports
/// the keywords the shipped schema uses: type, enum, properties, required,
/// additionalProperties, patternProperties, items, minItems, maxItems,
/// minimum, maximum, minLength, anyOf and local $ref.
std::vector<std::string> schema_violations(const nlohmann::json& schema, const nlohmann::json& doc);

enum class Command { Census, Zeta, Lift };
std::string to_string(Command c);

struct ExperimentKind {
  std::string kind;
  Command command;
  std::string anchor;  // the statement the experiment instantiates
};
const std::vector<ExperimentKind>& experiment_registry();

struct Tolerances {
  std::optional<double> fallback;
  std::map<int, double> per_degree;
  bool trend = false;
  bool exact = false;  // empirical must equal the exact prediction
  bool any() const { return fallback || !per_degree.empty() || trend || exact; }
};

struct ExperimentConfig {
  nlohmann::json raw;
  std::string name;
  std::string kind;
  Command command = Command::Census;
  FieldPtr field;
  int n = 0;
  std::optional<Experiment> census;  // density kinds
  std::optional<LiftProblem> lift;   // dvr_lift
  SubschemeSpec zeta_X;              // zeta_table
  std::vector<int> zeta_s;
  int B = 12;
  Tolerances tolerance;
  std::string out;

  /// Schema check, then semantic checks; throws ConfigError.
  static ExperimentConfig parse(const nlohmann::json& doc);
  static ExperimentConfig load(const std::string& path);
};

struct RunOptions {
  std::optional<int> threads;
  std::optional<std::uint64_t> seed;
};

struct RunOutcome {
  /// 0 when every scheduled tolerance holds and nothing was inconclusive.
  int exit_code = 0;
  /// File name -> contents; deterministic for a given config and seed.
  std::map<std::string, std::string> artifacts;
  std::string summary;
};

/// Throws ConfigError when the kind does not belong to `command`,
/// CapExceeded on enumeration caps.
RunOutcome run_experiment(const ExperimentConfig& config, Command command, const RunOptions& opts = {});

/// Writes every artifact under `dir`, creating it.
void write_artifacts(const RunOutcome& outcome, const std::string& dir);

}  // namespace bertini
