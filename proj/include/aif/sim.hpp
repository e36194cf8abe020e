#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

#include "aif/agent.hpp"
#include "aif/envs.hpp"

namespace aif {

/// Exit codes of the simulation runner.
enum ExitCode : int { kExitOk = 0, kExitInvalidInput = 1, kExitNumerical = 2 };

struct RunConfig {
  std::filesystem::path model_path;
  std::string env = "listing2";  ///< builtin name or path to a process file
  std::size_t steps = 10;
  std::uint64_t agent_seed = 0;
  std::uint64_t env_seed = 0;
  std::filesystem::path out;
  bool learn_A = false;
  bool learn_B = false;
  bool learn_D = false;
  double lr = 1.0;
  double gamma = 16.0;
  double alpha = 16.0;
  int policy_len = 1;
  bool stochastic_actions = false;
  EfeFlags efe;
  /// Fill wall_clock_ms with measured times. Off by default so that traces are
  /// byte-reproducible.
  bool record_timing = false;
};

/// One line of a trace. Field names in the JSON form match the member names.
struct TraceRecord {
  std::size_t t = 0;
  Observation obs;
  Belief qs;
  double vfe = 0.0;
  Vector q_pi;
  Vector G;
  std::vector<EfeBreakdown> efe_components;
  Action action;
  double wall_clock_ms = 0.0;
};

nlohmann::ordered_json to_json(const TraceRecord& record);

/// Returns an empty string when a parsed trace line satisfies the record
/// invariants (all fields present, each qs row and q_pi sum to one within 1e-9),
/// otherwise a description of the first problem.
std::string check_trace_record(const nlohmann::json& line);

struct RunSummary {
  std::size_t steps = 0;
  double mean_vfe = 0.0;
  /// Keyed by the action rendered as "[u0,u1,...]".
  std::map<std::string, std::size_t> action_histogram;
};

AgentOptions agent_options(const RunConfig& config);

/// Runs `config.steps` iterations of observe -> infer_states -> infer_policies ->
/// sample_action, with Dirichlet updates when enabled, writing one JSON line per
/// step to `trace`. update_A and update_B run every step (update_B from the
/// second step on); update_D runs once after the last step.
RunSummary run_simulation(Agent& agent, Environment& env, const RunConfig& config, std::ostream& trace);

/// Full `run` command: load and check inputs, simulate, write the trace file and
/// print a summary. Returns an ExitCode. No trace file is created when the
/// inputs are rejected.
int run_command(const RunConfig& config, std::ostream& out, std::ostream& err);

/// `validate` command: parse the model file and print the validation report.
int validate_command(const std::filesystem::path& model_path, std::ostream& out, std::ostream& err);

}  // namespace aif
