// Command-line runner: simulate an agent against an environment and write a
// JSON-lines trace, or validate a model file.

#include <iostream>

#include "CLI11.hpp"

#include "aif/sim.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Discrete active inference simulator"};
  app.require_subcommand(1);

  aif::RunConfig config;
  bool no_utility = false;
  bool no_state_info_gain = false;
  bool param_info_gain = false;

  auto* run = app.add_subcommand("run", "Run an agent-environment loop and write a trace");
  run->add_option("--model", config.model_path, "Generative model file")->required();
  run->add_option("--env", config.env, "listing2, epistemic_chamber, or a process file")->required();
  run->add_option("--steps", config.steps, "Number of timesteps")->required();
  run->add_option("--agent-seed", config.agent_seed, "Seed for action sampling");
  run->add_option("--env-seed", config.env_seed, "Seed for the environment");
  run->add_option("--out", config.out, "Trace output path (JSON lines)")->required();
  run->add_flag("--learn-a", config.learn_A, "Update pA every step");
  run->add_flag("--learn-b", config.learn_B, "Update pB every step");
  run->add_flag("--learn-d", config.learn_D, "Update pD at the end of the run");
  run->add_option("--lr", config.lr, "Dirichlet learning rate")->check(CLI::PositiveNumber);
  run->add_option("--gamma", config.gamma, "Policy precision");
  run->add_option("--alpha", config.alpha, "Action precision")->check(CLI::PositiveNumber);
  run->add_option("--policy-len", config.policy_len, "Policy horizon")->check(CLI::PositiveNumber);
  run->add_flag("--stochastic-actions", config.stochastic_actions, "Sample actions instead of taking the argmax");
  run->add_flag("--no-utility", no_utility, "Drop the utility term from G");
  run->add_flag("--no-state-info-gain", no_state_info_gain, "Drop the state information gain from G");
  run->add_flag("--param-info-gain", param_info_gain, "Add pA/pB novelty to G");
  run->add_flag("--record-timing", config.record_timing, "Store per-step wall-clock times in the trace");

  std::filesystem::path validate_path;
  auto* validate = app.add_subcommand("validate", "Check a model file");
  validate->add_option("--model", validate_path, "Generative model file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : aif::kExitInvalidInput;
  }

  if (*run) {
    config.efe.use_utility = !no_utility;
    config.efe.use_states_info_gain = !no_state_info_gain;
    config.efe.use_param_info_gain = param_info_gain;
    return aif::run_command(config, std::cout, std::cerr);
  }
  return aif::validate_command(validate_path, std::cout, std::cerr);
}
