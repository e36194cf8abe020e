#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "aif/control.hpp"
#include "aif/genmodel.hpp"
#include "aif/inference.hpp"
#include "aif/learning.hpp"

namespace aif {

struct AgentOptions {
  int policy_len = 1;
  /// Factors whose controls are enumerated; omitted means every factor with U > 1.
  std::optional<std::vector<std::size_t>> control_factors;
  /// Explicit policy set; replaces enumeration when present.
  std::optional<std::vector<Policy>> policies;
  InferenceOptions inference;
  EfeFlags efe;
  double gamma = 16.0;
  double alpha = 16.0;
  ActionSelection action_selection = ActionSelection::Deterministic;
  LearningOptions learn_A;
  LearningOptions learn_B;
  LearningOptions learn_D;
  std::uint64_t seed = 0;
  /// Keep every posterior of the episode, not just the last two.
  bool save_belief_history = false;
};

/// Perceive-plan-act loop around one generative model.
///
/// Per timestep: infer_states(obs) -> infer_policies() -> sample_action().
/// Calling infer_states alone on every step is valid (perception only); a
/// repeated infer_states without an action in between re-infers the same
/// timestep from the same prior. Not thread-safe.
class Agent {
 public:
  Agent(GenerativeModel model, AgentOptions options = {});

  const Belief& infer_states(const Observation& obs);
  const PolicyPosterior& infer_policies();
  const Action& sample_action();

  /// Dirichlet updates using the stored observation, beliefs and action.
  /// Each replaces the matching categorical array with the new expectation.
  const std::vector<Tensor>& update_A();
  const std::vector<Tensor>& update_B();
  const std::vector<Vector>& update_D();

  /// Starts a new episode. Learned counts and arrays are kept.
  void reset();

  const GenerativeModel& model() const noexcept { return model_; }
  const AgentOptions& options() const noexcept { return options_; }
  const std::vector<Policy>& policies() const noexcept { return policies_; }
  const std::vector<std::size_t>& num_controls() const noexcept { return num_controls_; }

  const Belief& qs() const noexcept { return qs_; }
  /// Prior used by the most recent infer_states call.
  const Belief& prior() const noexcept { return prior_; }
  /// Posterior of the previous timestep, if one exists.
  const std::optional<Belief>& qs_prev() const noexcept { return qs_prev_; }
  /// Posterior of the episode's first timestep, if inferred.
  const std::optional<Belief>& qs_first() const noexcept { return qs_first_; }
  const std::vector<Belief>& belief_history() const noexcept { return history_; }
  const std::optional<PolicyPosterior>& q_pi() const noexcept { return q_pi_; }
  const std::optional<Action>& last_action() const noexcept { return last_action_; }
  const std::optional<Observation>& last_obs() const noexcept { return last_obs_; }
  double vfe() const noexcept { return vfe_; }
  std::size_t t() const noexcept { return t_; }

  /// Scalar view of the last action for single-factor models.
  std::size_t action_index() const;

 private:
  GenerativeModel model_;
  AgentOptions options_;
  std::vector<Policy> policies_;
  std::vector<std::size_t> num_controls_;
  std::mt19937_64 rng_;

  Belief qs_;
  Belief prior_;
  std::optional<Belief> qs_prev_;
  std::optional<Belief> qs_first_;
  std::vector<Belief> history_;
  std::optional<PolicyPosterior> q_pi_;
  std::optional<Action> last_action_;
  std::optional<Observation> last_obs_;
  double vfe_ = 0.0;
  std::size_t t_ = 0;

  bool inferred_this_step_ = false;
  bool planned_this_step_ = false;
};

}  // namespace aif
